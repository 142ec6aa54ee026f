#pragma once

#include <stdexcept>

namespace cflow {

// Base class for every typed failure raised by the toolkit. Callers that only
// want "did it work" can catch this; tests discriminate on the subtypes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error { using Error::Error; };          // input outside an operation's domain
struct DegenerateJumpError : Error { using Error::Error; };  // |[rho]| below tolerance, speed undefined
struct NoRootError : Error { using Error::Error; };          // bracket carries no sign change
struct OutOfRangeError : Error { using Error::Error; };      // curve parameter beyond the reachable interval
struct QuadratureError : Error { using Error::Error; };      // adaptive quadrature failed to converge
struct ConvergenceError : Error { using Error::Error; };     // iteration failed to meet its tolerance
struct NotAShockError : Error { using Error::Error; };       // admissibility asked of a non-jump pair
struct GuardError : Error { using Error::Error; };           // epsilon too large for the wave-curve construction
struct VacuumInputError : Error { using Error::Error; };     // vacuum state where a bulk state is required
struct GeometryError : Error { using Error::Error; };        // cluster edges not touching at collision time
struct CongestionBreachError : Error { using Error::Error; };
struct VacuumBreachError : Error { using Error::Error; };
struct InterfaceClassError : Error { using Error::Error; };  // discontinuity outside the interface catalogue
struct ConfigError : Error { using Error::Error; };          // malformed or inconsistent run configuration

}  // namespace cflow
