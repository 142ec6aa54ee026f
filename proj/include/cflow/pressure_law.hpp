#pragma once

#include "cflow/errors.hpp"

namespace cflow {

/// Singular congestion pressure p(rho) = (1/rho - 1/rho_star)^{-gamma} on
/// (0, rho_star). p is smooth, strictly increasing and blows up like
/// (rho_star - rho)^{-gamma} at the congestion density.
struct PressureLaw {
  double rho_star = 1.0;  ///< congestion density, > 0
  double gamma = 2.0;     ///< stiffness exponent, >= 1
};

/// Pressure scaled by the rigidity parameter: eps * p(rho). The eps -> 0
/// limit is the hard-congestion regime.
struct ScaledPressure {
  PressureLaw law;
  double epsilon = 1.0;  ///< > 0
};

void validate(const PressureLaw& law);
void validate(const ScaledPressure& sp);

/// Densities are accepted strictly inside (0, rho_star); anything at or above
/// rho_star * (1 - kCongestionMargin) is treated as congested and rejected.
inline constexpr double kCongestionMargin = 1e-13;

double p(const PressureLaw& law, double rho);
double p_prime(const PressureLaw& law, double rho);
double p_second(const PressureLaw& law, double rho);

inline double p(const ScaledPressure& sp, double rho) { return sp.epsilon * p(sp.law, rho); }
inline double p_prime(const ScaledPressure& sp, double rho) { return sp.epsilon * p_prime(sp.law, rho); }
inline double p_second(const ScaledPressure& sp, double rho) { return sp.epsilon * p_second(sp.law, rho); }

/// Inverse of rho -> eps * p(rho): the density at which the scaled pressure
/// equals pbar (> 0). Closed form: 1/rho = 1/rho_star + (eps/pbar)^{1/gamma}.
double p_inverse(const ScaledPressure& sp, double pbar);

/// Angle potential Psi(u) = atanh(u) = (1/2) ln((1+u)/(1-u)) on (-1, 1).
double psi(double u);
/// Companion potential Phi(u) = -(1/2) ln(1 - u^2); Psi(u) = Phi(u) + ln(1+u).
double phi(double u);
/// Inverse of Psi: tanh.
double psi_inverse(double w);

/// f_u(v) = Phi(v) - u Psi(v) for a fixed drive u in [-1, 1]. Strictly convex
/// in v with unique minimizer v = u.
double f_u(double u, double v);

}  // namespace cflow
