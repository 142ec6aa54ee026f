#pragma once

#include <utility>

#include "cflow/pressure_law.hpp"

namespace cflow {

/// Bulk state at finite rigidity: density in (0, rho_star), heading in (0, pi).
struct EpsState {
  double rho;
  double theta;
};

/// Headings this close to {0, pi} are rejected rather than clamped: the
/// impulse potential Psi(cos theta) diverges there.
inline constexpr double kThetaEdgeTol = 1e-9;
/// Below this |theta_l - theta_r| two headings count as equal (contact-side
/// degeneracy of the jump locus).
inline constexpr double kEqualAngleTol = 1e-12;
/// Below this |[rho]| a jump is a contact and its speed formula degenerates.
inline constexpr double kDegenerateJumpTol = 1e-14;

void validate(const EpsState& s, const ScaledPressure& sp);

enum class WaveFamily { Minus, Plus };
inline int family_sign(WaveFamily f) { return f == WaveFamily::Minus ? -1 : +1; }

/// lambda_{-,+} = cos(theta) -+ sqrt(eps p'(rho) rho) * sin(theta).
std::pair<double, double> eigenvalues(const EpsState& s, const ScaledPressure& sp);
double eigenvalue(WaveFamily f, const EpsState& s, const ScaledPressure& sp);

/// Right eigenvector in the (rho, w = Psi(cos theta)) plane, unnormalized:
/// (rho sin theta, sign(f) sqrt(eps p' rho)).
std::pair<double, double> eigenvector(WaveFamily f, const EpsState& s, const ScaledPressure& sp);

/// H(l, r) = [Phi + eps p] [rho] - [Psi] [rho cos theta]. A pair is a jump
/// solution iff H = 0 with speed sigma = [rho cos theta]/[rho]. The factor
/// layout makes H(l, r) == H(r, l) exactly as evaluated.
double hugoniot_residual(const EpsState& l, const EpsState& r, const ScaledPressure& sp);

/// sigma = [rho cos theta] / [rho]; DegenerateJumpError when |[rho]| is below
/// kDegenerateJumpTol * max(rho_l, rho_r).
double shock_speed(const EpsState& l, const EpsState& r);

/// The unique zero of rho -> H(left, (rho, theta_r)) in (left.rho, rho_star).
/// H is strictly convex there with H(left.rho) < 0 whenever theta_r differs
/// from left.theta, so the bracket always carries a sign change; equal
/// headings raise NoRootError (H = eps [p][rho] > 0 has no zero).
double hugoniot_solve_rho(const EpsState& left, double theta_r, const ScaledPressure& sp);

/// Diagnostic: whether H(left, (rho, theta_r)) also vanishes at some density
/// below left.rho (a large-eps artifact on the sub-compressive side).
bool hugoniot_low_root(const EpsState& left, double theta_r, const ScaledPressure& sp);

/// Integral curve of the family through `left`:
/// theta(rho) = theta_l - sign(f) * Int_{rho_l}^{rho} sqrt(eps p'(u)/u) du.
/// rho may be 0 (vacuum end) up to the congestion guard.
double rarefaction_theta(const EpsState& left, double rho, WaveFamily f, const ScaledPressure& sp);

/// Inverse of rarefaction_theta along the same curve; OutOfRangeError when
/// theta lies beyond the vacuum end or past the congestion guard.
double rarefaction_rho(const EpsState& left, double theta, WaveFamily f, const ScaledPressure& sp);

/// Heading at which the family's characteristic field stops being genuinely
/// nonlinear at density rho: cot(theta) = sign(f) * G_eps(rho)/2 with
/// G_eps = (p'' rho + 3 p') rho / (sqrt(eps) (p' rho)^{3/2}).
/// Plus branch lies in (0, pi/2), Minus in (pi/2, pi); grad(lambda_f) . r_f
/// vanishes exactly on these curves and sign(f) grad(lambda_f) . r_f is
/// positive strictly between them.
double linearly_degenerate_theta(double rho, WaveFamily f, const ScaledPressure& sp);

/// Lax inequalities lambda_f(r) <= sigma <= lambda_f(l) (within 1e-8) for an
/// RH-connectable pair; NotAShockError when the pair fails the jump relations.
bool lax_admissible(const EpsState& l, const EpsState& r, WaveFamily f, const ScaledPressure& sp);

enum class ConservedPair { Mass, Psi, RhoPsi };

/// Residuals of the two chain-rule relations that tie a conserved quantity
/// g(rho, theta) to its flux f(rho, theta) for smooth solutions:
///   d_rho f = d_rho g cos(theta) - d_theta g sin(theta) eps p'(rho)
///   d_theta f = d_theta g cos(theta) - d_rho g rho sin(theta)
/// evaluated with central finite differences.
std::pair<double, double> conservative_pair_residual(ConservedPair pair, const EpsState& s,
                                                     const ScaledPressure& sp);

namespace detail {
/// Int_a^b sqrt(p'(u)/u) du for the unscaled law, signed (negative if b < a).
/// Closed forms for gamma in {1, 2}; otherwise adaptive quadrature after the
/// endpoint-absorbing substitutions t = (rho*-u)^{-(gamma-1)/2}, s = u^{gamma/2}.
double rarefaction_integral(const PressureLaw& law, double a, double b);
/// Quadrature-only route, used to cross-check the closed forms.
double rarefaction_integral_quad(const PressureLaw& law, double a, double b);
}  // namespace detail

}  // namespace cflow
