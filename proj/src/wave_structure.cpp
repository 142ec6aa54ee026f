#include "cflow/wave_structure.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cflow/quadrature.hpp"
#include "cflow/rootfind.hpp"

namespace cflow {

namespace {

constexpr double kPi = std::numbers::pi;

double density_ceiling(const PressureLaw& law) { return law.rho_star * (1.0 - kCongestionMargin); }

}  // namespace

void validate(const EpsState& s, const ScaledPressure& sp) {
  validate(sp);
  if (!(s.rho > 0.0)) throw VacuumInputError("state: rho must be positive");
  if (!(s.rho < density_ceiling(sp.law)))
    throw DomainError("state: rho at or beyond congestion, got " + std::to_string(s.rho));
  if (!(s.theta > kThetaEdgeTol && s.theta < kPi - kThetaEdgeTol))
    throw DomainError("state: theta must lie strictly inside (0, pi)");
}

std::pair<double, double> eigenvalues(const EpsState& s, const ScaledPressure& sp) {
  validate(s, sp);
  const double c = std::cos(s.theta);
  const double sn = std::sin(s.theta);
  const double chi = std::sqrt(p_prime(sp, s.rho) * s.rho);
  return {c - chi * sn, c + chi * sn};
}

double eigenvalue(WaveFamily f, const EpsState& s, const ScaledPressure& sp) {
  const auto [lm, lp] = eigenvalues(s, sp);
  return f == WaveFamily::Minus ? lm : lp;
}

std::pair<double, double> eigenvector(WaveFamily f, const EpsState& s, const ScaledPressure& sp) {
  validate(s, sp);
  const double chi = std::sqrt(p_prime(sp, s.rho) * s.rho);
  return {s.rho * std::sin(s.theta), family_sign(f) * chi};
}

double hugoniot_residual(const EpsState& l, const EpsState& r, const ScaledPressure& sp) {
  const double cl = std::cos(l.theta), cr = std::cos(r.theta);
  const double jump_rho = r.rho - l.rho;
  const double jump_flux = r.rho * cr - l.rho * cl;
  const double jump_pot = (phi(cr) + p(sp, r.rho)) - (phi(cl) + p(sp, l.rho));
  const double jump_psi = psi(cr) - psi(cl);
  return jump_pot * jump_rho - jump_psi * jump_flux;
}

double shock_speed(const EpsState& l, const EpsState& r) {
  const double jump_rho = r.rho - l.rho;
  if (std::abs(jump_rho) <= kDegenerateJumpTol * std::max(l.rho, r.rho))
    throw DegenerateJumpError("shock_speed: |[rho]| below tolerance");
  return (r.rho * std::cos(r.theta) - l.rho * std::cos(l.theta)) / jump_rho;
}

double hugoniot_solve_rho(const EpsState& left, double theta_r, const ScaledPressure& sp) {
  validate(left, sp);
  if (!(theta_r > kThetaEdgeTol && theta_r < kPi - kThetaEdgeTol))
    throw DomainError("hugoniot_solve_rho: theta_r must lie strictly inside (0, pi)");
  if (std::abs(theta_r - left.theta) <= kEqualAngleTol)
    throw NoRootError("hugoniot_solve_rho: equal headings leave no zero above left.rho");
  // the bracket top must stay evaluable by p(), i.e. strictly below the
  // congestion guard density_ceiling = rho_star (1 - kCongestionMargin)
  const double hi = sp.law.rho_star * (1.0 - 1e-12);
  if (!(left.rho < hi))
    throw NoRootError("hugoniot_solve_rho: datum too close to congestion to bracket");
  auto h = [&](double rho) { return hugoniot_residual(left, {rho, theta_r}, sp); };
  // H(left.rho) = -rho_l [Psi][cos] < 0 and H -> +inf at congestion, and H is
  // strictly convex in rho on (left.rho, rho_star): exactly one zero inside.
  return find_root(h, left.rho, hi, {1e-15 * sp.law.rho_star, 240});
}

bool hugoniot_low_root(const EpsState& left, double theta_r, const ScaledPressure& sp) {
  if (std::abs(theta_r - left.theta) <= kEqualAngleTol) return false;
  const double probe = left.rho * 1e-8;
  return hugoniot_residual(left, {probe, theta_r}, sp) > 0.0;
}

namespace detail {

namespace {

// sqrt(p'(u)/u) = sqrt(gamma) rho*^{(gamma+1)/2} u^{(gamma-2)/2} (rho*-u)^{-(gamma+1)/2}
double curve_weight(const PressureLaw& law) {
  return std::sqrt(law.gamma) * std::pow(law.rho_star, 0.5 * (law.gamma + 1.0));
}

// Quadrature over [a, b] with 0 <= a <= b <= rho*/2: substitute s = u^{gamma/2}
// so the u^{(gamma-2)/2} du factor becomes (2/gamma) ds exactly.
double lower_piece(const PressureLaw& law, double a, double b) {
  if (!(b > a)) return 0.0;
  const double g = law.gamma;
  const double e1 = -0.5 * (g + 1.0);
  auto f = [&](double s) { return std::pow(law.rho_star - std::pow(s, 2.0 / g), e1); };
  const double s_a = std::pow(a, 0.5 * g);
  const double s_b = std::pow(b, 0.5 * g);
  return curve_weight(law) * (2.0 / g) * integrate(f, s_a, s_b);
}

// Quadrature over [a, b] with rho*/2 <= a <= b < rho*: substitute
// t = (rho*-u)^{-(gamma-1)/2} (log variable for gamma = 1) so the singular
// (rho*-u)^{-(gamma+1)/2} du factor becomes a constant multiple of dt.
double upper_piece(const PressureLaw& law, double a, double b) {
  if (!(b > a)) return 0.0;
  const double g = law.gamma;
  const double e0 = 0.5 * (g - 2.0);
  if (std::abs(g - 1.0) < 1e-12) {
    auto f = [&](double t) { return std::pow(law.rho_star - std::exp(-t), e0); };
    return curve_weight(law) * integrate(f, -std::log(law.rho_star - a), -std::log(law.rho_star - b));
  }
  const double q = 0.5 * (g - 1.0);
  auto f = [&](double t) { return std::pow(law.rho_star - std::pow(t, -1.0 / q), e0); };
  const double t_a = std::pow(law.rho_star - a, -q);
  const double t_b = std::pow(law.rho_star - b, -q);
  return curve_weight(law) * (1.0 / q) * integrate(f, t_a, t_b);
}

}  // namespace

double rarefaction_integral_quad(const PressureLaw& law, double a, double b) {
  const double sign = b >= a ? 1.0 : -1.0;
  const double lo = std::min(a, b), hi = std::max(a, b);
  const double mid = 0.5 * law.rho_star;
  const double value = lower_piece(law, lo, std::min(hi, mid)) + upper_piece(law, std::max(lo, mid), hi);
  return sign * value;
}

double rarefaction_integral(const PressureLaw& law, double a, double b) {
  const double rs = law.rho_star;
  if (std::abs(law.gamma - 2.0) < 1e-12) {
    // Int sqrt(2) rs^{3/2} (rs-u)^{-3/2} du = 2 sqrt(2) rs^{3/2} [(rs-u)^{-1/2}]
    const double c = 2.0 * std::sqrt(2.0) * std::pow(rs, 1.5);
    return c * (1.0 / std::sqrt(rs - b) - 1.0 / std::sqrt(rs - a));
  }
  if (std::abs(law.gamma - 1.0) < 1e-12) {
    // u = rs sin^2(phi) turns the integrand into 2 sqrt(rs) sec(phi)
    auto prim = [&](double u) {
      const double phi_u = std::asin(std::sqrt(u / rs));
      return 2.0 * std::sqrt(rs) * std::log(1.0 / std::cos(phi_u) + std::tan(phi_u));
    };
    return prim(b) - prim(a);
  }
  return rarefaction_integral_quad(law, a, b);
}

}  // namespace detail

double rarefaction_theta(const EpsState& left, double rho, WaveFamily f, const ScaledPressure& sp) {
  validate(left, sp);
  if (!(rho >= 0.0) || rho > density_ceiling(sp.law))
    throw DomainError("rarefaction_theta: rho outside [0, congestion guard]");
  const double j = detail::rarefaction_integral(sp.law, left.rho, rho);
  return left.theta - family_sign(f) * std::sqrt(sp.epsilon) * j;
}

double rarefaction_rho(const EpsState& left, double theta, WaveFamily f, const ScaledPressure& sp) {
  validate(left, sp);
  const double ceil = density_ceiling(sp.law);
  // theta(rho) is strictly monotone along the curve: increasing in rho for the
  // Minus family, decreasing for Plus.
  const double theta_vac = rarefaction_theta(left, 0.0, f, sp);
  const double theta_top = rarefaction_theta(left, ceil, f, sp);
  const double lo_th = std::min(theta_vac, theta_top);
  const double hi_th = std::max(theta_vac, theta_top);
  if (!(theta >= lo_th && theta <= hi_th))
    throw OutOfRangeError("rarefaction_rho: heading beyond the curve's reachable interval");
  if (std::abs(sp.law.gamma - 2.0) < 1e-12) {
    // closed-form inverse for gamma = 2 (the dominant hot path)
    const double rs = sp.law.rho_star;
    const double c = 2.0 * std::sqrt(2.0) * std::pow(rs, 1.5) * std::sqrt(sp.epsilon);
    // theta = theta_l - s_f * c * ((rs-rho)^{-1/2} - (rs-rho_l)^{-1/2})
    const double q = 1.0 / std::sqrt(rs - left.rho) + family_sign(f) * (left.theta - theta) / c;
    if (!(q > 0.0)) throw OutOfRangeError("rarefaction_rho: heading beyond the vacuum end");
    const double rho = rs - 1.0 / (q * q);
    if (rho > ceil) throw OutOfRangeError("rarefaction_rho: heading beyond the congestion guard");
    return std::max(rho, 0.0);
  }
  auto g = [&](double rho) { return rarefaction_theta(left, rho, f, sp) - theta; };
  return find_root(g, 0.0, ceil, {1e-15 * sp.law.rho_star, 240});
}

double linearly_degenerate_theta(double rho, WaveFamily f, const ScaledPressure& sp) {
  validate(sp);
  if (!(rho > 0.0 && rho < density_ceiling(sp.law)))
    throw DomainError("linearly_degenerate_theta: rho outside (0, congestion guard)");
  const double pp = p_prime(sp.law, rho);
  const double ps = p_second(sp.law, rho);
  const double g = (ps * rho + 3.0 * pp) * rho /
                   (std::sqrt(sp.epsilon) * std::pow(pp * rho, 1.5));
  // cot(theta) = sign(f) * g/2; Plus lands in (0, pi/2), Minus in (pi/2, pi)
  return 0.5 * kPi - family_sign(f) * std::atan(0.5 * g);
}

bool lax_admissible(const EpsState& l, const EpsState& r, WaveFamily f, const ScaledPressure& sp) {
  validate(l, sp);
  validate(r, sp);
  if (std::abs(l.rho - r.rho) <= kDegenerateJumpTol * std::max(l.rho, r.rho) &&
      std::abs(l.theta - r.theta) <= kEqualAngleTol)
    return true;  // degenerate (zero-strength) jump
  const double h = hugoniot_residual(l, r, sp);
  const double scale = std::max({1.0, std::abs(r.rho - l.rho), l.rho, r.rho});
  if (std::abs(h) > 1e-8 * scale * std::max(1.0, p(sp, l.rho) + p(sp, r.rho)))
    throw NotAShockError("lax_admissible: pair fails the jump relations");
  const double sigma = shock_speed(l, r);
  // sigma = [rho cos theta]/[rho] has conditioning d sigma/d rho = (cos theta
  // - sigma)/[rho] and d sigma/d theta = -rho sin theta/[rho] per endpoint, so
  // ulp-level endpoint noise inflates by that factor on weak jumps; widen the
  // slack accordingly or roundoff fails genuine weak shocks
  auto cond_term = [&](const EpsState& s) {
    return s.rho * (std::abs(std::cos(s.theta) - sigma) + std::abs(std::sin(s.theta)) * s.theta);
  };
  const double cond = (cond_term(l) + cond_term(r)) / std::abs(r.rho - l.rho);
  const double slack = 1e-8 + 8.0 * std::numeric_limits<double>::epsilon() * cond;
  return eigenvalue(f, r, sp) <= sigma + slack && sigma <= eigenvalue(f, l, sp) + slack;
}

namespace {

struct PairFns {
  // g: conserved density, f: flux, both as functions of (rho, theta)
  double (*g)(const ScaledPressure&, double, double);
  double (*f)(const ScaledPressure&, double, double);
};

// Int_{rho*/2}^{rho} u eps p'(u) du; only differences enter the residuals so
// the base point is arbitrary.
double momentum_pressure(const ScaledPressure& sp, double rho) {
  const double base = 0.5 * sp.law.rho_star;
  auto f = [&](double u) { return u * p_prime(sp, u); };
  const double sign = rho >= base ? 1.0 : -1.0;
  return sign * integrate(f, std::min(base, rho), std::max(base, rho), 1e-13);
}

const PairFns kPairs[3] = {
    {[](const ScaledPressure&, double rho, double) { return rho; },
     [](const ScaledPressure&, double rho, double theta) { return rho * std::cos(theta); }},
    {[](const ScaledPressure&, double, double theta) { return psi(std::cos(theta)); },
     [](const ScaledPressure& sp, double rho, double theta) {
       return phi(std::cos(theta)) + p(sp, rho);
     }},
    {[](const ScaledPressure&, double rho, double theta) { return rho * psi(std::cos(theta)); },
     [](const ScaledPressure& sp, double rho, double theta) {
       return rho * std::cos(theta) * psi(std::cos(theta)) + momentum_pressure(sp, rho);
     }}};

}  // namespace

std::pair<double, double> conservative_pair_residual(ConservedPair pair, const EpsState& s,
                                                     const ScaledPressure& sp) {
  validate(s, sp);
  const PairFns& fns = kPairs[static_cast<int>(pair)];
  const double h_rho = 1e-6 * sp.law.rho_star;
  const double h_th = 1e-6;
  auto d_rho = [&](auto&& fn) {
    return (fn(sp, s.rho + h_rho, s.theta) - fn(sp, s.rho - h_rho, s.theta)) / (2.0 * h_rho);
  };
  auto d_th = [&](auto&& fn) {
    return (fn(sp, s.rho, s.theta + h_th) - fn(sp, s.rho, s.theta - h_th)) / (2.0 * h_th);
  };
  const double g_rho = d_rho(fns.g), g_th = d_th(fns.g);
  const double f_rho = d_rho(fns.f), f_th = d_th(fns.f);
  const double c = std::cos(s.theta), sn = std::sin(s.theta);
  const double r1 = f_rho - (g_rho * c - g_th * sn * p_prime(sp, s.rho));
  const double r2 = f_th - (g_th * c - g_rho * s.rho * sn);
  return {std::abs(r1), std::abs(r2)};
}

}  // namespace cflow
