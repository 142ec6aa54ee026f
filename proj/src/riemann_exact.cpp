#include "cflow/riemann_exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cflow/rootfind.hpp"

namespace cflow {

namespace {

constexpr double kPi = std::numbers::pi;

// Smallest heading the curve intersection may probe: below ~1.5e-8 the cosine
// rounds to exactly 1 and the angle potentials are no longer evaluable.
constexpr double kFanInset = 1e-7;

double abs_theta(const SignedState& s) { return std::abs(s.theta); }
int theta_sign(const SignedState& s) { return s.theta < 0.0 ? -1 : +1; }

void validate_signed(const SignedState& s, const ScaledPressure& sp) {
  if (!(s.rho > 0.0)) throw VacuumInputError("riemann: vacuum datum not allowed");
  validate(EpsState{s.rho, abs_theta(s)}, sp);
}

// Both data must sit strictly between the two linearly degenerate curves,
// where grad(lambda) . r > 0 for both families; outside that band the wave
// curves are not monotone and the construction below is not valid.
void guard_band(const EpsState& s, const ScaledPressure& sp) {
  const double lo = linearly_degenerate_theta(s.rho, WaveFamily::Plus, sp);
  const double hi = linearly_degenerate_theta(s.rho, WaveFamily::Minus, sp);
  if (!(s.theta > lo && s.theta < hi))
    throw GuardError("riemann: datum outside the genuinely-nonlinear band; eps too large");
}

// Density on the left wave curve (through l, Minus family) at heading th:
// integral-curve branch below l.theta, jump branch above.
double wminus_rho(const EpsState& l, double th, const ScaledPressure& sp) {
  if (std::abs(th - l.theta) <= kEqualAngleTol) return l.rho;
  if (th < l.theta) return rarefaction_rho(l, th, WaveFamily::Minus, sp);
  return hugoniot_solve_rho(l, th, sp);
}

// Density on the right wave curve (through r, Plus family) at heading th.
double wplus_rho(const EpsState& r, double th, const ScaledPressure& sp) {
  if (std::abs(th - r.theta) <= kEqualAngleTol) return r.rho;
  if (th > r.theta) return rarefaction_rho(r, th, WaveFamily::Plus, sp);
  return hugoniot_solve_rho(r, th, sp);
}

struct AbsWaveSide {
  std::optional<Wave> wave;  // empty when the wave has zero strength
};

AbsWaveSide left_wave(const EpsState& l, const EpsState& m, double th, const ScaledPressure& sp) {
  if (th > l.theta + kEqualAngleTol)
    return {ShockWave{shock_speed(l, m), WaveFamily::Minus}};
  if (th < l.theta - kEqualAngleTol)
    return {RarefactionWave{eigenvalue(WaveFamily::Minus, l, sp),
                            eigenvalue(WaveFamily::Minus, m, sp), WaveFamily::Minus}};
  return {};
}

AbsWaveSide right_wave(const EpsState& r, const EpsState& m, double th, const ScaledPressure& sp) {
  if (th < r.theta - kEqualAngleTol)
    return {ShockWave{shock_speed(m, r), WaveFamily::Plus}};
  if (th > r.theta + kEqualAngleTol)
    return {RarefactionWave{eigenvalue(WaveFamily::Plus, m, sp),
                            eigenvalue(WaveFamily::Plus, r, sp), WaveFamily::Plus}};
  return {};
}

std::pair<double, double> wave_span(const Wave& w) {
  return std::visit(
      [](const auto& v) -> std::pair<double, double> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ShockWave>) return {v.speed, v.speed};
        else if constexpr (std::is_same_v<T, SignContactWave>) return {v.speed, v.speed};
        else return {v.speed_lo, v.speed_hi};
      },
      w);
}

bool is_vacuum_state(const SignedState& s) { return s.rho <= 1e-12; }

// Invert a fan: the state at similarity coordinate xi strictly inside the
// fan's speed interval, on the integral curve through the fan's flanks.
SamplePoint fan_state(const RiemannSolution& sol, std::size_t wi, double xi) {
  const auto& fan = std::get<RarefactionWave>(sol.waves[wi]);
  const SignedState& a = sol.states[wi];
  const SignedState& b = sol.states[wi + 1];
  const int sign = is_vacuum_state(a) ? theta_sign(b) : theta_sign(a);
  // anchor the curve at the denser flank; a vacuum flank cannot anchor
  const bool anchor_left = a.rho >= b.rho;
  const EpsState anchor{std::max(anchor_left ? a.rho : b.rho, 1e-30),
                        anchor_left ? std::abs(a.theta) : std::abs(b.theta)};
  const double rho_lo = std::max(std::min(a.rho, b.rho), 1e-30);
  const double rho_hi = std::max(a.rho, b.rho);
  auto speed = [&](double rho) {
    const double th = rarefaction_theta(anchor, rho, fan.family, sol.scaled);
    const double chi = std::sqrt(p_prime(sol.scaled, rho) * rho);
    return std::cos(th) + family_sign(fan.family) * chi * std::sin(th) - xi;
  };
  const double f_lo = speed(rho_lo), f_hi = speed(rho_hi);
  if ((f_lo < 0) == (f_hi < 0)) {
    // xi within rounding of a fan edge: return the nearer flank
    const SignedState& flank = (xi - fan.speed_lo < fan.speed_hi - xi) ? a : b;
    return {flank.rho, is_vacuum_state(flank) ? std::nullopt : std::optional<double>(flank.theta)};
  }
  const double rho = find_root(speed, rho_lo, rho_hi, {1e-15, 240});
  const double th = rarefaction_theta(anchor, rho, fan.family, sol.scaled);
  return {rho, sign * th};
}

}  // namespace

RiemannCase classify(const SignedState& l, const SignedState& r, const ScaledPressure& sp) {
  validate_signed(l, sp);
  validate_signed(r, sp);
  const double a = abs_theta(l), b = abs_theta(r);
  if (std::abs(a - b) <= kEqualAngleTol) return RiemannCase::EqualAngles;
  if (a > b) return RiemannCase::VacuumOpening;
  const EpsState la{l.rho, a}, ra{r.rho, b};
  // two shocks exactly when each datum lies below the other's jump locus
  const bool right_below = r.rho < hugoniot_solve_rho(la, b, sp);
  const bool left_below = l.rho < hugoniot_solve_rho(ra, a, sp);
  return (right_below && left_below) ? RiemannCase::TwoShocks
                                     : RiemannCase::MixedShockRarefaction;
}

RiemannSolution solve(const SignedState& L, const SignedState& R, const ScaledPressure& sp) {
  validate_signed(L, sp);
  validate_signed(R, sp);
  const double a = abs_theta(L), b = abs_theta(R);
  const int sl = theta_sign(L), sr = theta_sign(R);
  const EpsState l{L.rho, a}, r{R.rho, b};
  guard_band(l, sp);
  guard_band(r, sp);

  RiemannSolution sol;
  sol.scaled = sp;

  // identical data up to the heading sign
  if (std::abs(a - b) <= kEqualAngleTol &&
      std::abs(L.rho - R.rho) <= kDegenerateJumpTol * std::max(L.rho, R.rho)) {
    sol.kind = RiemannCase::EqualAngles;
    if (sl == sr) {
      sol.states = {L};
    } else {
      sol.states = {L, R};
      sol.waves = {SignContactWave{std::cos(a)}};
    }
    return sol;
  }

  const double theta_lvac = rarefaction_theta(l, 0.0, WaveFamily::Minus, sp);
  const double theta_rvac = rarefaction_theta(r, 0.0, WaveFamily::Plus, sp);

  if (theta_lvac >= theta_rvac) {
    // vacuum opens between the two full rarefactions
    if (theta_lvac <= kThetaEdgeTol || theta_rvac >= kPi - kThetaEdgeTol)
      throw GuardError("riemann: rarefaction exits the heading domain before vacuum; eps too large");
    sol.kind = RiemannCase::VacuumOpening;
    const SignedState lv{0.0, sl * theta_lvac};
    const SignedState rv{0.0, sr * theta_rvac};
    sol.states = {L, lv, rv, R};
    sol.waves = {
        RarefactionWave{eigenvalue(WaveFamily::Minus, l, sp), std::cos(theta_lvac), WaveFamily::Minus},
        VacuumWave{std::cos(theta_lvac), std::cos(theta_rvac)},
        RarefactionWave{std::cos(theta_rvac), eigenvalue(WaveFamily::Plus, r, sp), WaveFamily::Plus}};
    return sol;
  }

  // For a > b the vacuum interval is degenerate (the fans overlap): the curves
  // intersect at a positive density instead and the solution is two
  // rarefactions. The construction below covers that case unchanged.

  // intersect the two wave curves in the heading variable; F is increasing
  auto F = [&](double th) { return wminus_rho(l, th, sp) - wplus_rho(r, th, sp); };
  const double lo = std::max(theta_lvac, kFanInset);
  const double hi = std::min(theta_rvac, kPi - kFanInset);
  double f_lo = F(lo), f_hi = F(hi);
  if (!(f_lo <= 0.0 && f_hi >= 0.0))
    throw GuardError("riemann: wave-curve intersection not bracketed; eps too large");
  double theta_m;
  if (f_lo == 0.0) theta_m = lo;
  else if (f_hi == 0.0) theta_m = hi;
  else theta_m = find_root(F, lo, hi, {1e-15, 240});
  const double rho_m = wminus_rho(l, theta_m, sp);
  const EpsState m{rho_m, theta_m};

  const AbsWaveSide lw = left_wave(l, m, theta_m, sp);
  const AbsWaveSide rw = right_wave(r, m, theta_m, sp);

  // A middle state beyond the linear-degeneracy curve breaks the eigenvalue
  // monotonicity along the wave curves: shocks lose entropy admissibility and
  // fans can reverse. The two-wave construction is then invalid at this eps.
  // The middle state is only accurate to the curve-inversion tolerance, which
  // the speed quotient amplifies by (cos theta - sigma)/[rho] per endpoint on
  // weak jumps; the margin tolerance must absorb that noise or roundoff
  // rejects genuine near-zero-strength waves.
  auto entropy_check = [&](const AbsWaveSide& w, const EpsState& up, const EpsState& dn,
                           WaveFamily f) {
    if (!w.wave) return;
    if (const auto* sh = std::get_if<ShockWave>(&*w.wave)) {
      auto cond_term = [&](const EpsState& s) {
        return s.rho * (std::abs(std::cos(s.theta) - sh->speed) + std::abs(std::sin(s.theta)) * s.theta);
      };
      const double tol =
          1e-8 + 1e-11 * (cond_term(up) + cond_term(dn)) / std::abs(dn.rho - up.rho);
      if (eigenvalue(f, up, sp) - sh->speed < -tol || sh->speed - eigenvalue(f, dn, sp) < -tol)
        throw GuardError("riemann: shock crosses the linear degeneracy; eps too large");
    } else {
      const auto& fan = std::get<RarefactionWave>(*w.wave);
      if (fan.speed_lo > fan.speed_hi + 1e-8)
        throw GuardError("riemann: fan reverses across the linear degeneracy; eps too large");
    }
  };
  entropy_check(lw, l, m, WaveFamily::Minus);
  entropy_check(rw, m, r, WaveFamily::Plus);

  if (std::abs(a - b) <= kEqualAngleTol)
    sol.kind = RiemannCase::EqualAngles;
  else if (a > b)
    sol.kind = RiemannCase::VacuumOpening;  // data class; vacuum degenerated
  else if (lw.wave && rw.wave && std::holds_alternative<ShockWave>(*lw.wave) &&
           std::holds_alternative<ShockWave>(*rw.wave))
    sol.kind = RiemannCase::TwoShocks;
  else
    sol.kind = RiemannCase::MixedShockRarefaction;

  sol.states = {L};
  if (lw.wave) {
    sol.waves.push_back(*lw.wave);
    sol.states.push_back({rho_m, sl * theta_m});
    if (std::holds_alternative<ShockWave>(*lw.wave))
      sol.low_root_flag = sol.low_root_flag || hugoniot_low_root(l, theta_m, sp);
  }
  if (sl != sr) {
    sol.waves.push_back(SignContactWave{std::cos(theta_m)});
    sol.states.push_back({rho_m, sr * theta_m});
  }
  if (rw.wave) {
    sol.waves.push_back(*rw.wave);
    sol.states.push_back(R);
    if (std::holds_alternative<ShockWave>(*rw.wave))
      sol.low_root_flag = sol.low_root_flag || hugoniot_low_root(r, theta_m, sp);
  }
  // a zero-strength trailing side means the middle state is the right datum
  if (!rw.wave && sol.states.size() >= 2) sol.states.back() = R;
  return sol;
}

SamplePoint sample(const RiemannSolution& sol, double xi) {
  for (std::size_t i = 0; i < sol.waves.size(); ++i) {
    const auto [lo, hi] = wave_span(sol.waves[i]);
    if (xi < lo) {
      const SignedState& s = sol.states[i];
      return {s.rho, is_vacuum_state(s) ? std::nullopt : std::optional<double>(s.theta)};
    }
    if (xi < hi) {
      if (std::holds_alternative<VacuumWave>(sol.waves[i])) return {0.0, std::nullopt};
      if (std::holds_alternative<RarefactionWave>(sol.waves[i])) return fan_state(sol, i, xi);
      // point waves have lo == hi and never contain xi strictly
    }
  }
  const SignedState& s = sol.states.back();
  return {s.rho, is_vacuum_state(s) ? std::nullopt : std::optional<double>(s.theta)};
}

SolutionCheck check_solution(const RiemannSolution& sol, double rh_tol) {
  SolutionCheck out;
  const ScaledPressure& sp = sol.scaled;
  double prev_hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sol.waves.size(); ++i) {
    WaveCheck wc;
    const SignedState& A = sol.states[i];
    const SignedState& B = sol.states[i + 1];
    const auto [lo, hi] = wave_span(sol.waves[i]);
    if (lo < prev_hi - 1e-9) out.ordered = false;
    prev_hi = hi;
    if (const auto* sh = std::get_if<ShockWave>(&sol.waves[i])) {
      const EpsState la{A.rho, std::abs(A.theta)}, ra{B.rho, std::abs(B.theta)};
      const double cl = std::cos(la.theta), cr = std::cos(ra.theta);
      wc.rh_residual_mass = std::abs(sh->speed * (ra.rho - la.rho) - (ra.rho * cr - la.rho * cl));
      wc.rh_residual_psi = std::abs(sh->speed * (psi(cr) - psi(cl)) -
                                    ((phi(cr) + p(sp, ra.rho)) - (phi(cl) + p(sp, la.rho))));
      try {
        wc.lax_ok = lax_admissible(la, ra, sh->family, sp);
      } catch (const Error&) {
        wc.lax_ok = false;
      }
    } else if (const auto* fan = std::get_if<RarefactionWave>(&sol.waves[i])) {
      auto edge_speed = [&](const SignedState& s) {
        if (is_vacuum_state(s)) return std::cos(std::abs(s.theta));
        return eigenvalue(fan->family, EpsState{s.rho, std::abs(s.theta)}, sp);
      };
      wc.speeds_ok = std::abs(fan->speed_lo - edge_speed(A)) <= 1e-9 &&
                     std::abs(fan->speed_hi - edge_speed(B)) <= 1e-9 &&
                     fan->speed_lo <= fan->speed_hi + 1e-12;
    } else if (const auto* sc = std::get_if<SignContactWave>(&sol.waves[i])) {
      wc.speeds_ok = std::abs(A.rho - B.rho) <= 1e-12 * std::max(1.0, A.rho) &&
                     std::abs(std::abs(A.theta) - std::abs(B.theta)) <= 1e-12 &&
                     std::abs(sc->speed - std::cos(std::abs(A.theta))) <= 1e-12;
    } else if (const auto* vw = std::get_if<VacuumWave>(&sol.waves[i])) {
      wc.speeds_ok = is_vacuum_state(A) && is_vacuum_state(B) &&
                     std::abs(vw->speed_lo - std::cos(std::abs(A.theta))) <= 1e-12 &&
                     std::abs(vw->speed_hi - std::cos(std::abs(B.theta))) <= 1e-12 &&
                     vw->speed_lo <= vw->speed_hi + 1e-12;
    }
    out.max_rh_residual = std::max({out.max_rh_residual, wc.rh_residual_mass, wc.rh_residual_psi});
    out.waves.push_back(wc);
  }
  out.pass = out.ordered && out.max_rh_residual <= rh_tol;
  for (const WaveCheck& wc : out.waves) out.pass = out.pass && wc.lax_ok && wc.speeds_ok;
  return out;
}

}  // namespace cflow
