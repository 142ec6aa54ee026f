#include "cflow/riemann_limit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "cflow/quadrature.hpp"
#include "cflow/rootfind.hpp"

namespace cflow {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kVacuumTol = 1e-12;
constexpr double kZeroPressureTol = 1e-12;

double cos_of(const LimitState& s) { return std::cos(s.theta); }

void validate_limit_data(const LimitState& s, const PressureLaw& law) {
  validate(law);
  const LimitStateKind k = limit_kind(s, law);
  if (k == LimitStateKind::Vacuum) throw VacuumInputError("limit: vacuum datum not allowed");
  if (!(s.theta > kThetaEdgeTol && s.theta < kPi - kThetaEdgeTol))
    throw DomainError("limit: theta must lie strictly inside (0, pi)");
  if (s.rho > law.rho_star * (1.0 + 1e-12))
    throw DomainError("limit: rho beyond the congestion density");
  if (k == LimitStateKind::Uncongested && std::abs(s.pbar) > kZeroPressureTol)
    throw DomainError("limit: uncongested datum must carry zero adhesion pressure");
  if (!(s.pbar >= 0.0)) throw DomainError("limit: pbar must be nonnegative");
  if (s.pbar_infinite) throw DomainError("limit: datum cannot carry infinite pressure");
}

// Adhesion pressure induced on the congested side of a jump from an
// uncongested state (rho_s, theta_s) to (rho_star, theta_t), from the two
// jump relations of the limit system.
double jump_pbar(const PressureLaw& law, double rho_s, double theta_s, double theta_t) {
  const double cs = std::cos(theta_s), ct = std::cos(theta_t);
  const double sigma = (law.rho_star * ct - rho_s * cs) / (law.rho_star - rho_s);
  return (psi(ct) - psi(cs)) * sigma - (phi(ct) - phi(cs));
}

double jump_speed(const PressureLaw& law, double rho_s, double theta_s, double theta_t) {
  const double cs = std::cos(theta_s), ct = std::cos(theta_t);
  return (law.rho_star * ct - rho_s * cs) / (law.rho_star - rho_s);
}

LimitState mirror(const LimitState& s) {
  return {s.rho, std::isnan(s.theta) ? s.theta : kPi - s.theta, s.pbar, s.pbar_infinite};
}

LimitSolution mirror(const LimitSolution& in) {
  LimitSolution out;
  out.kind = in.kind;
  out.law = in.law;
  out.nonphysical = in.nonphysical;
  for (auto it = in.states.rbegin(); it != in.states.rend(); ++it) out.states.push_back(mirror(*it));
  for (auto it = in.waves.rbegin(); it != in.waves.rend(); ++it) {
    out.waves.push_back(std::visit(
        [](const auto& w) -> LimitWave {
          using T = std::decay_t<decltype(w)>;
          if constexpr (std::is_same_v<T, ContactWave>) return ContactWave{-w.speed};
          else if constexpr (std::is_same_v<T, LimitShockWave>)
            return LimitShockWave{w.speed ? std::optional<double>(-*w.speed) : std::nullopt};
          else if constexpr (std::is_same_v<T, LimitVacuumWave>)
            return LimitVacuumWave{-w.speed_hi, -w.speed_lo};
          else
            return w;
        },
        *it));
  }
  return out;
}

bool instantaneous(const LimitWave& w) {
  if (std::holds_alternative<DeclusteringWave>(w)) return true;
  if (const auto* s = std::get_if<LimitShockWave>(&w)) return !s->speed.has_value();
  return false;
}

}  // namespace

LimitStateKind limit_kind(const LimitState& s, const PressureLaw& law) {
  if (s.rho <= kVacuumTol) return LimitStateKind::Vacuum;
  if (std::abs(s.rho - law.rho_star) <= 1e-12 * law.rho_star) return LimitStateKind::Congested;
  return LimitStateKind::Uncongested;
}

LimitSolution solve_uu(const LimitState& l, const LimitState& r, const PressureLaw& law) {
  validate_limit_data(l, law);
  validate_limit_data(r, law);
  if (limit_kind(l, law) != LimitStateKind::Uncongested ||
      limit_kind(r, law) != LimitStateKind::Uncongested)
    throw DomainError("solve_uu: both data must be uncongested");
  LimitSolution sol;
  sol.law = law;

  if (std::abs(l.theta - r.theta) <= kEqualAngleTol) {
    sol.kind = LimitCaseTag::UU_Contact;
    if (std::abs(l.rho - r.rho) <= kDegenerateJumpTol * std::max(l.rho, r.rho)) {
      sol.states = {l};
    } else {
      sol.states = {l, r};
      sol.waves = {ContactWave{cos_of(l)}};
    }
    return sol;
  }

  if (l.theta > r.theta) {
    // diverging headings: vacuum bounded by two contacts
    sol.kind = LimitCaseTag::UU_Vacuum;
    sol.states = {l, {0.0, l.theta, 0.0}, {0.0, r.theta, 0.0}, r};
    sol.waves = {ContactWave{cos_of(l)}, LimitVacuumWave{cos_of(l), cos_of(r)},
                 ContactWave{cos_of(r)}};
    return sol;
  }

  // converging headings: congested middle block between two shocks; its
  // heading equalizes the adhesion pressures induced from either side
  auto g = [&](double th) {
    return jump_pbar(law, l.rho, l.theta, th) - jump_pbar(law, r.rho, r.theta, th);
  };
  double theta_m;
  try {
    theta_m = find_root(g, l.theta, r.theta, {1e-15, 240});
  } catch (const NoRootError&) {
    throw NoRootError("solve_uu: middle-heading equation not bracketed (diagnostic)");
  }
  const double pbar_l = jump_pbar(law, l.rho, l.theta, theta_m);
  const double pbar_r = jump_pbar(law, r.rho, r.theta, theta_m);
  if (std::abs(pbar_l - pbar_r) > 1e-9)
    throw ConvergenceError("solve_uu: one-sided pressures disagree beyond 1e-9");
  sol.kind = LimitCaseTag::UU_Congested;
  sol.states = {l, {law.rho_star, theta_m, 0.5 * (pbar_l + pbar_r)}, r};
  sol.waves = {LimitShockWave{jump_speed(law, l.rho, l.theta, theta_m)},
               LimitShockWave{jump_speed(law, r.rho, r.theta, theta_m)}};
  return sol;
}

LimitSolution solve_uc(const LimitState& l, const LimitState& r, const PressureLaw& law) {
  validate_limit_data(l, law);
  validate_limit_data(r, law);
  const LimitStateKind kl = limit_kind(l, law), kr = limit_kind(r, law);
  if (kl == LimitStateKind::Congested && kr == LimitStateKind::Uncongested)
    return mirror(solve_uc(mirror(r), mirror(l), law));
  if (kl != LimitStateKind::Uncongested || kr != LimitStateKind::Congested)
    throw DomainError("solve_uc: expected one uncongested and one congested datum");

  LimitSolution sol;
  sol.law = law;
  const LimitState relaxed{law.rho_star, r.theta, 0.0};  // congested block, pressure released

  if (std::abs(l.theta - r.theta) <= kEqualAngleTol) {
    sol.kind = LimitCaseTag::UC_ContactDecluster;
    if (r.pbar <= kZeroPressureTol) {
      sol.states = {l, r};
      sol.waves = {ContactWave{cos_of(l)}};
    } else {
      sol.states = {l, relaxed, r};
      sol.waves = {ContactWave{cos_of(l)}, DeclusteringWave{}};
    }
    return sol;
  }

  if (l.theta > r.theta) {
    // vacuum opens; the congested datum relaxes behind its edge contact
    sol.kind = LimitCaseTag::UC_Vacuum;
    sol.states = {l, {0.0, l.theta, 0.0}, {0.0, r.theta, 0.0}, relaxed};
    sol.waves = {ContactWave{cos_of(l)}, LimitVacuumWave{cos_of(l), cos_of(r)},
                 ContactWave{cos_of(r)}};
    if (r.pbar > kZeroPressureTol) {
      sol.states.push_back(r);
      sol.waves.push_back(DeclusteringWave{});
    }
    return sol;
  }

  // converging: one shock into the congested block at the block's heading,
  // then an instantaneous pressure reset to the datum's pbar
  const double pbb = jump_pbar(law, l.rho, l.theta, r.theta);
  if (pbb < -1e-9) throw ConvergenceError("solve_uc: negative induced pressure");
  const LimitState mid{law.rho_star, r.theta, std::max(pbb, 0.0)};
  sol.kind = LimitCaseTag::UC_Shock;
  if (std::abs(mid.pbar - r.pbar) <= kZeroPressureTol) {
    sol.states = {l, r};
    sol.waves = {LimitShockWave{jump_speed(law, l.rho, l.theta, r.theta)}};
  } else {
    sol.states = {l, mid, r};
    sol.waves = {LimitShockWave{jump_speed(law, l.rho, l.theta, r.theta)}, DeclusteringWave{}};
  }
  return sol;
}

LimitSolution solve_cc(const LimitState& l, const LimitState& r, const PressureLaw& law) {
  validate_limit_data(l, law);
  validate_limit_data(r, law);
  if (limit_kind(l, law) != LimitStateKind::Congested ||
      limit_kind(r, law) != LimitStateKind::Congested)
    throw DomainError("solve_cc: both data must be congested");

  LimitSolution sol;
  sol.law = law;

  if (std::abs(l.theta - r.theta) <= kEqualAngleTol) {
    sol.kind = LimitCaseTag::CC_Uniform;
    sol.states = {l};
    return sol;
  }

  if (l.theta > r.theta) {
    // both blocks recede: each declusters behind a contact bounding a vacuum
    sol.kind = LimitCaseTag::CC_Vacuum;
    sol.states = {};
    sol.waves = {};
    sol.states.push_back(l);
    if (l.pbar > kZeroPressureTol) {
      sol.states.push_back({law.rho_star, l.theta, 0.0});
      sol.waves.push_back(DeclusteringWave{});
    }
    sol.states.push_back({0.0, l.theta, 0.0});
    sol.waves.push_back(ContactWave{cos_of(l)});
    sol.states.push_back({0.0, r.theta, 0.0});
    sol.waves.push_back(LimitVacuumWave{cos_of(l), cos_of(r)});
    sol.states.push_back({law.rho_star, r.theta, 0.0});
    sol.waves.push_back(ContactWave{cos_of(r)});
    if (r.pbar > kZeroPressureTol) {
      sol.states.push_back(r);
      sol.waves.push_back(DeclusteringWave{});
    }
    return sol;
  }

  // converging congested blocks: the middle heading balances the relative
  // strengths of the two instantaneous shocks against the pressure ratio
  sol.kind = LimitCaseTag::CC_InstantShocks;
  sol.nonphysical = true;
  double theta_m;
  if (l.pbar <= kZeroPressureTol) {
    theta_m = r.theta;
  } else if (r.pbar <= kZeroPressureTol) {
    theta_m = l.theta;
  } else {
    const double ratio = std::pow(l.pbar / r.pbar, 1.0 / law.gamma);
    auto g = [&](double th) {
      const double c = std::cos(th);
      const double num = (psi(c) - psi(cos_of(r))) * (c - cos_of(r));
      const double den = (psi(c) - psi(cos_of(l))) * (c - cos_of(l));
      return num / den - ratio;
    };
    const double d = 1e-9 * (r.theta - l.theta);
    theta_m = find_root(g, l.theta + d, r.theta - d, {1e-15, 240});
  }
  sol.states = {l, {law.rho_star, theta_m, 0.0, true}, r};
  sol.waves = {LimitShockWave{std::nullopt}, LimitShockWave{std::nullopt}};
  return sol;
}

LimitSolution solve_limit(const LimitState& l, const LimitState& r, const PressureLaw& law) {
  const LimitStateKind kl = limit_kind(l, law), kr = limit_kind(r, law);
  const bool lc = kl == LimitStateKind::Congested;
  const bool rc = kr == LimitStateKind::Congested;
  if (!lc && !rc) return solve_uu(l, r, law);
  if (lc && rc) return solve_cc(l, r, law);
  return solve_uc(l, r, law);
}

LimitSamplePoint sample(const LimitSolution& sol, double xi) {
  std::size_t pre = 0;
  while (pre < sol.waves.size() && instantaneous(sol.waves[pre])) ++pre;
  std::size_t suf = 0;
  while (suf < sol.waves.size() - pre && instantaneous(sol.waves[sol.waves.size() - 1 - suf])) ++suf;
  auto point = [](const LimitState& s) -> LimitSamplePoint {
    if (s.rho <= kVacuumTol) return {0.0, std::nullopt, 0.0};
    return {s.rho, std::isnan(s.theta) ? std::nullopt : std::optional<double>(s.theta), s.pbar};
  };
  for (std::size_t i = pre; i < sol.waves.size() - suf; ++i) {
    double lo, hi;
    if (const auto* c = std::get_if<ContactWave>(&sol.waves[i])) {
      lo = hi = c->speed;
    } else if (const auto* s = std::get_if<LimitShockWave>(&sol.waves[i])) {
      lo = hi = *s->speed;
    } else {
      const auto& v = std::get<LimitVacuumWave>(sol.waves[i]);
      lo = v.speed_lo;
      hi = v.speed_hi;
    }
    if (xi < lo) return point(sol.states[i]);
    if (xi < hi) return {0.0, std::nullopt, 0.0};
  }
  return point(sol.states[sol.states.size() - 1 - suf]);
}

std::vector<InterfaceRecord> interface_conditions(const LimitSolution& sol) {
  std::vector<InterfaceRecord> records;
  for (std::size_t i = 0; i < sol.waves.size(); ++i) {
    if (instantaneous(sol.waves[i])) continue;
    if (std::holds_alternative<LimitVacuumWave>(sol.waves[i])) continue;
    double sigma;
    if (const auto* c = std::get_if<ContactWave>(&sol.waves[i])) sigma = c->speed;
    else sigma = *std::get<LimitShockWave>(sol.waves[i]).speed;
    const LimitState& A = sol.states[i];
    const LimitState& B = sol.states[i + 1];
    const LimitStateKind ka = limit_kind(A, sol.law), kb = limit_kind(B, sol.law);
    InterfaceRecord rec{};
    rec.speed = sigma;
    rec.pressure_jump = B.pbar - A.pbar;
    const bool a_vac = ka == LimitStateKind::Vacuum, b_vac = kb == LimitStateKind::Vacuum;
    if (ka == LimitStateKind::Congested && kb == LimitStateKind::Congested)
      throw InterfaceClassError("interface_conditions: congested-congested discontinuity excluded");
    if (a_vac && b_vac) continue;
    if (a_vac || b_vac) {
      const LimitState& bulk = a_vac ? B : A;
      const double c = std::cos(bulk.theta);
      rec.speed_residual = std::abs(sigma - c);
      rec.pressure_residual = std::abs(bulk.pbar);
      rec.kind = limit_kind(bulk, sol.law) == LimitStateKind::Congested ? InterfaceKind::C_V
                                                                        : InterfaceKind::UC_V;
      rec.pressure_jump = 0.0;
      records.push_back(rec);
      continue;
    }
    const double ca = std::cos(A.theta), cb = std::cos(B.theta);
    if (ka == LimitStateKind::Uncongested && kb == LimitStateKind::Uncongested) {
      rec.kind = InterfaceKind::UC_UC;
      rec.speed_residual = std::max(std::abs(ca - cb), std::abs(sigma - ca));
      rec.pressure_residual = std::abs(B.pbar - A.pbar);
    } else {
      rec.kind = InterfaceKind::C_UC;
      const double sigma_exp = (B.rho * cb - A.rho * ca) / (B.rho - A.rho);
      rec.speed_residual = std::abs(sigma - sigma_exp);
      rec.pressure_residual =
          std::abs((B.pbar - A.pbar) - ((psi(cb) - psi(ca)) * sigma - (phi(cb) - phi(ca))));
    }
    records.push_back(rec);
  }
  return records;
}

RhPartialReport rh_partial_check(const LimitSolution& sol) {
  RhPartialReport rep;
  for (std::size_t i = 0; i < sol.waves.size(); ++i) {
    if (instantaneous(sol.waves[i])) continue;
    if (std::holds_alternative<LimitVacuumWave>(sol.waves[i])) continue;
    double sigma;
    if (const auto* c = std::get_if<ContactWave>(&sol.waves[i])) sigma = c->speed;
    else sigma = *std::get<LimitShockWave>(sol.waves[i]).speed;
    const LimitState& A = sol.states[i];
    const LimitState& B = sol.states[i + 1];
    auto mass_term = [&](const LimitState& s) {
      return s.rho <= kVacuumTol ? 0.0 : s.rho * (std::cos(s.theta) - sigma);
    };
    rep.max_mass_residual = std::max(rep.max_mass_residual, std::abs(mass_term(B) - mass_term(A)));
    const bool bulk = A.rho > kVacuumTol && B.rho > kVacuumTol;
    if (bulk && std::abs(std::cos(A.theta) - std::cos(B.theta)) <= 1e-12)
      rep.max_pressure_residual = std::max(rep.max_pressure_residual, std::abs(B.pbar - A.pbar));
    ++rep.checked;
  }
  return rep;
}

namespace {

// Congested flank of the first finite-speed limit shock; null when the limit
// solution has no such wave. This is the state the finite-eps intermediate
// converges to.
const LimitState* limit_shock_flank(const LimitSolution& sol, const PressureLaw& law) {
  for (std::size_t i = 0; i < sol.waves.size(); ++i) {
    const auto* s = std::get_if<LimitShockWave>(&sol.waves[i]);
    if (!s || !s->speed) continue;
    if (limit_kind(sol.states[i + 1], law) == LimitStateKind::Congested) return &sol.states[i + 1];
    if (limit_kind(sol.states[i], law) == LimitStateKind::Congested) return &sol.states[i];
  }
  return nullptr;
}

void append_breakpoints(const RiemannSolution& sol, std::vector<double>& pts) {
  for (const Wave& w : sol.waves) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, ShockWave> || std::is_same_v<T, SignContactWave>) {
            pts.push_back(v.speed);
          } else {
            pts.push_back(v.speed_lo);
            pts.push_back(v.speed_hi);
          }
        },
        w);
  }
}

void append_breakpoints(const LimitSolution& sol, std::vector<double>& pts) {
  for (const LimitWave& w : sol.waves) {
    if (instantaneous(w)) continue;
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, ContactWave>) pts.push_back(v.speed);
          else if constexpr (std::is_same_v<T, LimitShockWave>) pts.push_back(*v.speed);
          else if constexpr (std::is_same_v<T, LimitVacuumWave>) {
            pts.push_back(v.speed_lo);
            pts.push_back(v.speed_hi);
          }
        },
        w);
  }
}

}  // namespace

ConvergenceReport converge_from_eps(const LimitState& l, const LimitState& r,
                                    const PressureLaw& law, const std::vector<double>& eps_grid,
                                    double xi_lo, double xi_hi) {
  if (!(xi_lo < xi_hi)) throw ConfigError("converge_from_eps: empty xi window");
  ConvergenceReport rep;
  rep.limit = solve_limit(l, r, law);
  const LimitState* mid_target = limit_shock_flank(rep.limit, law);
  if (mid_target) rep.mid_pbar_limit = mid_target->pbar;

  auto realize = [&](const LimitState& s, double eps) -> SignedState {
    if (limit_kind(s, law) == LimitStateKind::Congested) {
      const double pb = s.pbar > kZeroPressureTol ? s.pbar : std::sqrt(eps);
      return {p_inverse({law, eps}, pb), s.theta};
    }
    return {s.rho, s.theta};
  };

  for (double eps : eps_grid) {
    const ScaledPressure sp{law, eps};
    RiemannSolution fine;
    try {
      fine = solve(realize(l, eps), realize(r, eps), sp);
    } catch (const GuardError&) {
      continue;  // eps still outside the construction's validity; not yet asymptotic
    }

    // integrate |rho^eps - rho^0| exactly between the union of wave
    // breakpoints; each piece is smooth, so adaptive quadrature is reliable
    std::vector<double> cuts{xi_lo, xi_hi};
    append_breakpoints(fine, cuts);
    append_breakpoints(rep.limit, cuts);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double a = std::max(cuts[i], xi_lo), b = std::min(cuts[i + 1], xi_hi);
      if (!(a < b)) continue;
      acc += integrate(
          [&](double xi) { return std::abs(sample(fine, xi).rho - sample(rep.limit, xi).rho); },
          a, b, 1e-8, 1e-12);
    }

    ConvergencePoint pt{};
    pt.eps = eps;
    pt.l1_rho = acc;
    if (mid_target && fine.states.size() == 3) {
      pt.has_mid = true;
      const double rho_mid = fine.states[1].rho;
      pt.rho_gap = law.rho_star - rho_mid;
      pt.eps_p_mid = p(sp, rho_mid);
      pt.theta_gap = std::abs(std::abs(fine.states[1].theta) - mid_target->theta);
    }
    rep.points.push_back(pt);
  }

  auto fit_slope = [](const std::vector<std::pair<double, double>>& xy) {
    if (xy.size() < 2) return 0.0;
    Eigen::MatrixXd A(xy.size(), 2);
    Eigen::VectorXd b(xy.size());
    for (std::size_t i = 0; i < xy.size(); ++i) {
      A(i, 0) = std::log(xy[i].first);
      A(i, 1) = 1.0;
      b(i) = std::log(xy[i].second);
    }
    return static_cast<double>(A.colPivHouseholderQr().solve(b)(0));
  };
  std::vector<std::pair<double, double>> l1_pts, gap_pts, mid_pts;
  for (const ConvergencePoint& pt : rep.points) {
    if (pt.l1_rho > 0.0) l1_pts.push_back({pt.eps, pt.l1_rho});
    if (pt.has_mid && pt.rho_gap > 0.0) gap_pts.push_back({pt.eps, pt.rho_gap});
    if (pt.has_mid) mid_pts.push_back({pt.eps, pt.eps_p_mid});
  }
  std::sort(mid_pts.begin(), mid_pts.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  if (!mid_pts.empty()) {
    rep.has_mid = true;
    rep.pbar_extrapolated = mid_pts.back().second;
    // eps p(rho_mid) approaches its limit like a power of eps, so on a
    // uniform-ratio eps tail the values are geometric and Aitken's delta
    // squared removes the leading term; keep the raw finest value whenever
    // the tail differences are not contracting
    if (mid_pts.size() >= 3) {
      const auto [e0, y0] = mid_pts[mid_pts.size() - 3];
      const auto [e1, y1] = mid_pts[mid_pts.size() - 2];
      const auto [e2, y2] = mid_pts[mid_pts.size() - 1];
      const double d0 = y1 - y0, d1 = y2 - y1;
      const bool uniform = std::abs(std::log(e0 / e1) - std::log(e1 / e2)) <
                           1e-9 * std::abs(std::log(e0 / e1));
      if (uniform && d0 * d1 > 0.0 && std::abs(d1) < std::abs(d0))
        rep.pbar_extrapolated = y2 + d1 * d1 / (d0 - d1);
    }
  }
  rep.l1_slope = fit_slope(l1_pts);
  rep.rho_gap_slope = fit_slope(gap_pts);
  return rep;
}

}  // namespace cflow
