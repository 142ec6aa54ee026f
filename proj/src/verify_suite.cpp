#include "cflow/verify_suite.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "cflow/cluster_dynamics.hpp"
#include "cflow/errors.hpp"
#include "cflow/godunov.hpp"
#include "cflow/io_util.hpp"
#include "cflow/riemann_limit.hpp"
#include "cflow/rootfind.hpp"

namespace cflow {

namespace {

constexpr double kPi = std::numbers::pi;
using Clock = std::chrono::steady_clock;

double urand(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::uint64_t sub_seed(std::uint64_t seed, int k) {
  return seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(k + 1));
}

std::vector<double> logspace(double exp_lo, double exp_hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i)
    out.push_back(std::pow(10.0, exp_lo + (exp_hi - exp_lo) * i / (n - 1)));
  return out;
}

double fit_loglog_slope(const std::vector<std::pair<double, double>>& xy) {
  if (xy.size() < 2) return 0.0;
  Eigen::MatrixXd A(xy.size(), 2);
  Eigen::VectorXd b(xy.size());
  for (std::size_t i = 0; i < xy.size(); ++i) {
    A(i, 0) = std::log(xy[i].first);
    A(i, 1) = 1.0;
    b(i) = std::log(xy[i].second);
  }
  return static_cast<double>(A.colPivHouseholderQr().solve(b)(0));
}

double finish(CriterionResult& res, Clock::time_point t0) {
  res.elapsed_s = std::chrono::duration<double>(Clock::now() - t0).count();
  return res.elapsed_s;
}

void append_runtime_token(CriterionResult& res, double budget_s) {
  const bool ok = res.elapsed_s < budget_s;
  res.details += ok ? " runtime_ok=yes" : " runtime_ok=no";
  res.pass = res.pass && ok;
}

// ---------------------------------------------------------------------------
// criterion 1: randomized Riemann problems, jump relations and admissibility

CriterionResult c1_riemann(std::uint64_t seed) {
  CriterionResult res{1, "riemann_correctness", true, "", 0.0};
  const auto t0 = Clock::now();
  std::mt19937_64 rng(sub_seed(seed, 1));
  const PressureLaw law{1.0, 2.0};
  std::array<int, 4> got{};
  int attempts = 0, guard_rejects = 0, sign_flips = 0;
  double max_rh = 0.0;
  std::string first_failure;

  for (int block = 0; block < 4; ++block) {
    const auto want = static_cast<RiemannCase>(block);
    int block_attempts = 0;
    while (got[block] < 50 && block_attempts < 20000) {
      ++block_attempts;
      ++attempts;
      double eps = std::pow(10.0, urand(rng, -4.0, -1.0));
      double rho_l, rho_r, th_l, th_r;
      switch (want) {
        case RiemannCase::EqualAngles:
          rho_l = urand(rng, 0.1, 0.9);
          rho_r = urand(rng, 0.1, 0.9);
          th_l = urand(rng, 0.3, kPi - 0.3);
          th_r = th_l;
          break;
        case RiemannCase::VacuumOpening:
          rho_l = urand(rng, 0.05, 0.6);
          rho_r = urand(rng, 0.05, 0.6);
          th_l = urand(rng, 1.9, 2.9);
          th_r = urand(rng, 0.25, th_l - 1.2);
          break;
        case RiemannCase::TwoShocks:
          rho_l = urand(rng, 0.25, 0.85);
          rho_r = urand(rng, 0.25, 0.85);
          th_l = urand(rng, 0.4, 1.8);
          th_r = th_l + urand(rng, 0.3, std::min(1.2, kPi - 0.35 - th_l));
          break;
        default:  // mixed shock-rarefaction favors a dense right datum
          eps = std::pow(10.0, urand(rng, -1.5, -1.0));
          rho_l = urand(rng, 0.1, 0.5);
          rho_r = urand(rng, 0.65, 0.92);
          th_l = urand(rng, 0.4, 2.2);
          th_r = th_l + urand(rng, 0.02, 0.2);
          break;
      }
      const bool flip = urand(rng, 0.0, 1.0) < 0.25;
      const ScaledPressure sp{law, eps};
      const SignedState L{rho_l, th_l};
      const SignedState R{rho_r, flip ? -th_r : th_r};
      try {
        if (classify(L, R, sp) != want) continue;
        const RiemannSolution sol = solve(L, R, sp);
        const SolutionCheck chk = check_solution(sol, 1e-10);
        max_rh = std::max(max_rh, chk.max_rh_residual);
        if (!chk.pass) {
          res.pass = false;
          if (first_failure.empty())
            first_failure = " first_failure=case" + std::to_string(block) + "_attempt" +
                            std::to_string(block_attempts);
          continue;
        }
        if (flip) ++sign_flips;
        ++got[block];
      } catch (const GuardError&) {
        ++guard_rejects;
      } catch (const Error& e) {
        res.pass = false;
        if (first_failure.empty()) first_failure = std::string(" first_error=") + e.what();
      }
    }
    if (got[block] < 50) res.pass = false;
  }

  std::ostringstream oss;
  oss << "cases=" << got[0] << "/" << got[1] << "/" << got[2] << "/" << got[3]
      << " attempts=" << attempts << " guard_rejects=" << guard_rejects
      << " sign_flips=" << sign_flips << " max_rh=" << format_double(max_rh) << first_failure;
  res.details = oss.str();
  finish(res, t0);
  append_runtime_token(res, 10.0);
  return res;
}

// ---------------------------------------------------------------------------
// criteria 2 and 4 share one generator so criterion 4 can regenerate the
// exact limit problems of criterion 2 from the same sub-seed

struct LimitProblem {
  LimitState l, r;
};

LimitState mirror_state(const LimitState& s) { return {s.rho, kPi - s.theta, s.pbar}; }

LimitProblem make_limit_problem(std::mt19937_64& rng, int idx, const PressureLaw& law) {
  const int family = idx % 3;  // 0 both uncongested, 1 one congested, 2 both congested
  const int n_sub = family == 2 ? 2 : 3;
  const int sub = static_cast<int>(urand(rng, 0.0, 1.0) * n_sub) % n_sub;
  const double t0 = urand(rng, 0.8, kPi - 0.8);
  const double dd = urand(rng, 0.08, 0.35);
  double th_l = t0, th_r = t0;
  if (sub == 1) {
    th_l = t0 + dd;
    th_r = t0 - dd;
  } else if (sub == 2) {
    th_l = t0 - dd;
    th_r = t0 + dd;
  }
  LimitProblem prob;
  if (family == 0) {
    prob.l = {urand(rng, 0.15, 0.85), th_l, 0.0};
    prob.r = {urand(rng, 0.15, 0.85), th_r, 0.0};
  } else if (family == 1) {
    prob.l = {urand(rng, 0.15, 0.85), th_l, 0.0};
    // congested data carry a strictly positive limit pressure; the zero-pressure
    // marginal cluster has no realization recipe and no convergence guarantee
    const double pbar = urand(rng, 0.05, 0.8);
    prob.r = {law.rho_star, th_r, pbar};
    if (urand(rng, 0.0, 1.0) < 0.5) {
      const LimitState ml = mirror_state(prob.r), mr = mirror_state(prob.l);
      prob.l = ml;
      prob.r = mr;
    }
  } else {
    prob.l = {law.rho_star, th_l, urand(rng, 0.05, 0.8)};
    prob.r = {law.rho_star, th_r, urand(rng, 0.05, 0.8)};
  }
  return prob;
}

CriterionResult c2_limit_consistency(std::uint64_t seed) {
  CriterionResult res{2, "limit_consistency", true, "", 0.0};
  const auto t0 = Clock::now();
  std::mt19937_64 rng(sub_seed(seed, 2));
  const PressureLaw law{1.0, 2.0};
  // the slowest families (fan concentration onto a contact) converge like
  // eps^(1/4), so the sweep must run well past the 1e-6 point where they are
  // still pre-asymptotic
  const std::vector<double> eps_grid = logspace(-2.0, -13.0, 12);
  double max_final_l1 = 0.0, max_pbar_err = 0.0;
  int monotone_breaks = 0, with_mid = 0, worst_idx = -1, worst_kind = -1;
  int worst_pbar_idx = -1, worst_pbar_kind = -1;
  std::string first_failure;

  // 50 configurations per data pattern: both sides uncongested, one side
  // congested, both sides congested
  for (int idx = 0; idx < 150; ++idx) {
    const LimitProblem prob = make_limit_problem(rng, idx, law);
    try {
      const ConvergenceReport rep = converge_from_eps(prob.l, prob.r, law, eps_grid);
      for (std::size_t k = 1; k < rep.points.size(); ++k) {
        if (rep.points[k].l1_rho > (1.0 + 1e-9) * rep.points[k - 1].l1_rho) {
          ++monotone_breaks;
          res.pass = false;
          if (first_failure.empty())
            first_failure = " first_monotone_break=problem" + std::to_string(idx);
        }
      }
      if (rep.points.empty() || rep.points.back().eps != eps_grid.back()) {
        res.pass = false;
        if (first_failure.empty())
          first_failure = " sweep_incomplete=problem" + std::to_string(idx);
        continue;
      }
      if (rep.points.back().l1_rho > max_final_l1) {
        max_final_l1 = rep.points.back().l1_rho;
        worst_idx = idx;
        worst_kind = static_cast<int>(rep.limit.kind);
      }
      if (rep.points.back().l1_rho >= 1e-2) res.pass = false;
      if (rep.has_mid) {
        ++with_mid;
        const double err = std::abs(rep.pbar_extrapolated - rep.mid_pbar_limit);
        if (err > max_pbar_err) {
          max_pbar_err = err;
          worst_pbar_idx = idx;
          worst_pbar_kind = static_cast<int>(rep.limit.kind);
        }
        if (err > 1e-2) res.pass = false;
      }
    } catch (const Error& e) {
      res.pass = false;
      if (first_failure.empty())
        first_failure = std::string(" error=problem") + std::to_string(idx) + ":" + e.what();
    }
  }

  std::ostringstream oss;
  oss << "problems=150 with_mid=" << with_mid << " monotone_breaks=" << monotone_breaks
      << " max_final_l1=" << format_double(max_final_l1) << " worst=" << worst_idx << "/kind"
      << worst_kind << " max_pbar_err=" << format_double(max_pbar_err) << " worst_pbar="
      << worst_pbar_idx << "/kind" << worst_pbar_kind << first_failure;
  res.details = oss.str();
  finish(res, t0);
  return res;
}

// ---------------------------------------------------------------------------
// criterion 3: asymptotic orders recovered from log-log fits

CriterionResult c3_rates(std::uint64_t seed) {
  (void)seed;  // fixed configurations; nothing random here
  CriterionResult res{3, "rate_reproduction", true, "", 0.0};
  const auto t0 = Clock::now();
  const PressureLaw law{1.0, 2.0};
  std::string note;

  // congestion gap of the intermediate state: order eps^(1/gamma)
  double slope_mid = 0.0;
  try {
    std::vector<std::pair<double, double>> pts;
    for (double eps : logspace(-2.0, -6.0, 9)) {
      const RiemannSolution sol = solve({0.8, kPi / 2}, {0.6, 2 * kPi / 3}, {law, eps});
      pts.push_back({eps, law.rho_star - sol.states[1].rho});
    }
    slope_mid = fit_loglog_slope(pts);
  } catch (const Error& e) {
    note += std::string(" mid_error=") + e.what();
  }
  if (std::abs(slope_mid - 0.5) > 0.1) res.pass = false;

  // vacuum-edge heading gap for a congestion-realized datum: eps^(1/(2 gamma))
  double slope_vac = 0.0;
  try {
    std::vector<std::pair<double, double>> pts;
    for (double eps : logspace(-4.0, -8.0, 9)) {
      const ScaledPressure sp{law, eps};
      const double rho_l = p_inverse(sp, 1.0);
      const RiemannSolution sol = solve({rho_l, 2.0}, {0.5, 1.0}, sp);
      double gap = 0.0;
      for (const Wave& w : sol.waves)
        if (const auto* v = std::get_if<VacuumWave>(&w)) gap = 2.0 - std::acos(v->speed_lo);
      if (!(gap > 0.0)) throw ConvergenceError("no vacuum wave in the opening problem");
      pts.push_back({eps, gap});
    }
    slope_vac = fit_loglog_slope(pts);
  } catch (const Error& e) {
    note += std::string(" vac_error=") + e.what();
  }
  if (std::abs(slope_vac - 0.25) > 0.1) res.pass = false;

  // congestion gap of the degeneracy curve at a fixed heading and of a
  // rarefaction curve at a fixed heading increment: both eps^(1/(gamma-1))
  double slope_ld = 0.0, slope_rar = 0.0;
  try {
    std::vector<std::pair<double, double>> ld_pts, rar_pts;
    for (double eps : logspace(-3.0, -7.0, 9)) {
      const ScaledPressure sp{law, eps};
      const double rho_ld = find_root(
          [&](double rho) { return linearly_degenerate_theta(rho, WaveFamily::Plus, sp) - 1.0; },
          0.3, law.rho_star - 1e-12);
      ld_pts.push_back({eps, law.rho_star - rho_ld});
      const double rho_end =
          rarefaction_rho({0.5, kPi / 2}, kPi / 2 + 0.5, WaveFamily::Minus, sp);
      rar_pts.push_back({eps, law.rho_star - rho_end});
    }
    slope_ld = fit_loglog_slope(ld_pts);
    slope_rar = fit_loglog_slope(rar_pts);
  } catch (const Error& e) {
    note += std::string(" curve_error=") + e.what();
  }
  if (std::abs(slope_ld - 1.0) > 0.15 || std::abs(slope_rar - 1.0) > 0.15) res.pass = false;

  std::ostringstream oss;
  oss << "slope_mid=" << format_double(slope_mid) << " slope_vacuum_edge=" << format_double(slope_vac)
      << " slope_degeneracy=" << format_double(slope_ld)
      << " slope_rarefaction=" << format_double(slope_rar) << note;
  res.details = oss.str();
  finish(res, t0);
  append_runtime_token(res, 60.0);
  return res;
}

// ---------------------------------------------------------------------------
// criterion 4: interface relations on every criterion-2 limit solution

CriterionResult c4_interfaces(std::uint64_t seed) {
  CriterionResult res{4, "interface_closure", true, "", 0.0};
  const auto t0 = Clock::now();
  std::mt19937_64 rng(sub_seed(seed, 2));  // same stream as criterion 2
  const PressureLaw law{1.0, 2.0};
  double max_speed = 0.0, max_pressure = 0.0, max_mass = 0.0;
  int records = 0;
  std::string note;

  for (int idx = 0; idx < 150; ++idx) {  // same stream and count as criterion 2
    const LimitProblem prob = make_limit_problem(rng, idx, law);
    try {
      const LimitSolution sol = solve_limit(prob.l, prob.r, law);
      for (const InterfaceRecord& rec : interface_conditions(sol)) {
        ++records;
        max_speed = std::max(max_speed, rec.speed_residual);
        max_pressure = std::max(max_pressure, rec.pressure_residual);
      }
      const RhPartialReport rh = rh_partial_check(sol);
      max_mass = std::max(max_mass, rh.max_mass_residual);
      max_pressure = std::max(max_pressure, rh.max_pressure_residual);
    } catch (const Error& e) {
      res.pass = false;
      if (note.empty()) note = std::string(" error=problem") + std::to_string(idx) + ":" + e.what();
    }
  }
  if (max_speed > 1e-9 || max_pressure > 1e-9 || max_mass > 1e-9) res.pass = false;

  // a congested-congested discontinuity must be rejected as unclassifiable
  bool cc_flagged = false;
  LimitSolution synthetic;
  synthetic.law = law;
  synthetic.states = {{law.rho_star, 1.0, 0.5}, {law.rho_star, 2.0, 0.7}};
  synthetic.waves = {ContactWave{0.2}};
  synthetic.kind = LimitCaseTag::CC_Uniform;
  try {
    interface_conditions(synthetic);
  } catch (const InterfaceClassError&) {
    cc_flagged = true;
  }
  if (!cc_flagged) res.pass = false;

  std::ostringstream oss;
  oss << "records=" << records << " max_speed_residual=" << format_double(max_speed)
      << " max_pressure_residual=" << format_double(max_pressure)
      << " max_mass_residual=" << format_double(max_mass)
      << " cc_flagged=" << (cc_flagged ? "yes" : "no") << note;
  res.details = oss.str();
  finish(res, t0);
  return res;
}

// ---------------------------------------------------------------------------
// criterion 5: sticky cluster dynamics invariants

CriterionResult c5_clusters(std::uint64_t seed) {
  CriterionResult res{5, "cluster_dynamics", true, "", 0.0};
  const auto t0 = Clock::now();
  std::mt19937_64 rng(sub_seed(seed, 5));
  const PressureLaw law{1.0, 2.0};
  double max_len_drift = 0.0, max_w_drift = 0.0;
  int events_total = 0;
  std::string note;

  for (int sim = 0; sim < 100; ++sim) {
    const int k = 2 + static_cast<int>(urand(rng, 0.0, 1.0) * 5) % 5;
    std::vector<Cluster> clusters;
    double x = urand(rng, -1.0, 0.0);
    for (int i = 0; i < k; ++i) {
      const double a = x + urand(rng, 0.05, 0.6);
      const double b = a + urand(rng, 0.1, 1.0);
      clusters.push_back(make_cluster(a, b, urand(rng, 0.25, kPi - 0.25)));
      x = b;
    }
    try {
      const ClusterTrajectory traj = simulate({clusters, law}, 12.0);
      auto length_of = [](const std::vector<Cluster>& cs) {
        double s = 0.0;
        for (const Cluster& c : cs) s += c.length();
        return s;
      };
      auto winv_of = [](const std::vector<Cluster>& cs) {
        double s = 0.0;
        for (const Cluster& c : cs) s += c.length() * c.w;
        return s;
      };
      const double len0 = length_of(traj.snapshots.front().clusters);
      const double winv0 = winv_of(traj.snapshots.front().clusters);
      double prev_t = 0.0;
      for (const ClusterSnapshot& snap : traj.snapshots) {
        max_len_drift = std::max(max_len_drift, std::abs(length_of(snap.clusters) - len0));
        max_w_drift = std::max(max_w_drift, std::abs(winv_of(snap.clusters) - winv0));
        validate(ClusterSystem{snap.clusters, law});
      }
      for (const CollisionEvent& ev : traj.events) {
        ++events_total;
        if (ev.t_c < prev_t - 1e-12) res.pass = false;
        prev_t = ev.t_c;
        if (!(ev.pi.peak >= 0.0)) res.pass = false;
        if (ev.pi(ev.pi.a) != 0.0 || ev.pi(ev.pi.b) != 0.0) res.pass = false;
        if (std::abs(ev.pi(ev.m) - ev.pi.peak) > 1e-14) res.pass = false;
        for (double frac : {0.25, 0.5, 0.75}) {
          const double xq = ev.pi.a + frac * (ev.pi.b - ev.pi.a);
          if (ev.pi(xq) < 0.0) res.pass = false;
        }
      }
    } catch (const Error& e) {
      res.pass = false;
      if (note.empty()) note = std::string(" error=sim") + std::to_string(sim) + ":" + e.what();
    }
  }
  if (max_len_drift > 1e-12 || max_w_drift > 1e-12) res.pass = false;

  // symmetric head-on merge comes to rest
  double headon_err = 1.0;
  {
    const ClusterTrajectory traj =
        simulate({{make_cluster(0.0, 1.0, kPi / 4), make_cluster(2.0, 3.0, 3 * kPi / 4)}, law}, 10.0);
    if (traj.events.size() == 1) headon_err = std::abs(traj.events[0].theta_tilde - kPi / 2);
  }
  if (headon_err > 1e-12) res.pass = false;

  // simultaneous contacts resolve leftmost first
  double tie_m = 0.0;
  {
    const ClusterTrajectory traj =
        simulate({{make_cluster(0.0, 1.0, kPi / 3), make_cluster(2.0, 3.0, kPi / 2),
                   make_cluster(4.0, 5.0, 2 * kPi / 3)},
                  law},
                 10.0);
    if (!traj.events.empty()) tie_m = traj.events[0].m;
  }
  if (std::abs(tie_m - 2.0) > 1e-9) res.pass = false;

  std::ostringstream oss;
  oss << "sims=100 events=" << events_total << " max_length_drift=" << format_double(max_len_drift)
      << " max_w_drift=" << format_double(max_w_drift)
      << " headon_theta_err=" << format_double(headon_err)
      << " tie_first_m=" << format_double(tie_m) << note;
  res.details = oss.str();
  finish(res, t0);
  return res;
}

// ---------------------------------------------------------------------------
// criterion 6: Godunov scheme checks

double neumaier_mass(const std::vector<CellState>& cells) {
  double sum = 0.0, comp = 0.0;
  for (const CellState& c : cells) {
    const double t = sum + c.rho;
    comp += std::abs(sum) >= std::abs(c.rho) ? (sum - t) + c.rho : (c.rho - t) + sum;
    sum = t;
  }
  return sum + comp;
}

struct RiemannRun {
  std::vector<CellState> cells;
  double max_mass_err = 0.0;
  int steps = 0;
};

RiemannRun run_riemann_data(const SimConfig& cfg, const Grid1D& grid, const CellState& left,
                            const CellState& right) {
  RiemannRun out;
  out.cells.resize(grid.n);
  for (int i = 0; i < grid.n; ++i) out.cells[i] = grid.center(i) < 0.0 ? left : right;
  double t = 0.0;
  while (t < cfg.t_end) {
    double dt = cfl_dt(grid, out.cells, cfg);
    const bool last = t + dt >= cfg.t_end;
    if (last) dt = cfg.t_end - t;
    const double mass_before = neumaier_mass(out.cells) * grid.dx();
    const StepReport rep = step(grid, out.cells, dt, cfg);
    const double mass_after = neumaier_mass(out.cells) * grid.dx();
    const double expected = mass_before - dt * (rep.mass_flux_right - rep.mass_flux_left);
    out.max_mass_err = std::max(out.max_mass_err, std::abs(mass_after - expected));
    t = last ? cfg.t_end : t + dt;
    ++out.steps;
  }
  return out;
}

CriterionResult c6_godunov(std::uint64_t seed) {
  (void)seed;  // fixed configurations
  CriterionResult res{6, "godunov_scheme", true, "", 0.0};
  const auto t0 = Clock::now();
  const PressureLaw law{1.0, 2.0};
  const ScaledPressure sp{law, 0.1};
  std::string note;
  std::ostringstream oss;

  try {
    // bitwise constant preservation
    {
      SimConfig cfg{sp, 0.8, 0.05, Boundary::Outflow};
      const Grid1D grid{-1.0, 1.0, 50};
      const CellState c0{0.7, psi(std::cos(1.1))};
      const auto snaps = run(cfg, [&](double) { return c0; }, grid);
      bool exact = true;
      for (const CellState& c : snaps.back().cells)
        exact = exact && c.rho == c0.rho && c.w == c0.w;
      oss << "constant_bitwise=" << (exact ? "yes" : "no");
      if (!exact) res.pass = false;
    }

    // periodic smooth data: per-step mass drift
    {
      SimConfig cfg{sp, 0.8, 1.0, Boundary::Periodic};
      const Grid1D grid{0.0, 1.0, 100};
      std::vector<CellState> cells(grid.n);
      for (int i = 0; i < grid.n; ++i) {
        const double x = grid.center(i);
        cells[i] = {0.5 + 0.2 * std::sin(2 * kPi * x), 0.15 * std::cos(2 * kPi * x)};
      }
      double max_drift = 0.0;
      for (int s = 0; s < 40; ++s) {
        const double before = neumaier_mass(cells) * grid.dx();
        step(grid, cells, cfl_dt(grid, cells, cfg), cfg);
        max_drift = std::max(max_drift, std::abs(neumaier_mass(cells) * grid.dx() - before));
      }
      oss << " periodic_mass_drift=" << format_double(max_drift);
      if (max_drift > 1e-13) res.pass = false;
    }

    // Riemann data: conservation accounting, first-order self-convergence and
    // the total-variation error bound against the exact solution
    const CellState left{0.8, psi(std::cos(kPi / 2))};
    const CellState right{0.6, psi(std::cos(2 * kPi / 3))};
    const RiemannSolution exact = solve({0.8, kPi / 2}, {0.6, 2 * kPi / 3}, sp);
    const double tv = std::abs(left.rho - right.rho) + std::abs(left.w - right.w);
    SimConfig cfg{sp, 0.8, 0.1, Boundary::Outflow};
    std::vector<double> errors;
    double max_mass_err = 0.0;
    bool tv_ok = true;
    for (int n : {200, 400, 800}) {
      const Grid1D grid{-1.0, 1.0, n};
      const RiemannRun rr = run_riemann_data(cfg, grid, left, right);
      max_mass_err = std::max(max_mass_err, rr.max_mass_err);
      double err = 0.0;
      for (int i = 0; i < n; ++i) {
        const SamplePoint pt = sample(exact, grid.center(i) / cfg.t_end);
        err += std::abs(rr.cells[i].rho - pt.rho) * grid.dx();
        err += std::abs(rr.cells[i].w - psi(std::cos(*pt.theta))) * grid.dx();
      }
      errors.push_back(err);
      if (err > 2.0 * grid.dx() * tv) tv_ok = false;
    }
    const double r1 = std::log2(errors[0] / errors[1]);
    const double r2 = std::log2(errors[1] / errors[2]);
    const double rate = 0.5 * (r1 + r2);
    oss << " mass_acct_err=" << format_double(max_mass_err) << " l1=" << format_double(errors[0])
        << "," << format_double(errors[1]) << "," << format_double(errors[2])
        << " rate=" << format_double(rate) << " tv_bound=" << (tv_ok ? "ok" : "exceeded");
    if (max_mass_err > 1e-13 || !(rate >= 0.7 && rate <= 1.3) || !tv_ok) res.pass = false;

    // reflection symmetry: x -> -x, theta -> pi - theta
    {
      const Grid1D grid{-1.0, 1.0, 200};
      const CellState mleft{0.6, psi(std::cos(kPi - 2 * kPi / 3))};
      const CellState mright{0.8, psi(std::cos(kPi - kPi / 2))};
      const RiemannRun fwd = run_riemann_data(cfg, grid, left, right);
      const RiemannRun mir = run_riemann_data(cfg, grid, mleft, mright);
      double max_sym = 0.0;
      for (int i = 0; i < grid.n; ++i) {
        max_sym = std::max(max_sym, std::abs(fwd.cells[i].rho - mir.cells[grid.n - 1 - i].rho));
        max_sym = std::max(max_sym, std::abs(fwd.cells[i].w + mir.cells[grid.n - 1 - i].w));
      }
      oss << " reflection_err=" << format_double(max_sym);
      if (max_sym > 1e-10) res.pass = false;
    }
  } catch (const Error& e) {
    res.pass = false;
    note = std::string(" error=") + e.what();
  }

  res.details = oss.str() + note;
  finish(res, t0);
  append_runtime_token(res, 120.0);
  return res;
}

// ---------------------------------------------------------------------------
// criterion 7: conservative pairs satisfy the chain-rule flux relations

CriterionResult c7_pairs(std::uint64_t seed) {
  (void)seed;
  CriterionResult res{7, "conservative_pairs", true, "", 0.0};
  const auto t0 = Clock::now();
  const ScaledPressure sp{{1.0, 2.0}, 1.0};
  double max_resid = 0.0;
  std::string note;
  try {
    for (int i = 0; i < 20; ++i) {
      const double rho = 0.05 + 0.85 * i / 19.0;
      for (int j = 0; j < 20; ++j) {
        const double theta = 0.2 + (kPi - 0.4) * j / 19.0;
        for (ConservedPair pair : {ConservedPair::Mass, ConservedPair::Psi, ConservedPair::RhoPsi}) {
          const auto [r1, r2] = conservative_pair_residual(pair, {rho, theta}, sp);
          max_resid = std::max({max_resid, r1, r2});
        }
      }
    }
  } catch (const Error& e) {
    res.pass = false;
    note = std::string(" error=") + e.what();
  }
  if (max_resid > 1e-6) res.pass = false;
  res.details = "grid=20x20 pairs=3 max_residual=" + format_double(max_resid) + note;
  finish(res, t0);
  return res;
}

// ---------------------------------------------------------------------------
// criterion 8: heading-selection function is convex with argmin at the drive

CriterionResult c8_convexity(std::uint64_t seed) {
  CriterionResult res{8, "heading_selection_convexity", true, "", 0.0};
  const auto t0 = Clock::now();
  std::mt19937_64 rng(sub_seed(seed, 8));
  const int n = 4001;
  const double v_lo = -0.999, v_hi = 0.999;
  const double spacing = (v_hi - v_lo) / (n - 1);
  double max_argmin_err = 0.0, min_second_diff = 1.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double u = urand(rng, -0.95, 0.95);
    std::vector<double> f(n);
    int best = 0;
    for (int k = 0; k < n; ++k) {
      f[k] = f_u(u, v_lo + k * spacing);
      if (f[k] < f[best]) best = k;
    }
    max_argmin_err = std::max(max_argmin_err, std::abs(v_lo + best * spacing - u));
    for (int k = 1; k + 1 < n; ++k)
      min_second_diff = std::min(min_second_diff, f[k - 1] - 2.0 * f[k] + f[k + 1]);
  }
  if (max_argmin_err > spacing || min_second_diff < -1e-12) res.pass = false;
  res.details = "trials=50 max_argmin_err=" + format_double(max_argmin_err) +
                " min_second_diff=" + format_double(min_second_diff) +
                " grid_spacing=" + format_double(spacing);
  finish(res, t0);
  return res;
}

std::string render_lines(const std::vector<CriterionResult>& results) {
  std::ostringstream oss;
  for (const CriterionResult& r : results)
    oss << "criterion " << r.id << " " << r.name << ": " << (r.pass ? "PASS" : "FAIL") << " "
        << r.details << "\n";
  return oss.str();
}

CriterionResult run_one(int id, std::uint64_t seed) {
  switch (id) {
    case 1: return c1_riemann(seed);
    case 2: return c2_limit_consistency(seed);
    case 3: return c3_rates(seed);
    case 4: return c4_interfaces(seed);
    case 5: return c5_clusters(seed);
    case 6: return c6_godunov(seed);
    case 7: return c7_pairs(seed);
    case 8: return c8_convexity(seed);
    default: throw ConfigError("verify: unknown criterion id " + std::to_string(id));
  }
}

}  // namespace

bool VerifyReport::all_pass() const {
  for (const CriterionResult& r : results)
    if (!r.pass) return false;
  return !results.empty();
}

std::string report_text(const VerifyReport& report) {
  std::ostringstream oss;
  oss << "verify seed=" << report.seed << "\n" << render_lines(report.results);
  int passed = 0;
  for (const CriterionResult& r : report.results) passed += r.pass ? 1 : 0;
  oss << "summary: " << passed << "/" << report.results.size() << " criteria passed\n";
  return oss.str();
}

VerifyReport run_verify(std::uint64_t seed, const std::vector<int>& criteria) {
  std::vector<int> sel = criteria;
  if (sel.empty()) sel = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::sort(sel.begin(), sel.end());
  sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
  for (int id : sel)
    if (id < 1 || id > 9) throw ConfigError("verify: criterion ids must lie in 1..9");

  const bool want_determinism = !sel.empty() && sel.back() == 9;
  std::vector<int> others(sel.begin(), want_determinism ? sel.end() - 1 : sel.end());
  if (want_determinism && others.empty()) others = {1, 2, 3, 4, 5, 6, 7, 8};

  VerifyReport report;
  report.seed = seed;
  for (int id : others) report.results.push_back(run_one(id, seed));

  if (want_determinism) {
    CriterionResult res{9, "determinism", true, "", 0.0};
    const auto t0 = Clock::now();
    std::vector<CriterionResult> rerun;
    for (int id : others) rerun.push_back(run_one(id, seed));
    res.pass = render_lines(report.results) == render_lines(rerun);
    std::ostringstream oss;
    oss << "reran=" << others.size()
        << " criteria rerun_identical=" << (res.pass ? "yes" : "no");
    res.details = oss.str();
    finish(res, t0);
    report.results.push_back(res);
  }
  return report;
}

}  // namespace cflow
