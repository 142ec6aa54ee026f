#include "cflow/godunov.hpp"

#include <algorithm>
#include <cmath>

#include "cflow/errors.hpp"

namespace cflow {

namespace {

constexpr double kRhoFloor = 1e-12;
constexpr double kSameTol = 1e-14;

struct Flux {
  double mass;
  double momentum;
};

Flux analytic_flux(double rho, double theta, const ScaledPressure& sp) {
  const double c = std::cos(theta);
  return {rho * c, phi(c) + p(sp, rho)};
}

// Godunov flux: the exact interface solution sampled on the t-axis.
Flux interface_flux(const CellState& l, const CellState& r, const ScaledPressure& sp) {
  const bool same = std::abs(l.rho - r.rho) <= kSameTol * std::max(1.0, l.rho) &&
                    std::abs(l.w - r.w) <= kSameTol;
  if (same) return analytic_flux(l.rho, cell_theta(l), sp);
  const RiemannSolution sol = solve({l.rho, cell_theta(l)}, {r.rho, cell_theta(r)}, sp);
  const SamplePoint pt = sample(sol, 0.0);
  if (!pt.theta || pt.rho <= kRhoFloor)
    throw VacuumBreachError("godunov: vacuum reached at a cell interface");
  return analytic_flux(pt.rho, *pt.theta, sp);
}

void check_cell(const CellState& s, const PressureLaw& law) {
  if (!(s.rho > kRhoFloor)) throw VacuumBreachError("godunov: cell density at the vacuum floor");
  if (!(s.rho < law.rho_star * (1.0 - 1e-12)))
    throw CongestionBreachError("godunov: cell density at the congestion density");
  if (!std::isfinite(s.w)) throw DomainError("godunov: non-finite w");
}

}  // namespace

void validate(const Grid1D& grid) {
  if (grid.n < 2) throw ConfigError("grid: need at least two cells");
  if (!(grid.dx() > 0.0)) throw ConfigError("grid: nonpositive cell width");
}

double cell_theta(const CellState& s) { return std::acos(std::tanh(s.w)); }

void validate(const SimConfig& config) {
  validate(config.scaled);
  if (!(config.cfl > 0.0 && config.cfl <= 1.0)) throw ConfigError("sim: cfl must be in (0, 1]");
  if (!(config.t_end >= 0.0)) throw ConfigError("sim: t_end must be nonnegative");
}

double cfl_dt(const Grid1D& grid, const std::vector<CellState>& cells, const SimConfig& config) {
  if (cells.empty()) throw ConfigError("cfl_dt: empty state vector");
  double radius = 0.0;
  for (const CellState& s : cells) {
    const auto [lm, lp] = eigenvalues({s.rho, cell_theta(s)}, config.scaled);
    radius = std::max(radius, std::max(std::abs(lm), std::abs(lp)));
  }
  if (!(radius > 0.0)) throw ConfigError("cfl_dt: zero spectral radius");
  return config.cfl * grid.dx() / radius;
}

StepReport step(const Grid1D& grid, std::vector<CellState>& cells, double dt,
                const SimConfig& config) {
  const int n = grid.n;
  if (static_cast<int>(cells.size()) != n) throw ConfigError("step: state size mismatch");
  const bool periodic = config.boundary == Boundary::Periodic;
  std::vector<Flux> fluxes(n + 1);
  for (int i = 0; i <= n; ++i) {
    const CellState& l = i == 0 ? (periodic ? cells[n - 1] : cells[0]) : cells[i - 1];
    const CellState& r = i == n ? (periodic ? cells[0] : cells[n - 1]) : cells[i];
    fluxes[i] = interface_flux(l, r, config.scaled);
  }
  const double lam = dt / grid.dx();
  for (int i = 0; i < n; ++i) {
    cells[i].rho -= lam * (fluxes[i + 1].mass - fluxes[i].mass);
    cells[i].w -= lam * (fluxes[i + 1].momentum - fluxes[i].momentum);
    check_cell(cells[i], config.scaled.law);
  }
  return {fluxes[0].mass, fluxes[n].mass};
}

std::vector<GodunovSnapshot> run(const SimConfig& config,
                                 const std::function<CellState(double)>& initial,
                                 const Grid1D& grid, const std::vector<double>& snap_times) {
  validate(config);
  validate(grid);
  std::vector<double> targets = snap_times;
  if (!std::is_sorted(targets.begin(), targets.end()))
    throw ConfigError("run: snapshot times must be ascending");
  for (double s : targets)
    if (!(s >= 0.0 && s <= config.t_end)) throw ConfigError("run: snapshot time out of range");
  if (targets.empty() || targets.back() < config.t_end) targets.push_back(config.t_end);

  std::vector<CellState> cells(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    cells[i] = initial(grid.center(i));
    check_cell(cells[i], config.scaled.law);
  }

  std::vector<GodunovSnapshot> out;
  double t = 0.0;
  for (double target : targets) {
    while (t < target) {
      double dt = cfl_dt(grid, cells, config);
      if (t + dt >= target) {
        step(grid, cells, target - t, config);
        t = target;
      } else {
        step(grid, cells, dt, config);
        t += dt;
      }
    }
    out.push_back({target, cells});
  }
  return out;
}

}  // namespace cflow
