#pragma once

#include <functional>
#include <vector>

#include "cflow/riemann_exact.hpp"

namespace cflow {

struct Grid1D {
  double x_lo;
  double x_hi;
  int n;
  double dx() const { return (x_hi - x_lo) / n; }
  double center(int i) const { return x_lo + (i + 0.5) * dx(); }
};

void validate(const Grid1D& grid);

/// Conservative cell average: density and the angle coordinate w = psi(cos
/// theta). The scheme runs entirely in theta in (0, pi); signed headings are
/// out of its domain.
struct CellState {
  double rho;
  double w;
};

double cell_theta(const CellState& s);

enum class Boundary { Outflow, Periodic };

struct SimConfig {
  ScaledPressure scaled;
  double cfl = 0.9;
  double t_end = 0.0;
  Boundary boundary = Boundary::Outflow;
};

void validate(const SimConfig& config);

/// dt = cfl * dx / max over cells of the spectral radius.
double cfl_dt(const Grid1D& grid, const std::vector<CellState>& cells, const SimConfig& config);

struct StepReport {
  double mass_flux_left;   // rho flux through the left domain edge
  double mass_flux_right;  // rho flux through the right domain edge
};

/// One forward-Euler conservative update with exact-solver interface fluxes
/// sampled at xi = 0. Updated cells breaching rho >= rho_star (1 - 1e-12)
/// raise CongestionBreachError, rho <= 1e-12 raises VacuumBreachError; no
/// clamping.
StepReport step(const Grid1D& grid, std::vector<CellState>& cells, double dt,
                const SimConfig& config);

struct GodunovSnapshot {
  double t;
  std::vector<CellState> cells;
};

/// Advances cell averages of the initial profile to t_end, recording
/// snapshots at the requested times (ascending, within [0, t_end]) and at
/// t_end itself. Time steps land exactly on snapshot times.
std::vector<GodunovSnapshot> run(const SimConfig& config,
                                 const std::function<CellState(double)>& initial,
                                 const Grid1D& grid, const std::vector<double>& snap_times = {});

}  // namespace cflow
