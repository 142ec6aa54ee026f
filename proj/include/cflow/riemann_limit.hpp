#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "cflow/riemann_exact.hpp"

namespace cflow {

/// State of the hard-congestion limit system. Congested states carry
/// rho == rho_star and an adhesion pressure pbar >= 0; uncongested states have
/// pbar == 0; vacuum states have rho == 0 (theta kept as a label, may be NaN).
struct LimitState {
  double rho;
  double theta;
  double pbar = 0.0;
  bool pbar_infinite = false;  // congested with unbounded adhesion pressure
};

enum class LimitStateKind { Uncongested, Congested, Vacuum };

/// rho-based classification with tolerances 1e-12 (relative for congestion).
LimitStateKind limit_kind(const LimitState& s, const PressureLaw& law);

enum class LimitCaseTag {
  UU_Contact,
  UU_Vacuum,
  UU_Congested,
  UC_ContactDecluster,
  UC_Vacuum,
  UC_Shock,
  CC_Uniform,
  CC_Vacuum,
  CC_InstantShocks,
};

struct ContactWave {
  double speed;
};
struct LimitShockWave {
  std::optional<double> speed;  // empty: instantaneous (fires at t = 0+)
};
struct DeclusteringWave {};  // instantaneous pressure reset inside a congested block
struct LimitVacuumWave {
  double speed_lo;
  double speed_hi;
};
using LimitWave = std::variant<ContactWave, LimitShockWave, DeclusteringWave, LimitVacuumWave>;

struct LimitSolution {
  std::vector<LimitState> states;
  std::vector<LimitWave> waves;  // states.size() - 1
  LimitCaseTag kind;
  PressureLaw law;
  bool nonphysical = false;  // instantaneous shocks: not a distributional solution
};

/// Limit solutions by data pattern: both uncongested, one side congested
/// (either side; the congested-left problem is solved by mirror symmetry),
/// both congested. Data must be non-vacuum.
LimitSolution solve_uu(const LimitState& l, const LimitState& r, const PressureLaw& law);
LimitSolution solve_uc(const LimitState& l, const LimitState& r, const PressureLaw& law);
LimitSolution solve_cc(const LimitState& l, const LimitState& r, const PressureLaw& law);

/// Dispatch on the data pattern.
LimitSolution solve_limit(const LimitState& l, const LimitState& r, const PressureLaw& law);

struct LimitSamplePoint {
  double rho;
  std::optional<double> theta;
  double pbar;
};

/// State at xi = x/t for t > 0: instantaneous waves have already fired, so
/// leading/trailing instantaneous waves hide the states beyond them.
LimitSamplePoint sample(const LimitSolution& sol, double xi);

enum class InterfaceKind { C_UC, UC_V, C_V, UC_UC };

struct InterfaceRecord {
  InterfaceKind kind;
  double speed;
  double pressure_jump;     // pbar(right) - pbar(left)
  double speed_residual;    // |speed - catalogue speed|
  double pressure_residual; // |pressure relation residual|
};

/// Classifies every finite-speed discontinuity against the interface
/// catalogue and measures its residuals. InterfaceClassError on a
/// congested-congested discontinuity with finite speed (excluded case).
std::vector<InterfaceRecord> interface_conditions(const LimitSolution& sol);

struct RhPartialReport {
  double max_mass_residual = 0.0;      // |[rho (cos theta - sigma)]| over finite waves
  double max_pressure_residual = 0.0;  // |[pbar]| where cos theta is continuous
  int checked = 0;
};

/// Partial jump relations of the limit system; declustering waves excluded.
RhPartialReport rh_partial_check(const LimitSolution& sol);

struct ConvergencePoint {
  double eps;
  double l1_rho;      // L1 distance between eps-solution and limit (rho only)
  double rho_gap;     // rho_star - rho_mid^eps (when an intermediate state exists)
  double theta_gap;   // |theta_mid^eps - theta_mid^0|
  double eps_p_mid;   // eps p(rho_mid^eps)
  bool has_mid = false;
};

struct ConvergenceReport {
  std::vector<ConvergencePoint> points;
  double l1_slope = 0.0;           // log-log fit of l1_rho vs eps
  double rho_gap_slope = 0.0;      // log-log fit of rho_gap vs eps
  double pbar_extrapolated = 0.0;  // eps p(rho_mid) at the finest eps
  double mid_pbar_limit = 0.0;     // adhesion pressure of the limit shock flank
  bool has_mid = false;
  LimitSolution limit;
};

/// Realizes the limit data at each eps (congested sides via p_inverse), solves
/// the finite-eps problem, and measures the L1 distance to the limit solution
/// on [xi_lo, xi_hi] by quadrature between the wave breakpoints of both
/// profiles (no sampling-grid quantization).
ConvergenceReport converge_from_eps(const LimitState& l, const LimitState& r,
                                    const PressureLaw& law, const std::vector<double>& eps_grid,
                                    double xi_lo = -2.0, double xi_hi = 2.0);

}  // namespace cflow
