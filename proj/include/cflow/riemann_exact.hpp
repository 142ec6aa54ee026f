#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "cflow/wave_structure.hpp"

namespace cflow {

/// State with a signed heading: |theta| in (0, pi) drives the speed via
/// cos|theta|; the sign flips only across a SignContactWave. Vacuum states
/// carry rho = 0 and keep theta as the limiting fan-edge label.
struct SignedState {
  double rho;
  double theta;
};

enum class RiemannCase { EqualAngles, VacuumOpening, TwoShocks, MixedShockRarefaction };

struct ShockWave {
  double speed;
  WaveFamily family;
};
struct RarefactionWave {
  double speed_lo;
  double speed_hi;
  WaveFamily family;
};
struct SignContactWave {
  double speed;  // cos|theta| of the flanking states
};
struct VacuumWave {
  double speed_lo;
  double speed_hi;
};
using Wave = std::variant<ShockWave, RarefactionWave, SignContactWave, VacuumWave>;

struct RiemannSolution {
  std::vector<SignedState> states;  // left datum, intermediates, right datum
  std::vector<Wave> waves;          // states.size() - 1, ordered left to right
  RiemannCase kind;
  ScaledPressure scaled;
  bool low_root_flag = false;  // extra jump-locus zero below the datum (diagnostic)
};

/// Structural case of the data: equal |headings|, drop (vacuum opens for small
/// eps), or rise with the two jump-locus side tests separating two-shock from
/// mixed patterns.
RiemannCase classify(const SignedState& l, const SignedState& r, const ScaledPressure& sp);

/// Self-similar entropy solution of the two-state problem. Throws GuardError
/// when eps is too large for the wave-curve construction (data outside the
/// genuinely-nonlinear band, fan exiting the heading domain, or curves
/// intersecting although the headings imply a vacuum opening).
RiemannSolution solve(const SignedState& l, const SignedState& r, const ScaledPressure& sp);

struct SamplePoint {
  double rho;
  std::optional<double> theta;  // empty inside vacuum
};

/// State at similarity coordinate xi = x/t; at a wave speed exactly, the
/// right limit is returned.
SamplePoint sample(const RiemannSolution& sol, double xi);

struct WaveCheck {
  double rh_residual_mass = 0.0;  // |sigma [rho] - [rho cos theta]|
  double rh_residual_psi = 0.0;   // |sigma [Psi] - [Phi + eps p]|
  bool lax_ok = true;
  bool speeds_ok = true;  // wave speeds consistent with the flanking states
};
struct SolutionCheck {
  std::vector<WaveCheck> waves;
  double max_rh_residual = 0.0;
  bool ordered = true;  // nondecreasing speed intervals left to right
  bool pass = true;
};

/// Verifies every jump relation, Lax inequality, fan-edge speed and the global
/// ordering of the solution's waves.
SolutionCheck check_solution(const RiemannSolution& sol, double rh_tol = 1e-10);

}  // namespace cflow
