#include "cflow/pressure_law.hpp"

#include <cmath>
#include <string>

namespace cflow {

namespace {

// Reciprocal free volume D(rho) = 1/rho - 1/rho_star, positive on the domain.
double free_volume(const PressureLaw& law, double rho) {
  return 1.0 / rho - 1.0 / law.rho_star;
}

void check_density(const PressureLaw& law, double rho) {
  if (!(rho > 0.0))
    throw DomainError("pressure law: rho must be positive, got " + std::to_string(rho));
  if (!(rho < law.rho_star * (1.0 - kCongestionMargin)))
    throw DomainError("pressure law: rho at or beyond congestion, got " + std::to_string(rho));
}

}  // namespace

void validate(const PressureLaw& law) {
  if (!(law.rho_star > 0.0)) throw DomainError("pressure law: rho_star must be positive");
  if (!(law.gamma >= 1.0)) throw DomainError("pressure law: gamma must be >= 1");
}

void validate(const ScaledPressure& sp) {
  validate(sp.law);
  if (!(sp.epsilon > 0.0)) throw DomainError("pressure law: epsilon must be positive");
}

double p(const PressureLaw& law, double rho) {
  check_density(law, rho);
  return std::pow(free_volume(law, rho), -law.gamma);
}

// p' = gamma D^{-gamma-1} / rho^2: chain rule through D'(rho) = -1/rho^2.
double p_prime(const PressureLaw& law, double rho) {
  check_density(law, rho);
  const double d = free_volume(law, rho);
  return law.gamma * std::pow(d, -law.gamma - 1.0) / (rho * rho);
}

// p'' = gamma [ (gamma+1) D^{-gamma-2} / rho^4 - 2 D^{-gamma-1} / rho^3 ].
double p_second(const PressureLaw& law, double rho) {
  check_density(law, rho);
  const double d = free_volume(law, rho);
  const double r2 = rho * rho;
  return law.gamma * ((law.gamma + 1.0) * std::pow(d, -law.gamma - 2.0) / (r2 * r2) -
                      2.0 * std::pow(d, -law.gamma - 1.0) / (r2 * rho));
}

double p_inverse(const ScaledPressure& sp, double pbar) {
  validate(sp);
  if (!(pbar > 0.0)) throw DomainError("p_inverse: pbar must be positive");
  const double inv_rho = 1.0 / sp.law.rho_star + std::pow(sp.epsilon / pbar, 1.0 / sp.law.gamma);
  return 1.0 / inv_rho;
}

double psi(double u) {
  if (!(u > -1.0 && u < 1.0)) throw DomainError("psi: |u| must be < 1");
  return std::atanh(u);
}

double phi(double u) {
  if (!(u > -1.0 && u < 1.0)) throw DomainError("phi: |u| must be < 1");
  // -(1/2) ln((1-u)(1+u)) via log1p for accuracy near the endpoints
  return -0.5 * (std::log1p(-u) + std::log1p(u));
}

double psi_inverse(double w) { return std::tanh(w); }

double f_u(double u, double v) {
  if (!(u >= -1.0 && u <= 1.0)) throw DomainError("f_u: |u| must be <= 1");
  return phi(v) - u * psi(v);
}

}  // namespace cflow
