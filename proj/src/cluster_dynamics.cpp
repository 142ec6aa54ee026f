#include "cflow/cluster_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cflow/errors.hpp"

namespace cflow {

namespace {
constexpr double kTouchTol = 1e-9;
constexpr double kTieTol = 1e-12;
}  // namespace

Cluster make_cluster(double a, double b, double theta) {
  if (!(a < b)) throw GeometryError("make_cluster: requires a < b");
  if (!(theta > 0.0 && theta < std::numbers::pi))
    throw DomainError("make_cluster: theta must lie in (0, pi)");
  return {a, b, theta, psi(std::cos(theta))};
}

void validate(const ClusterSystem& system) {
  validate(system.law);
  if (system.clusters.empty()) throw GeometryError("cluster system: empty");
  for (std::size_t i = 0; i < system.clusters.size(); ++i) {
    const Cluster& c = system.clusters[i];
    if (!(c.a < c.b)) throw GeometryError("cluster system: degenerate span");
    if (!std::isfinite(c.w)) throw DomainError("cluster system: non-finite w");
    if (i + 1 < system.clusters.size() && c.b > system.clusters[i + 1].a + kTouchTol)
      throw GeometryError("cluster system: overlapping clusters");
  }
}

std::optional<UpcomingCollision> next_collision(const ClusterSystem& system) {
  std::optional<UpcomingCollision> best;
  for (std::size_t i = 0; i + 1 < system.clusters.size(); ++i) {
    const Cluster& l = system.clusters[i];
    const Cluster& r = system.clusters[i + 1];
    const double closing = l.speed() - r.speed();
    if (closing <= 0.0) continue;
    const double dt = std::max(r.a - l.b, 0.0) / closing;
    if (!best || dt < best->dt - kTieTol) best = UpcomingCollision{i, dt, l.b + l.speed() * dt};
  }
  return best;
}

double PiProfile::operator()(double x) const {
  if (x <= a || x >= b) return 0.0;
  if (x <= m) return m > a ? peak * (x - a) / (m - a) : peak;
  return peak * (b - x) / (b - m);
}

std::pair<Cluster, CollisionEvent> collide(const Cluster& left, const Cluster& right, double t_c) {
  if (std::abs(left.b - right.a) > kTouchTol)
    throw GeometryError("collide: facing edges do not touch");
  const double ll = left.length(), lr = right.length();
  const double w_merged = (ll * left.w + lr * right.w) / (ll + lr);
  const double peak = (w_merged - right.w) * lr;
  // same quantity evaluated from the left flank; its agreement is the
  // zero-at-left-endpoint compatibility of the pi profile
  const double peak_left = (left.w - w_merged) * ll;
  if (std::abs(peak - peak_left) > 1e-12 * std::max(1.0, std::abs(peak)))
    throw ConvergenceError("collide: pi endpoint compatibility failed");
  if (peak < -1e-12) throw GeometryError("collide: clusters separating at contact");
  const double m = 0.5 * (left.b + right.a);
  Cluster merged{left.a, right.b, std::acos(std::tanh(w_merged)), w_merged};
  CollisionEvent event{t_c, m, merged.theta, PiProfile{merged.a, m, merged.b, std::max(peak, 0.0)}};
  return {merged, event};
}

ClusterTrajectory simulate(const ClusterSystem& system, double horizon) {
  validate(system);
  if (!(horizon >= 0.0)) throw DomainError("simulate: horizon must be nonnegative");
  ClusterTrajectory out;
  ClusterSystem cur = system;
  double t = 0.0;
  out.snapshots.push_back({t, cur.clusters});
  auto translate = [&](double dt) {
    for (Cluster& c : cur.clusters) {
      const double v = c.speed();
      c.a += v * dt;
      c.b += v * dt;
    }
  };
  for (;;) {
    const auto up = next_collision(cur);
    if (!up || t + up->dt > horizon) {
      translate(horizon - t);
      out.snapshots.push_back({horizon, cur.clusters});
      return out;
    }
    translate(up->dt);
    t += up->dt;
    auto [merged, event] = collide(cur.clusters[up->index], cur.clusters[up->index + 1], t);
    cur.clusters[up->index] = merged;
    cur.clusters.erase(cur.clusters.begin() + static_cast<std::ptrdiff_t>(up->index) + 1);
    out.events.push_back(event);
    out.snapshots.push_back({t, cur.clusters});
  }
}

}  // namespace cflow
