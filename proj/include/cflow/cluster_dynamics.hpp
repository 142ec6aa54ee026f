#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "cflow/pressure_law.hpp"

namespace cflow {

/// Congested block [a, b] translating rigidly at speed cos(theta). The
/// conserved angle coordinate w = psi(cos theta) is authoritative; theta is
/// the derived label in (0, pi). Merges average w, not theta.
struct Cluster {
  double a;
  double b;
  double theta;
  double w;
  double length() const { return b - a; }
  double speed() const { return std::tanh(w); }
};

/// Builds a cluster from its span and heading; w is derived once here.
Cluster make_cluster(double a, double b, double theta);

struct ClusterSystem {
  std::vector<Cluster> clusters;
  PressureLaw law;
};

/// Clusters must be nonempty, each with a < b, sorted and pairwise disjoint
/// (touching within 1e-9 allowed).
void validate(const ClusterSystem& system);

struct UpcomingCollision {
  std::size_t index;  // left member of the colliding pair (index, index + 1)
  double dt;          // time from the current configuration to contact
  double m;           // meeting point
};

/// Earliest pairwise contact under free transport; ties within 1e-12 resolve
/// to the leftmost pair. Empty when no adjacent pair is approaching.
std::optional<UpcomingCollision> next_collision(const ClusterSystem& system);

/// Impulsive interface pressure: piecewise linear on [a, b], zero at both
/// endpoints, single kink at the collision point m.
struct PiProfile {
  double a;
  double m;
  double b;
  double peak;  // value at m
  double operator()(double x) const;
};

struct CollisionEvent {
  double t_c;
  double m;
  double theta_tilde;
  PiProfile pi;
};

/// Sticky merge of two touching clusters: lengths add, w is the
/// length-weighted average, the pi profile peaks at the contact point.
/// Throws GeometryError if the facing edges are more than 1e-9 apart or the
/// clusters are separating at contact.
std::pair<Cluster, CollisionEvent> collide(const Cluster& left, const Cluster& right, double t_c);

struct ClusterSnapshot {
  double t;
  std::vector<Cluster> clusters;
};

struct ClusterTrajectory {
  std::vector<ClusterSnapshot> snapshots;  // initial, post-merge states, final
  std::vector<CollisionEvent> events;
};

/// Event-driven integration to the horizon: translate, merge, repeat.
ClusterTrajectory simulate(const ClusterSystem& system, double horizon);

}  // namespace cflow
