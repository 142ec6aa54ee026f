#include <cmath>
#include <numbers>
#include <vector>

#include "cflow/cluster_dynamics.hpp"
#include "cflow/errors.hpp"
#include "doctest.h"

using namespace cflow;

namespace {

constexpr double kPi = std::numbers::pi;
const PressureLaw kLaw{1.0, 2.0};

double total_length(const std::vector<Cluster>& cs) {
  double acc = 0.0;
  for (const Cluster& c : cs) acc += c.length();
  return acc;
}

// length-weighted total of the conserved angle coordinate; merges must keep it
double total_w(const std::vector<Cluster>& cs) {
  double acc = 0.0;
  for (const Cluster& c : cs) acc += c.length() * c.w;
  return acc;
}

}  // namespace

TEST_CASE("cluster construction derives the angle coordinate once") {
  const Cluster c = make_cluster(0.0, 2.0, 1.2);
  CHECK(c.length() == 2.0);
  CHECK(c.w == psi(std::cos(1.2)));
  CHECK(c.speed() == doctest::Approx(std::cos(1.2)).epsilon(1e-14));
  CHECK_THROWS_AS(make_cluster(1.0, 1.0, 1.2), GeometryError);
  CHECK_THROWS_AS(make_cluster(2.0, 1.0, 1.2), GeometryError);
  CHECK_THROWS_AS(make_cluster(0.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(make_cluster(0.0, 1.0, kPi), DomainError);
}

TEST_CASE("system validation") {
  CHECK_NOTHROW(validate(ClusterSystem{{make_cluster(0, 1, 1.0), make_cluster(2, 3, 2.0)}, kLaw}));
  CHECK_THROWS_AS(validate(ClusterSystem{{}, kLaw}), GeometryError);
  // overlap and disorder are both span violations
  CHECK_THROWS_AS(validate(ClusterSystem{{make_cluster(0, 2, 1.0), make_cluster(1, 3, 2.0)}, kLaw}),
                  GeometryError);
  CHECK_THROWS_AS(validate(ClusterSystem{{make_cluster(2, 3, 1.0), make_cluster(0, 1, 2.0)}, kLaw}),
                  GeometryError);
}

TEST_CASE("next collision time and meeting point") {
  // closing speed cos(1) - cos(2) over a unit gap
  const ClusterSystem sys{{make_cluster(0, 1, 1.0), make_cluster(2, 3, 2.0)}, kLaw};
  const auto up = next_collision(sys);
  REQUIRE(up.has_value());
  CHECK(up->index == 0);
  const double closing = std::cos(1.0) - std::cos(2.0);
  CHECK(up->dt == doctest::Approx(1.0 / closing).epsilon(1e-14));
  CHECK(up->m == doctest::Approx(1.0 + std::cos(1.0) / closing).epsilon(1e-14));

  // separating pair never meets
  const ClusterSystem apart{{make_cluster(0, 1, 2.0), make_cluster(2, 3, 1.0)}, kLaw};
  CHECK_FALSE(next_collision(apart).has_value());
  // a single cluster has no partner
  CHECK_FALSE(next_collision(ClusterSystem{{make_cluster(0, 1, 1.0)}, kLaw}).has_value());
}

TEST_CASE("simultaneous contacts resolve to the leftmost pair") {
  const ClusterSystem sys{{make_cluster(0, 1, 1.0), make_cluster(2, 3, kPi / 2.0),
                           make_cluster(4, 5, kPi - 1.0)},
                          kLaw};
  const auto up = next_collision(sys);
  REQUIRE(up.has_value());
  CHECK(up->index == 0);
}

TEST_CASE("head-on merge of equal lengths balances at pi/2") {
  const Cluster left = make_cluster(0, 1, 1.0);
  const Cluster right = make_cluster(1, 2, kPi - 1.0);
  const auto [merged, event] = collide(left, right, 0.7);
  CHECK(merged.a == 0.0);
  CHECK(merged.b == 2.0);
  // w averages to zero, so the merged block stalls
  CHECK(std::abs(merged.w) <= 1e-15);
  CHECK(merged.theta == doctest::Approx(kPi / 2.0).epsilon(1e-12));
  CHECK(event.t_c == 0.7);
  CHECK(event.m == doctest::Approx(1.0));
  CHECK(event.theta_tilde == merged.theta);
  // impulse profile: zero at the far edges, kink of height |w| at the contact
  CHECK(event.pi.peak == doctest::Approx(psi(std::cos(1.0))).epsilon(1e-12));
  CHECK(event.pi(0.0) == 0.0);
  CHECK(event.pi(2.0) == 0.0);
  CHECK(event.pi(1.0) == doctest::Approx(event.pi.peak));
  CHECK(event.pi(0.5) == doctest::Approx(0.5 * event.pi.peak));
}

TEST_CASE("merge weights the angle coordinate by length") {
  const Cluster left = make_cluster(0.0, 2.0, 1.2);
  const Cluster right = make_cluster(2.0, 2.5, 2.1);
  const auto [merged, event] = collide(left, right, 1.0);
  const double w_expect = (2.0 * left.w + 0.5 * right.w) / 2.5;
  CHECK(merged.w == doctest::Approx(w_expect).epsilon(1e-14));
  CHECK(merged.theta == doctest::Approx(std::acos(std::tanh(w_expect))).epsilon(1e-14));
  CHECK(merged.length() == doctest::Approx(2.5));
  CHECK(event.pi.peak == doctest::Approx((w_expect - right.w) * 0.5).epsilon(1e-12));
  CHECK(event.pi.peak > 0.0);
  CHECK(event.pi(event.pi.m) == doctest::Approx(event.pi.peak));
}

TEST_CASE("collide rejects detached or separating clusters") {
  CHECK_THROWS_AS(collide(make_cluster(0, 1, 1.0), make_cluster(1.5, 2, 2.0), 0.0), GeometryError);
  // receding right neighbor: the pi profile would dip negative
  CHECK_THROWS_AS(collide(make_cluster(0, 1, 2.0), make_cluster(1, 2, 1.0), 0.0), GeometryError);
}

TEST_CASE("pi profile evaluates the piecewise linear kink") {
  const PiProfile pi{0.0, 1.0, 3.0, 2.0};
  CHECK(pi(-1.0) == 0.0);
  CHECK(pi(0.0) == 0.0);
  CHECK(pi(1.0) == 2.0);
  CHECK(pi(0.5) == doctest::Approx(1.0));
  CHECK(pi(2.0) == doctest::Approx(1.0));
  CHECK(pi(3.0) == 0.0);
  CHECK(pi(4.0) == 0.0);
}

TEST_CASE("free transport before the first contact") {
  const ClusterSystem sys{{make_cluster(0, 1, 1.0), make_cluster(5, 6, 2.0)}, kLaw};
  const ClusterTrajectory traj = simulate(sys, 0.5);
  CHECK(traj.events.empty());
  REQUIRE(traj.snapshots.size() == 2);
  CHECK(traj.snapshots.front().t == 0.0);
  CHECK(traj.snapshots.back().t == 0.5);
  const Cluster& moved = traj.snapshots.back().clusters[0];
  CHECK(moved.a == doctest::Approx(0.5 * std::cos(1.0)).epsilon(1e-14));
  CHECK(moved.b == doctest::Approx(1.0 + 0.5 * std::cos(1.0)).epsilon(1e-14));
}

TEST_CASE("symmetric triple collapses to a stalled block") {
  const ClusterSystem sys{{make_cluster(0, 1, 1.0), make_cluster(2, 3, kPi / 2.0),
                           make_cluster(4, 5, kPi - 1.0)},
                          kLaw};
  const ClusterTrajectory traj = simulate(sys, 3.0);
  REQUIRE(traj.events.size() == 2);
  // both contacts happen at the mirror-symmetric instant
  const double t1 = 1.0 / (std::cos(1.0) - std::cos(kPi / 2.0));
  CHECK(traj.events[0].t_c == doctest::Approx(t1).epsilon(1e-12));
  CHECK(traj.events[1].t_c == doctest::Approx(t1).epsilon(1e-9));
  const ClusterSnapshot& last = traj.snapshots.back();
  CHECK(last.t == 3.0);
  REQUIRE(last.clusters.size() == 1);
  CHECK(last.clusters[0].length() == doctest::Approx(3.0).epsilon(1e-12));
  // total w is zero by symmetry: the merged block stalls at pi/2
  CHECK(std::abs(last.clusters[0].w) <= 1e-12);
  CHECK(last.clusters[0].theta == doctest::Approx(kPi / 2.0).epsilon(1e-12));
}

TEST_CASE("merging conserves length and the angle coordinate total") {
  const ClusterSystem sys{{make_cluster(-3.0, -1.5, 0.9), make_cluster(-1.0, -0.2, 1.3),
                           make_cluster(0.4, 1.1, 1.9), make_cluster(2.0, 2.4, 2.6)},
                          kLaw};
  const double len0 = total_length(sys.clusters);
  const double w0 = total_w(sys.clusters);
  const ClusterTrajectory traj = simulate(sys, 50.0);
  REQUIRE(!traj.snapshots.empty());
  for (const ClusterSnapshot& snap : traj.snapshots) {
    CHECK(total_length(snap.clusters) == doctest::Approx(len0).epsilon(1e-12));
    CHECK(total_w(snap.clusters) == doctest::Approx(w0).epsilon(1e-12));
    // spans stay sorted and disjoint
    for (std::size_t i = 0; i + 1 < snap.clusters.size(); ++i)
      CHECK(snap.clusters[i].b <= snap.clusters[i + 1].a + 1e-9);
  }
  // every heading here closes on its right neighbor eventually
  CHECK(traj.snapshots.back().clusters.size() == 1);
  CHECK(traj.events.size() == 3);
  for (const CollisionEvent& ev : traj.events) {
    CHECK(ev.pi.peak >= 0.0);
    CHECK(ev.pi(ev.pi.a) == 0.0);
    CHECK(ev.pi(ev.pi.b) == 0.0);
    CHECK(ev.pi(ev.pi.m) == doctest::Approx(ev.pi.peak));
    CHECK(ev.theta_tilde > 0.0);
    CHECK(ev.theta_tilde < kPi);
  }
  // snapshot times never decrease and bracket the run
  CHECK(traj.snapshots.front().t == 0.0);
  CHECK(traj.snapshots.back().t == 50.0);
  for (std::size_t i = 0; i + 1 < traj.snapshots.size(); ++i)
    CHECK(traj.snapshots[i].t <= traj.snapshots[i + 1].t);
}

TEST_CASE("simulate validates its inputs") {
  CHECK_THROWS_AS(simulate(ClusterSystem{{}, kLaw}, 1.0), GeometryError);
  CHECK_THROWS_AS(simulate(ClusterSystem{{make_cluster(0, 1, 1.0)}, kLaw}, -1.0), DomainError);
}
