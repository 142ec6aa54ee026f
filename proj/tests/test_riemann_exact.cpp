#include <cmath>
#include <numbers>
#include <variant>
#include <vector>

#include "cflow/errors.hpp"
#include "cflow/riemann_exact.hpp"
#include "doctest.h"

using namespace cflow;

namespace {

constexpr double kPi = std::numbers::pi;
const ScaledPressure kSp{{1.0, 2.0}, 1e-2};

SignedState mirrored(const SignedState& s) {
  const double sign = s.theta < 0.0 ? -1.0 : 1.0;
  return {s.rho, sign * (kPi - std::abs(s.theta))};
}

// x -> -x maps a solution onto the solution of the swapped, mirrored data
// with all wave speeds negated; the construction must commute with it.
void check_mirror(const SignedState& l, const SignedState& r, const ScaledPressure& sp) {
  const RiemannSolution a = solve(l, r, sp);
  const RiemannSolution b = solve(mirrored(r), mirrored(l), sp);
  REQUIRE(a.states.size() == b.states.size());
  REQUIRE(a.waves.size() == b.waves.size());
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    const SignedState& s = a.states[i];
    const SignedState& t = b.states[b.states.size() - 1 - i];
    CHECK(s.rho == doctest::Approx(t.rho).epsilon(1e-12));
    if (s.rho > 1e-12)
      CHECK(std::abs(s.theta) == doctest::Approx(kPi - std::abs(t.theta)).epsilon(1e-12));
  }
  for (std::size_t i = 0; i < a.waves.size(); ++i) {
    const Wave& w = a.waves[i];
    const Wave& v = b.waves[b.waves.size() - 1 - i];
    REQUIRE(w.index() == v.index());
    if (const auto* sw = std::get_if<ShockWave>(&w)) {
      const auto& sv = std::get<ShockWave>(v);
      CHECK(sw->speed == doctest::Approx(-sv.speed).epsilon(1e-12));
      CHECK(sw->family != sv.family);
    } else if (const auto* fw = std::get_if<RarefactionWave>(&w)) {
      const auto& fv = std::get<RarefactionWave>(v);
      CHECK(fw->speed_lo == doctest::Approx(-fv.speed_hi).epsilon(1e-12));
      CHECK(fw->speed_hi == doctest::Approx(-fv.speed_lo).epsilon(1e-12));
      CHECK(fw->family != fv.family);
    }
  }
}

}  // namespace

TEST_CASE("classification of the structural cases") {
  CHECK(classify({0.3, 1.0}, {0.7, 1.0}, kSp) == RiemannCase::EqualAngles);
  // signed headings classify by |theta|
  CHECK(classify({0.3, 1.0}, {0.7, -1.0}, kSp) == RiemannCase::EqualAngles);
  CHECK(classify({0.5, 2.0}, {0.5, 1.2}, kSp) == RiemannCase::VacuumOpening);
  // symmetric compressive data: the middle heading pi/2 lies between the
  // data headings, so both sides are jumps
  CHECK(classify({0.4, 1.2}, {0.4, kPi - 1.2}, kSp) == RiemannCase::TwoShocks);
}

TEST_CASE("identical data collapse to no waves or a sign contact") {
  const RiemannSolution same = solve({0.5, 1.3}, {0.5, 1.3}, kSp);
  CHECK(same.kind == RiemannCase::EqualAngles);
  CHECK(same.waves.empty());
  REQUIRE(same.states.size() == 1);
  CHECK(sample(same, -5.0).rho == 0.5);
  CHECK(sample(same, 5.0).rho == 0.5);

  const RiemannSolution flip = solve({0.5, -1.0}, {0.5, 1.0}, kSp);
  REQUIRE(flip.waves.size() == 1);
  const auto& sc = std::get<SignContactWave>(flip.waves[0]);
  CHECK(sc.speed == doctest::Approx(std::cos(1.0)).epsilon(1e-15));
  CHECK(*sample(flip, sc.speed - 0.1).theta == -1.0);
  CHECK(*sample(flip, sc.speed + 0.1).theta == 1.0);
  // right limit exactly at the contact speed
  CHECK(*sample(flip, sc.speed).theta == 1.0);
}

TEST_CASE("symmetric compression yields two shocks about pi/2") {
  const SignedState l{0.4, 1.2}, r{0.4, kPi - 1.2};
  const RiemannSolution sol = solve(l, r, kSp);
  CHECK(sol.kind == RiemannCase::TwoShocks);
  REQUIRE(sol.states.size() == 3);
  REQUIRE(sol.waves.size() == 2);
  // mirror symmetry of the data pins the middle heading at pi/2, and the
  // middle density on the jump locus of the left datum
  CHECK(sol.states[1].theta == doctest::Approx(kPi / 2.0).epsilon(1e-9));
  const double rho_expect = hugoniot_solve_rho({0.4, 1.2}, kPi / 2.0, kSp);
  CHECK(sol.states[1].rho == doctest::Approx(rho_expect).epsilon(1e-9));
  CHECK(sol.states[1].rho > 0.4);
  const auto& sl = std::get<ShockWave>(sol.waves[0]);
  const auto& sr = std::get<ShockWave>(sol.waves[1]);
  CHECK(sl.family == WaveFamily::Minus);
  CHECK(sr.family == WaveFamily::Plus);
  CHECK(sl.speed == doctest::Approx(-sr.speed).epsilon(1e-9));
  CHECK(sl.speed ==
        doctest::Approx(shock_speed({0.4, 1.2}, {rho_expect, kPi / 2.0})).epsilon(1e-8));
  CHECK(check_solution(sol).pass);
  // right-limit convention at the shock speeds
  CHECK(sample(sol, sl.speed).rho == doctest::Approx(sol.states[1].rho));
  CHECK(sample(sol, sr.speed).rho == 0.4);
}

TEST_CASE("strong symmetric compression pins a near-congested middle state") {
  const RiemannSolution sol = solve({0.8, 1.0}, {0.8, kPi - 1.0}, kSp);
  CHECK(sol.kind == RiemannCase::TwoShocks);
  REQUIRE(sol.states.size() == 3);
  CHECK(sol.states[1].rho > 0.9);
  CHECK(sol.states[1].rho < 1.0);
  CHECK(check_solution(sol).pass);
}

TEST_CASE("solver reproduces a middle state built from the wave primitives") {
  // assemble the exact solution by hand: a minus shock from the left datum to
  // a chosen middle heading, then a plus fan along the integral curve
  const SignedState l{0.4, 1.2};
  const double theta_m = 1.9;
  const double rho_m = hugoniot_solve_rho({l.rho, l.theta}, theta_m, kSp);
  const double rho_r = rho_m + 0.5 * (1.0 * (1.0 - 1e-3) - rho_m);
  const double theta_r = rarefaction_theta({rho_m, theta_m}, rho_r, WaveFamily::Plus, kSp);
  REQUIRE(theta_r > l.theta);  // rising data, no vacuum
  REQUIRE(theta_r < theta_m);

  const SignedState r{rho_r, theta_r};
  CHECK(classify(l, r, kSp) == RiemannCase::MixedShockRarefaction);
  const RiemannSolution sol = solve(l, r, kSp);
  CHECK(sol.kind == RiemannCase::MixedShockRarefaction);
  REQUIRE(sol.states.size() == 3);
  REQUIRE(sol.waves.size() == 2);
  CHECK(sol.states[1].rho == doctest::Approx(rho_m).epsilon(1e-9));
  CHECK(sol.states[1].theta == doctest::Approx(theta_m).epsilon(1e-9));
  const auto& sh = std::get<ShockWave>(sol.waves[0]);
  CHECK(sh.family == WaveFamily::Minus);
  CHECK(sh.speed == doctest::Approx(shock_speed({l.rho, l.theta}, {rho_m, theta_m})).epsilon(1e-8));
  const auto& fan = std::get<RarefactionWave>(sol.waves[1]);
  CHECK(fan.family == WaveFamily::Plus);
  CHECK(fan.speed_lo ==
        doctest::Approx(eigenvalue(WaveFamily::Plus, {rho_m, theta_m}, kSp)).epsilon(1e-9));
  CHECK(fan.speed_hi ==
        doctest::Approx(eigenvalue(WaveFamily::Plus, {rho_r, theta_r}, kSp)).epsilon(1e-12));
  CHECK(check_solution(sol).pass);
}

TEST_CASE("equal headings with a density jump split into shock and fan") {
  // equal speeds but unequal pressures: the interface radiates both waves
  const RiemannSolution sol = solve({0.3, 1.0}, {0.7, 1.0}, kSp);
  CHECK(sol.kind == RiemannCase::EqualAngles);
  REQUIRE(sol.waves.size() == 2);
  CHECK(std::get<ShockWave>(sol.waves[0]).family == WaveFamily::Minus);
  CHECK(std::get<RarefactionWave>(sol.waves[1]).family == WaveFamily::Plus);
  CHECK(sol.states[1].theta > 1.0);
  CHECK(sol.states[1].rho > 0.3);
  CHECK(sol.states[1].rho < 0.7);
  CHECK(check_solution(sol).pass);

  // reversed density order flips the pattern
  const RiemannSolution rev = solve({0.7, 1.0}, {0.3, 1.0}, kSp);
  CHECK(rev.kind == RiemannCase::EqualAngles);
  REQUIRE(rev.waves.size() == 2);
  CHECK(std::get<RarefactionWave>(rev.waves[0]).family == WaveFamily::Minus);
  CHECK(std::get<ShockWave>(rev.waves[1]).family == WaveFamily::Plus);
  CHECK(rev.states[1].theta < 1.0);
}

TEST_CASE("dropping headings open a vacuum between two full fans") {
  const SignedState l{0.5, 2.9}, r{0.5, 1.5};
  const double th_lvac = rarefaction_theta({l.rho, l.theta}, 0.0, WaveFamily::Minus, kSp);
  const double th_rvac = rarefaction_theta({r.rho, r.theta}, 0.0, WaveFamily::Plus, kSp);
  REQUIRE(th_lvac >= th_rvac);  // the fans cannot meet at positive density

  CHECK(classify(l, r, kSp) == RiemannCase::VacuumOpening);
  const RiemannSolution sol = solve(l, r, kSp);
  CHECK(sol.kind == RiemannCase::VacuumOpening);
  REQUIRE(sol.states.size() == 4);
  REQUIRE(sol.waves.size() == 3);
  CHECK(sol.states[1].rho == 0.0);
  CHECK(sol.states[2].rho == 0.0);
  CHECK(sol.states[1].theta == doctest::Approx(th_lvac).epsilon(1e-14));
  CHECK(sol.states[2].theta == doctest::Approx(th_rvac).epsilon(1e-14));
  const auto& vac = std::get<VacuumWave>(sol.waves[1]);
  CHECK(vac.speed_lo == doctest::Approx(std::cos(th_lvac)).epsilon(1e-14));
  CHECK(vac.speed_hi == doctest::Approx(std::cos(th_rvac)).epsilon(1e-14));
  CHECK(check_solution(sol).pass);

  // sampling inside the vacuum reports no heading
  const SamplePoint inside = sample(sol, 0.5 * (vac.speed_lo + vac.speed_hi));
  CHECK(inside.rho == 0.0);
  CHECK_FALSE(inside.theta.has_value());

  // the plus fan spans xi = 0 here: a fan sample at xi has lambda(state) = xi
  const auto& pfan = std::get<RarefactionWave>(sol.waves[2]);
  REQUIRE(pfan.speed_lo < 0.0);
  REQUIRE(pfan.speed_hi > 0.0);
  const SamplePoint sonic = sample(sol, 0.0);
  REQUIRE(sonic.theta.has_value());
  CHECK(std::abs(eigenvalue(WaveFamily::Plus, {sonic.rho, *sonic.theta}, kSp)) <= 1e-9);
}

TEST_CASE("a small heading drop degenerates the vacuum into two fans") {
  const SignedState l{0.5, 2.0}, r{0.5, 1.99};
  const double th_lvac = rarefaction_theta({l.rho, l.theta}, 0.0, WaveFamily::Minus, kSp);
  const double th_rvac = rarefaction_theta({r.rho, r.theta}, 0.0, WaveFamily::Plus, kSp);
  REQUIRE(th_lvac < th_rvac);  // curves intersect before the vacuum end

  CHECK(classify(l, r, kSp) == RiemannCase::VacuumOpening);  // data class
  const RiemannSolution sol = solve(l, r, kSp);
  CHECK(sol.kind == RiemannCase::VacuumOpening);
  REQUIRE(sol.states.size() == 3);
  REQUIRE(sol.waves.size() == 2);
  CHECK(std::holds_alternative<RarefactionWave>(sol.waves[0]));
  CHECK(std::holds_alternative<RarefactionWave>(sol.waves[1]));
  const double rho_m = sol.states[1].rho;
  const double theta_m = sol.states[1].theta;
  CHECK(rho_m > 0.0);
  CHECK(rho_m < 0.5);
  // the middle state sits on both integral curves
  CHECK(rarefaction_theta({l.rho, l.theta}, rho_m, WaveFamily::Minus, kSp) ==
        doctest::Approx(theta_m).epsilon(1e-9));
  CHECK(rarefaction_theta({r.rho, r.theta}, rho_m, WaveFamily::Plus, kSp) ==
        doctest::Approx(theta_m).epsilon(1e-9));
  CHECK(check_solution(sol).pass);
}

TEST_CASE("sign flips ride a contact at the middle heading") {
  const RiemannSolution sol = solve({0.3, -1.0}, {0.7, 1.0}, kSp);
  REQUIRE(sol.states.size() == 4);
  REQUIRE(sol.waves.size() == 3);
  CHECK(std::holds_alternative<ShockWave>(sol.waves[0]));
  const auto& sc = std::get<SignContactWave>(sol.waves[1]);
  CHECK(std::holds_alternative<RarefactionWave>(sol.waves[2]));
  CHECK(sol.states[1].theta < 0.0);
  CHECK(sol.states[2].theta > 0.0);
  CHECK(sol.states[1].rho == sol.states[2].rho);
  CHECK(sc.speed == doctest::Approx(std::cos(sol.states[2].theta)).epsilon(1e-14));
  CHECK(*sample(sol, sc.speed - 1e-6).theta < 0.0);
  CHECK(*sample(sol, sc.speed + 1e-6).theta > 0.0);
  CHECK(check_solution(sol).pass);

  // uniform negative sign: no contact, every sampled heading stays negative
  const RiemannSolution neg = solve({0.4, -1.2}, {0.4, -(kPi - 1.2)}, kSp);
  REQUIRE(neg.waves.size() == 2);
  CHECK(neg.states[1].theta == doctest::Approx(-kPi / 2.0).epsilon(1e-9));
  for (double xi : {-1.5, -0.5, 0.0, 0.5, 1.5}) {
    const SamplePoint pt = sample(neg, xi);
    if (pt.theta) CHECK(*pt.theta < 0.0);
  }
}

TEST_CASE("mirror symmetry of the construction") {
  check_mirror({0.25, 1.1}, {0.6, 2.1}, kSp);                  // mixed pattern
  check_mirror({0.4, 1.2}, {0.5, kPi - 1.3}, kSp);             // two shocks
  check_mirror({0.5, 2.9}, {0.5, 1.5}, kSp);                   // vacuum opening
  check_mirror({0.3, -1.0}, {0.7, 1.0}, kSp);                  // sign contact
  check_mirror({0.3, 1.0}, {0.7, 1.0}, ScaledPressure{{1.0, 2.0}, 0.3});
}

TEST_CASE("solutions across eps and gamma verify cleanly") {
  for (double gamma : {1.0, 1.5, 2.0, 3.0}) {
    for (double eps : {1e-1, 1e-3, 1e-5}) {
      const ScaledPressure sp{{1.0, gamma}, eps};
      for (const auto& [l, r] : {std::pair<SignedState, SignedState>{{0.3, 1.0}, {0.6, 1.7}},
                                 {{0.7, 2.2}, {0.2, 1.9}},
                                 {{0.5, 1.4}, {0.5, kPi - 1.4}}}) {
        const RiemannSolution sol = solve(l, r, sp);
        const SolutionCheck chk = check_solution(sol);
        CHECK(chk.pass);
        CHECK(chk.max_rh_residual <= 1e-10);
        CHECK(sol.kind == classify(l, r, sp));
      }
    }
  }
}

TEST_CASE("vacuum data are rejected") {
  CHECK_THROWS_AS(solve({0.0, 1.0}, {0.5, 1.0}, kSp), VacuumInputError);
  CHECK_THROWS_AS(solve({0.5, 1.0}, {-0.1, 1.0}, kSp), VacuumInputError);
}

TEST_CASE("heading domain is enforced on signed data") {
  CHECK_THROWS_AS(solve({0.5, 0.0}, {0.5, 1.0}, kSp), DomainError);
  CHECK_THROWS_AS(solve({0.5, 1.0}, {0.5, 3.2}, kSp), DomainError);
  CHECK_THROWS_AS(solve({0.5, -3.2}, {0.5, 1.0}, kSp), DomainError);
}

TEST_CASE("large eps outside the genuinely nonlinear band is refused") {
  const ScaledPressure big{{1.0, 2.0}, 5.0};
  // the right datum sits beyond the minus-family degeneracy curve
  REQUIRE(linearly_degenerate_theta(0.5, WaveFamily::Minus, big) < 2.6);
  CHECK_THROWS_AS(solve({0.5, 1.0}, {0.5, 2.6}, big), GuardError);
  // the same data are well inside the band at small eps
  CHECK_NOTHROW(solve({0.5, 1.0}, {0.5, 2.6}, ScaledPressure{{1.0, 2.0}, 1e-4}));
}
