#include <cmath>
#include <numbers>
#include <vector>

#include "cflow/errors.hpp"
#include "cflow/wave_structure.hpp"
#include "doctest.h"

using namespace cflow;

namespace {

constexpr double kPi = std::numbers::pi;
const ScaledPressure kUnit{{1.0, 2.0}, 1.0};

// lambda_f as a function of the conservative coordinates (rho, w); the
// eigenvector lives in that plane, so directional derivatives use this map.
double lambda_of_rw(WaveFamily f, double rho, double w, const ScaledPressure& sp) {
  return eigenvalue(f, {rho, std::acos(std::tanh(w))}, sp);
}

double directional_derivative(WaveFamily f, const EpsState& s, const ScaledPressure& sp) {
  auto [r1, r2] = eigenvector(f, s, sp);
  const double norm = std::hypot(r1, r2);
  r1 /= norm;
  r2 /= norm;
  const double w = psi(std::cos(s.theta));
  const double h = 1e-6;
  return (lambda_of_rw(f, s.rho + h * r1, w + h * r2, sp) -
          lambda_of_rw(f, s.rho - h * r1, w - h * r2, sp)) /
         (2.0 * h);
}

}  // namespace

TEST_CASE("eigenvalues at hand-computed reference points") {
  // rho = 1/2, eps = 1, gamma = 2: p' = 8, chi = sqrt(8/2) = 2
  const auto [lm, lp] = eigenvalues({0.5, kPi / 2.0}, kUnit);
  CHECK(lm == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(lp == doctest::Approx(2.0).epsilon(1e-12));
  // theta = pi/3: cos = 1/2, sin = sqrt(3)/2, lambda = 1/2 -+ sqrt(3)
  const auto [lm3, lp3] = eigenvalues({0.5, kPi / 3.0}, kUnit);
  CHECK(lm3 == doctest::Approx(0.5 - std::sqrt(3.0)).epsilon(1e-14));
  CHECK(lp3 == doctest::Approx(0.5 + std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("eigen accessors agree and scale with eps") {
  for (double eps : {1.0, 1e-2, 1e-4}) {
    const ScaledPressure sp{{1.0, 2.0}, eps};
    for (double rho : {0.2, 0.6, 0.9}) {
      for (double th : {0.4, kPi / 2.0, 2.7}) {
        const EpsState s{rho, th};
        const auto [lm, lp] = eigenvalues(s, sp);
        CHECK(eigenvalue(WaveFamily::Minus, s, sp) == lm);
        CHECK(eigenvalue(WaveFamily::Plus, s, sp) == lp);
        CHECK(lm < lp);  // strict hyperbolicity away from theta in {0, pi}
        const double spread = std::sqrt(eps * p_prime(sp.law, rho) * rho) * std::sin(th);
        CHECK(lp - lm == doctest::Approx(2.0 * spread).epsilon(1e-12));
        CHECK(lp + lm == doctest::Approx(2.0 * std::cos(th)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("eigenvector components at a reference point") {
  const auto [r1, r2] = eigenvector(WaveFamily::Plus, {0.5, kPi / 3.0}, kUnit);
  CHECK(r1 == doctest::Approx(0.5 * std::sin(kPi / 3.0)).epsilon(1e-14));
  CHECK(r2 == doctest::Approx(2.0).epsilon(1e-12));
  const auto [q1, q2] = eigenvector(WaveFamily::Minus, {0.5, kPi / 3.0}, kUnit);
  CHECK(q1 == r1);
  CHECK(q2 == -r2);
}

TEST_CASE("linear degeneracy curve nulls the characteristic derivative") {
  for (double eps : {1.0, 0.1}) {
    const ScaledPressure sp{{1.0, 2.0}, eps};
    for (double rho : {0.3, 0.5, 0.8}) {
      for (WaveFamily f : {WaveFamily::Minus, WaveFamily::Plus}) {
        const double th = linearly_degenerate_theta(rho, f, sp);
        // branch placement: plus below pi/2, minus above
        if (f == WaveFamily::Plus) CHECK(th < kPi / 2.0);
        else CHECK(th > kPi / 2.0);
        CHECK(th > 0.0);
        CHECK(th < kPi);
        // defining relation cot(theta) = sign(f) G/2 recomputed from the law
        const double pr = p_prime(sp, rho), ps = p_second(sp, rho);
        const double g = (ps * rho + 3.0 * pr) * rho / std::pow(pr * rho, 1.5);
        CHECK(std::cos(th) / std::sin(th) ==
              doctest::Approx(family_sign(f) * g / 2.0).epsilon(1e-12));
        // grad(lambda) . r vanishes on the curve; between the branches (pi/2
        // sits strictly between them) it is nonzero with the family's sign
        CHECK(std::abs(directional_derivative(f, {rho, th}, sp)) < 1e-7);
        CHECK(family_sign(f) * directional_derivative(f, {rho, kPi / 2.0}, sp) > 0.1);
      }
    }
  }
}

TEST_CASE("hugoniot residual is symmetric as evaluated") {
  const EpsState a{0.3, 1.1}, b{0.7, 2.0};
  CHECK(hugoniot_residual(a, b, kUnit) == hugoniot_residual(b, a, kUnit));
  CHECK(hugoniot_residual(a, a, kUnit) == 0.0);
  // equal densities, different headings: H = -[Psi] rho [cos] < 0
  CHECK(hugoniot_residual({0.5, 1.0}, {0.5, 2.0}, kUnit) < 0.0);
}

TEST_CASE("hugoniot_solve_rho finds the jump partner") {
  for (double eps : {1.0, 1e-2, 1e-4}) {
    const ScaledPressure sp{{1.0, 2.0}, eps};
    const EpsState left{0.4, 1.2};
    for (double th_r : {1.5, 2.0, 0.9}) {
      const double rho_r = hugoniot_solve_rho(left, th_r, sp);
      CHECK(rho_r > left.rho);
      CHECK(rho_r < sp.law.rho_star);
      const double res = hugoniot_residual(left, {rho_r, th_r}, sp);
      const double scale = 1.0 + std::abs(p(sp, rho_r)) + std::abs(p(sp, left.rho));
      CHECK(std::abs(res) <= 1e-10 * scale);
      // sign change brackets the root
      CHECK(hugoniot_residual(left, {0.5 * (left.rho + rho_r), th_r}, sp) < 0.0);
      CHECK(hugoniot_residual(left, {rho_r + 0.5 * (sp.law.rho_star - rho_r), th_r}, sp) > 0.0);
    }
  }
  CHECK_THROWS_AS(hugoniot_solve_rho({0.4, 1.2}, 1.2, kUnit), NoRootError);
  CHECK_THROWS_AS(hugoniot_solve_rho({0.4, 1.2}, 0.0, kUnit), DomainError);
}

TEST_CASE("low root diagnostic matches a direct scan of the locus") {
  struct Probe {
    double eps, rho, theta_l, theta_r;
  };
  for (const Probe& pc : {Probe{1e-3, 0.5, 1.2, 1.9}, Probe{0.5, 0.6, 1.0, 2.4},
                          Probe{2.0, 0.7, 0.8, 2.6}, Probe{1e-1, 0.3, 2.0, 1.1}}) {
    const ScaledPressure sp{{1.0, 2.0}, pc.eps};
    const EpsState left{pc.rho, pc.theta_l};
    bool scan_found = false;
    double prev = hugoniot_residual(left, {1e-6, pc.theta_r}, sp);
    for (int k = 1; k <= 2000; ++k) {
      const double rho = 1e-6 + (left.rho - 2e-6) * k / 2000.0;
      const double cur = hugoniot_residual(left, {rho, pc.theta_r}, sp);
      if (prev == 0.0 || (prev < 0.0) != (cur < 0.0)) scan_found = true;
      prev = cur;
    }
    CHECK(hugoniot_low_root(left, pc.theta_r, sp) == scan_found);
  }
}

TEST_CASE("shock speed formula and degeneracy guard") {
  // right state at pi/3 carries flux 0.4, left flux is 0: sigma = 1
  CHECK(shock_speed({0.4, kPi / 2.0}, {0.8, kPi / 3.0}) == doctest::Approx(1.0).epsilon(1e-14));
  const EpsState a{0.25, 0.7}, b{0.5, 1.3};
  const double sigma = shock_speed(a, b);
  CHECK(sigma == doctest::Approx((0.5 * std::cos(1.3) - 0.25 * std::cos(0.7)) / 0.25)
                     .epsilon(1e-14));
  CHECK(shock_speed(b, a) == sigma);  // orientation-free
  CHECK_THROWS_AS(shock_speed({0.5, 1.0}, {0.5, 2.0}), DegenerateJumpError);
}

TEST_CASE("rarefaction curve direction and derivative") {
  const ScaledPressure sp{{1.0, 2.0}, 1e-2};
  const EpsState left{0.6, 1.8};
  // minus fans drop theta toward vacuum, plus fans raise it
  CHECK(rarefaction_theta(left, 0.3, WaveFamily::Minus, sp) < left.theta);
  CHECK(rarefaction_theta(left, 0.3, WaveFamily::Plus, sp) > left.theta);
  CHECK(rarefaction_theta(left, left.rho, WaveFamily::Minus, sp) == left.theta);
  // d theta / d rho = -sign(f) sqrt(eps p'(rho)/rho) along the curve
  const double h = 1e-6;
  for (WaveFamily f : {WaveFamily::Minus, WaveFamily::Plus}) {
    for (double rho : {0.2, 0.45}) {
      const double fd = (rarefaction_theta(left, rho + h, f, sp) -
                         rarefaction_theta(left, rho - h, f, sp)) /
                        (2.0 * h);
      const double expect = -family_sign(f) * std::sqrt(p_prime(sp, rho) / rho);
      CHECK(fd == doctest::Approx(expect).epsilon(1e-6));
    }
  }
  // vacuum end is reachable: finite angle at rho = 0
  CHECK(std::isfinite(rarefaction_theta(left, 0.0, WaveFamily::Minus, sp)));
}

TEST_CASE("rarefaction_rho inverts rarefaction_theta") {
  for (double eps : {1.0, 1e-3}) {
    const ScaledPressure sp{{1.0, 2.0}, eps};
    const EpsState left{0.7, 1.3};
    for (WaveFamily f : {WaveFamily::Minus, WaveFamily::Plus}) {
      for (double rho : {0.1, 0.4, 0.69}) {
        const double th = rarefaction_theta(left, rho, f, sp);
        CHECK(rarefaction_rho(left, th, f, sp) == doctest::Approx(rho).epsilon(1e-10));
      }
      // theta grows with rho for the Minus family and falls for Plus, so the
      // vacuum end is the heading minimum resp. maximum of the curve
      const double th_vac = rarefaction_theta(left, 0.0, f, sp);
      const double past = th_vac + family_sign(f) * 0.1;
      CHECK_THROWS_AS(rarefaction_rho(left, past, f, sp), OutOfRangeError);
    }
  }
}

TEST_CASE("rarefaction integral closed forms match quadrature") {
  // the gamma in {1, 2} closed forms and the generic quadrature are
  // independent routes; their agreement validates both
  for (double gamma : {1.0, 1.5, 2.0, 3.0}) {
    const PressureLaw law{1.0, gamma};
    for (auto [a, b] : {std::pair{0.2, 0.7}, std::pair{1e-8, 0.5}, std::pair{0.3, 0.999},
                        std::pair{0.6, 0.1}}) {
      const double closed = detail::rarefaction_integral(law, a, b);
      const double quad = detail::rarefaction_integral_quad(law, a, b);
      CHECK(closed == doctest::Approx(quad).epsilon(1e-10));
    }
    // signed and additive in the endpoints
    const double i_ab = detail::rarefaction_integral(law, 0.2, 0.5);
    const double i_bc = detail::rarefaction_integral(law, 0.5, 0.8);
    const double i_ac = detail::rarefaction_integral(law, 0.2, 0.8);
    CHECK(i_ab + i_bc == doctest::Approx(i_ac).epsilon(1e-12));
    CHECK(detail::rarefaction_integral(law, 0.5, 0.2) ==
          doctest::Approx(-i_ab).epsilon(1e-12));
  }
}

TEST_CASE("lax admissibility of constructed shocks") {
  const ScaledPressure sp{{1.0, 2.0}, 1e-2};
  // minus-family compressive jump: theta rises across the shock
  const EpsState l{0.4, 1.0};
  const EpsState r{hugoniot_solve_rho(l, 1.6, sp), 1.6};
  CHECK(lax_admissible(l, r, WaveFamily::Minus, sp));
  // traversed backwards the same jump is an inadmissible expansion
  CHECK_FALSE(lax_admissible(r, l, WaveFamily::Minus, sp));
  const double sigma = shock_speed(l, r);
  CHECK(eigenvalue(WaveFamily::Minus, l, sp) >= sigma - 1e-8);
  CHECK(eigenvalue(WaveFamily::Minus, r, sp) <= sigma + 1e-8);
  // a pair violating the jump relations is not a shock at all
  CHECK_THROWS_AS(lax_admissible(l, {0.9, 2.2}, WaveFamily::Minus, sp), NotAShockError);
}

TEST_CASE("conserved pair chain-rule residuals vanish") {
  const ScaledPressure sp{{1.0, 2.0}, 1e-2};
  for (ConservedPair pair : {ConservedPair::Mass, ConservedPair::Psi, ConservedPair::RhoPsi}) {
    for (double rho : {0.2, 0.5, 0.85}) {
      for (double th : {0.5, 1.6, 2.6}) {
        const auto [r1, r2] = conservative_pair_residual(pair, {rho, th}, sp);
        CHECK(std::abs(r1) <= 1e-6);
        CHECK(std::abs(r2) <= 1e-6);
      }
    }
  }
}

TEST_CASE("state validation") {
  CHECK_NOTHROW(validate(EpsState{0.5, 1.0}, kUnit));
  CHECK_THROWS_AS(validate(EpsState{0.0, 1.0}, kUnit), VacuumInputError);
  CHECK_THROWS_AS(validate(EpsState{-0.2, 1.0}, kUnit), VacuumInputError);
  CHECK_THROWS_AS(validate(EpsState{1.0, 1.0}, kUnit), DomainError);
  CHECK_THROWS_AS(validate(EpsState{0.5, 0.0}, kUnit), DomainError);
  CHECK_THROWS_AS(validate(EpsState{0.5, kPi}, kUnit), DomainError);
  CHECK_THROWS_AS(validate(EpsState{0.5, 1e-10}, kUnit), DomainError);
}
