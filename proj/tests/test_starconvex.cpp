#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "tnewton/errors.hpp"
#include "tnewton/starconvex.hpp"
#include "tnewton/zoo.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace tnewton;

TEST_CASE("closed forms against line integrals computed by Gauss-Legendre") {
  for (const char* name : {"geman_mcclure", "welsh", "cauchy"}) {
    CAPTURE(name);
    const RadialLoss r = make_radial(name, Vector::Zero(1));
    for (double x : {0.2, 0.9, 1.7, 3.0}) {
      // L(x) = x * int_0^x psi'(s)/s ds, with psi'(s)/s -> 2 psi''(0) at 0.
      const double inner = oracle::integrate(
          [&r](double s) { return s == 0.0 ? 2.0 * r.psi_double_prime(0.0) : r.psi_prime(s) / s; }, 0.0, x);
      CHECK(star::closed_form_profile(r.kind, x) == doctest::Approx(x * inner).epsilon(1e-12));
    }
  }
  CHECK(star::closed_form_profile(RadialKind::Cauchy, 1.0) == doctest::Approx(std::numbers::pi / 2));
  CHECK(star::closed_form_profile(RadialKind::Welsh, 1.0) ==
        doctest::Approx(std::sqrt(std::numbers::pi) * oracle::erf_by_quadrature(1.0)));
}

TEST_CASE("star_value on radial losses equals the closed form") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const char* name : {"geman_mcclure", "welsh", "cauchy"}) {
    const RadialLoss r = make_radial(name, Vector::Zero(1));
    const SmoothLoss base = as_1d_loss(r);
    for (int i = 0; i < 20; ++i) {
      const double x = u(rng);
      CHECK(std::abs(star::star_value(base, Vector::Constant(1, x)) - star::closed_form_profile(r.kind, std::abs(x))) <=
            1e-6);
    }
  }
  CHECK_THROWS_AS(star::star_value(make_saddle(), Vector::Ones(2)), InputError);
}

TEST_CASE("star_value on a quadratic doubles it") {
  // <grad f(t u), u> / t = u^T A u for every t, so the ray integral is 2 f.
  const Matrix a = zoo::random_spd(3, 8);
  const SmoothLoss q = make_quadratic(a);
  const Vector x = Vector::LinSpaced(3, -1.0, 2.0);
  CHECK(star::star_value(q, x) == doctest::Approx(x.dot(a * x)).epsilon(1e-9));
}

TEST_CASE("transformed radial losses are star-convex and locally convex") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (const char* name : {"geman_mcclure", "welsh", "cauchy"}) {
    CAPTURE(name);
    const star::RadialStar rs = star::radial_star_loss(make_radial(name, Vector::Zero(1)));
    for (int i = 0; i < 50; ++i) {
      const double x = u(rng);
      const double lx = rs.loss.value(Vector::Constant(1, x));
      for (int j = 1; j <= 9; ++j) {
        const double lam = j / 10.0;
        CHECK(lam * lx - rs.loss.value(Vector::Constant(1, lam * x)) >= -1e-10);
      }
    }
  }
  CHECK(star::convexity_neighborhood(make_radial("cauchy", Vector::Zero(1)), 100.0, 1e-2));
  CHECK_FALSE(star::convexity_neighborhood(make_radial("welsh", Vector::Zero(1)), 3.0, 1e-2));
}

TEST_CASE("convergence radius of the untransformed Cauchy loss is 1/sqrt(3)") {
  // Unit Newton on log(1 + x^2) maps x to -2x^3/(1 - x^2); |x+| < |x| iff x^2 < 1/3.
  const star::RadiusResult r = star::convergence_radius(zoo::parse_loss("cauchy1d"), 0.5, {});
  CHECK(r.radius == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-6));
  CHECK(r.monotone);
}

TEST_CASE("convergence radius on a quadratic is infinite") {
  CHECK(std::isinf(star::convergence_radius(make_quadratic(Matrix::Identity(1, 1)), 1.0, {}).radius));
  CHECK_THROWS_AS(star::convergence_radius(make_benchmark("beale"), 1.0, {}), InputError);
}

TEST_CASE("positive curvature radius") {
  // Cauchy: f'' = 2(1 - x^2)/(1 + x^2)^2 changes sign at 1.
  const double r = star::positive_curvature_radius([](double x) { return 1.0 - x * x; }, 10.0);
  CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::isinf(star::positive_curvature_radius([](double) { return 1.0; }, 3.0)));
}
