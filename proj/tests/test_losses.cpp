#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fd_suite.hpp"
#include "tnewton/errors.hpp"
#include "tnewton/losses.hpp"
#include "tnewton/zoo.hpp"

#include <cmath>

using namespace tnewton;

TEST_CASE("benchmarks: known minima and finite differences") {
  for (const char* name : {"rosenbrock", "beale", "goldstein_price"}) {
    CAPTURE(name);
    const SmoothLoss f = make_benchmark(name);
    REQUIRE(f.minimizer());
    const Evaluation at = f.evaluate(*f.minimizer());
    CHECK(at.value == doctest::Approx(*f.min_value()).epsilon(1e-12));
    CHECK(at.gradient.norm() <= 1e-9);
    const auto e = fd::check_loss(f, fd::box(2, -2.0, 2.0), 100, 1);
    CHECK(e.gradient <= 1e-5);
    CHECK(e.hessian <= 1e-4);
  }
  CHECK(make_benchmark("rosenbrock").value(Vector::Zero(2)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(make_benchmark("himmelblau"), InputError);
}

TEST_CASE("polynorm: closed form and origin behaviour") {
  const Matrix a = zoo::random_spd(3, 4);
  for (double p : {1.5, 2.0, 3.0, 4.5}) {
    CAPTURE(p);
    const SmoothLoss f = make_polynorm(a, p);
    const auto e = fd::check_loss(f, fd::box(3, -2.0, 2.0), 50, 2);
    CHECK(e.gradient <= 1e-5);
    CHECK(e.hessian <= 1e-4);
    Vector x(3);
    x << 0.3, -1.0, 0.7;
    CHECK(f.value(x) == doctest::Approx(std::pow(x.dot(a * x), p / 2.0) / p));
  }
  CHECK(make_polynorm(a, 2.0).evaluate(Vector::Zero(3)).hessian.isApprox(a));
  CHECK(make_polynorm(a, 3.0).evaluate(Vector::Zero(3)).hessian.norm() == 0.0);
  CHECK_THROWS_AS(make_polynorm(a, 1.5).evaluate(Vector::Zero(3)), EvaluationError);
  CHECK_THROWS_AS(make_polynorm(a, 1.0), InputError);
  CHECK_THROWS_AS(make_polynorm(a, 0.0), InputError);
  CHECK_THROWS_AS(make_polynorm(-a, 3.0), InputError);
}

TEST_CASE("polytope: value, smooth pieces and feasible zero") {
  const Polytope poly = random_polytope(10, 20, 3.0, 7);
  const SmoothLoss f = make_polytope(poly);
  CHECK(f.value(Vector::Zero(10)) == 0.0);
  // Avoid points within 0.05 of a facet, where p = 2 Hessians jump.
  auto away = [&poly](const Vector& x) {
    return ((poly.rows * x - poly.offsets).array().abs() > 0.05).all();
  };
  for (double p : {2.0, 3.0, 4.0}) {
    const SmoothLoss fp = make_polytope(random_polytope(10, 20, p, 7));
    const auto e = fd::check_loss(fp, fd::box(10, -3.0, 3.0), 30, 3, away);
    CHECK(e.points == 30);
    CHECK(e.gradient <= 1e-5);
    CHECK(e.hessian <= 1e-4);
  }
  CHECK_THROWS_AS(make_polytope(random_polytope(3, 4, 1.5, 1)), InputError);
}

TEST_CASE("radial losses: profiles, inverses, finite differences") {
  for (const char* name : {"geman_mcclure", "welsh", "cauchy"}) {
    CAPTURE(name);
    const RadialLoss r = make_radial(name, Vector::Zero(1));
    for (double s : {0.1, 0.5, 1.0, 2.0}) {
      CHECK(r.psi_inverse(r.psi(s)) == doctest::Approx(s).epsilon(1e-12));
      CHECK(r.psi_prime(s) == doctest::Approx(oracle::derivative(r.psi, s, 1e-3)).epsilon(1e-9));
      CHECK(r.psi_double_prime(s) ==
            doctest::Approx(oracle::derivative(r.psi_prime, s, 1e-3)).epsilon(1e-8));
    }
    const SmoothLoss f = as_1d_loss(r);
    const auto e = fd::check_loss(f, fd::box(1, -3.0, 3.0), 100, 4);
    CHECK(e.gradient <= 1e-5);
    CHECK(e.hessian <= 1e-4);
    Vector c(2);
    c << 1.0, -2.0;
    const SmoothLoss f2 = radial_as_loss(make_radial(name, c));
    const auto e2 = fd::check_loss(f2, fd::box(2, -3.0, 3.0), 50, 5);
    CHECK(e2.gradient <= 1e-5);
    CHECK(e2.hessian <= 1e-4);
    CHECK(f2.value(c) == 0.0);
  }
  CHECK(make_radial("cauchy", Vector::Zero(1)).psi(1.0) == doctest::Approx(std::log(2.0)));
  CHECK(make_radial("geman_mcclure", Vector::Zero(1)).psi(1.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(make_radial("welsh", Vector::Zero(1)).psi_inverse(1.0), DomainError);
  CHECK_THROWS_AS(make_radial("tukey", Vector::Zero(1)), InputError);
}

TEST_CASE("counterexample: kink and minimizer") {
  const SmoothLoss f = make_counterexample();
  CHECK(f.value(Vector::Zero(1)) == 0.0);
  CHECK(f.value(Vector::Constant(1, 1.0)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(f.evaluate(Vector::Zero(1)), EvaluationError);
  auto away = [](const Vector& x) { return std::abs(x(0)) > 0.05; };
  const auto e = fd::check_loss(f, fd::box(1, -0.5, 1.5), 100, 6, away);
  CHECK(e.gradient <= 1e-5);
  CHECK(e.hessian <= 1e-4);
}

TEST_CASE("saddle and quadratic") {
  const SmoothLoss s = make_saddle();
  Vector x(2);
  x << 1.0, 2.0;
  CHECK(s.value(x) == doctest::Approx(-3.0));
  CHECK(linalg::min_eigenvalue(s.evaluate(x).hessian) == doctest::Approx(-2.0));
  const SmoothLoss q = make_quadratic(Matrix::Identity(3, 3));
  CHECK(q.evaluate(Vector::Ones(3)).gradient.isApprox(Vector::Ones(3)));
}

TEST_CASE("evaluation rejects bad points") {
  const SmoothLoss f = make_benchmark("beale");
  CHECK_THROWS_AS(f.evaluate(Vector::Zero(3)), InputError);
  CHECK_THROWS_AS(f.evaluate(Vector::Constant(2, NAN)), InputError);
}
