#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "tnewton/errors.hpp"
#include "tnewton/newton.hpp"
#include "tnewton/zoo.hpp"

#include <cmath>
#include <random>

using namespace tnewton;

TEST_CASE("quadratic converges in one unit step") {
  const SmoothLoss q = make_quadratic(zoo::random_spd(4, 2));
  const IterateTrace t = run_newton(q, *StepsizeSchedule::constant(1.0), Vector::Constant(4, 3.0));
  CHECK(t.termination == Termination::Converged);
  CHECK(t.iterations == 1);
  CHECK(t.last_x().norm() <= 1e-12);
}

TEST_CASE("polynorm: alpha = p - 1 is a one-step method, alpha = 1 contracts by (p-2)/(p-1)") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n(0.0, 1.0);
  for (double p : {2.0, 3.0, 4.0, 5.0}) {
    const SmoothLoss f = make_polynorm(zoo::random_spd(4, 3), p);
    const Vector x0 = Vector::NullaryExpr(4, [&] { return n(rng); });
    const IterateTrace one = run_newton(f, *StepsizeSchedule::constant(p - 1.0), x0);
    CHECK(one.iterations == 1);
    CHECK(one.last_x().norm() <= 1e-10);
    if (p > 2.0) {
      NewtonConfig cfg;
      cfg.max_iters = 1;
      const IterateTrace unit = run_newton(f, *StepsizeSchedule::constant(1.0), x0, cfg);
      const double ratio = unit.records[1].x.norm() / x0.norm();
      CHECK(ratio == doctest::Approx((p - 2.0) / (p - 1.0)).epsilon(1e-10));
    }
  }
}

TEST_CASE("records carry alpha, scaling and dual norm") {
  const SmoothLoss f = make_benchmark("rosenbrock");
  Vector x0(2);
  x0 << -1.2, 1.0;
  const SchedulePtr s = StepsizeSchedule::induced(StepsizeSchedule::constant(0.5), exponential_transform(0.1));
  NewtonConfig cfg;
  cfg.max_iters = 5;
  const IterateTrace t = run_newton(f, *s, x0, cfg);
  REQUIRE(t.records.size() == 6);
  for (std::size_t k = 0; k + 1 < t.records.size(); ++k) {
    const auto& r = t.records[k];
    REQUIRE(r.scaling);
    CHECK(r.alpha == doctest::Approx(0.5 / *r.scaling).epsilon(1e-12));
    CHECK(*r.scaling == doctest::Approx(1.0 + 0.1 * r.dual_sq).epsilon(1e-12));
    const Evaluation e = f.evaluate(r.x);
    CHECK(r.dual_sq == doctest::Approx(e.gradient.dot(oracle::min_norm_solve(e.hessian, e.gradient))));
  }
  CHECK(std::isnan(t.records.back().alpha));
  CHECK_FALSE(t.records.back().scaling);
}

TEST_CASE("induced schedule on f reproduces unit Newton on the transformed loss") {
  const SmoothLoss f = make_benchmark("beale");
  Vector x0(2);
  x0 << 2.5, 0.3;
  for (const char* spec : {"poly:r=2", "exp:a=0.1", "log:a=1", "sigmoid"}) {
    CAPTURE(spec);
    const ScalarTransform t = *zoo::parse_transform(spec);
    NewtonConfig cfg;
    cfg.max_iters = 8;
    cfg.gtol = 0.0;
    cfg.xtol = 0.0;
    const IterateTrace on_l = run_newton(compose(f, t).as_loss(), *StepsizeSchedule::constant(1.0), x0, cfg);
    const IterateTrace on_f =
        run_newton(f, *StepsizeSchedule::induced(StepsizeSchedule::constant(1.0), t), x0, cfg);
    REQUIRE(on_l.records.size() == on_f.records.size());
    for (std::size_t k = 0; k < on_l.records.size(); ++k) {
      CHECK((on_l.records[k].x - on_f.records[k].x).norm() <= 1e-8 * (1.0 + on_l.records[k].x.norm()));
    }
  }
}

TEST_CASE("equivalence under a linear transform is exact") {
  const EquivalenceResult r = run_equivalence(make_benchmark("rosenbrock"), linear_transform(2.0, 5.0),
                                              StepsizeSchedule::constant(0.5), Vector::Zero(2));
  CHECK(r.max_deviation <= 1e-14);
  CHECK(r.min_abs_scaling == doctest::Approx(1.0));
}

TEST_CASE("termination reasons") {
  const SmoothLoss cauchy = zoo::parse_loss("cauchy1d");
  const IterateTrace div = run_newton(cauchy, *StepsizeSchedule::constant(1.0), Vector::Constant(1, 0.8));
  CHECK(div.termination == Termination::Diverged);
  CHECK(div.records[1].x(0) == doctest::Approx(-2.8444444444).epsilon(1e-9));

  NewtonConfig cfg;
  cfg.max_iters = 3;
  cfg.gtol = 0.0;
  cfg.xtol = 0.0;
  const IterateTrace cap =
      run_newton(make_benchmark("rosenbrock"), *StepsizeSchedule::constant(0.1), Vector::Zero(2), cfg);
  CHECK(cap.termination == Termination::MaxIters);
  CHECK(cap.iterations == 3);

  // Log transform with the scaling factor exactly at zero: 1 - q / (a + f) = 0.
  // On the quadratic x^2/2, q = x^2 and f = x^2/2, so a = x^2/2 makes it vanish.
  const SmoothLoss q = make_quadratic(Matrix::Identity(1, 1));
  const SchedulePtr s = StepsizeSchedule::induced(StepsizeSchedule::constant(1.0), logarithmic_transform(0.5));
  const IterateTrace sing = run_newton(q, *s, Vector::Constant(1, 1.0));
  CHECK(sing.termination == Termination::SingularScaling);
  CHECK(sing.iterations == 0);

  Vector at_min(2);
  at_min << 3.0, 0.5;
  const IterateTrace dom = run_newton(compose(make_benchmark("beale"), polynomial_transform(0.5)).as_loss(),
                                      *StepsizeSchedule::constant(1.0), at_min);
  CHECK(dom.termination == Termination::DomainError);
  CHECK_FALSE(dom.message.empty());

  NewtonConfig bad;
  bad.max_iters = 0;
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("range violations are flagged") {
  // Newton on sqrt of a quadratic: the Hessian annihilates x while the
  // gradient is parallel to x.
  const SmoothLoss f = compose(make_quadratic(Matrix::Identity(2, 2)), polynomial_transform(0.5)).as_loss();
  NewtonConfig cfg;
  cfg.max_iters = 3;
  const IterateTrace t = run_newton(f, *StepsizeSchedule::constant(1.0), Vector::Constant(2, 1.0), cfg);
  CHECK(t.range_violation);
  CHECK_FALSE(t.records.front().in_range);
}

TEST_CASE("Armijo backtracking decreases the driven loss") {
  const SmoothLoss f = make_benchmark("rosenbrock");
  Vector x0(2);
  x0 << -1.2, 1.0;
  const IterateTrace t = run_newton(f, *StepsizeSchedule::backtracking(), x0);
  CHECK(t.termination == Termination::Converged);
  for (std::size_t k = 1; k < t.records.size(); ++k) CHECK(t.records[k].f <= t.records[k - 1].f + 1e-15);
  CHECK_THROWS_AS(StepsizeSchedule::backtracking(1.5), InputError);
}

TEST_CASE("Levenberg-Marquardt step and invariance residual") {
  const SmoothLoss f = make_benchmark("rosenbrock");
  Vector x(2);
  x << -0.5, 0.5;
  const Evaluation e = f.evaluate(x);
  const Vector step = lm_step(f, x, 0.1);
  CHECK(((e.hessian + 0.1 * Matrix::Identity(2, 2)) * step - e.gradient).norm() <= 1e-10);
  const ScalarTransform t = exponential_transform(1.0);
  const LmResidual r = lm_invariance_residual(f, t, x, 0.1);
  const SmoothLoss l = compose(f, t).as_loss();
  const double oracle_min = oracle::scan_minimum([&](double lam) {
    try {
      return (step - lm_step(l, x, lam)).norm();
    } catch (const PreconditionError&) {
      return HUGE_VAL;
    }
  });
  CHECK(r.residual > 1e-6);
  CHECK(std::abs(r.residual - oracle_min) <= 1e-8);

  // A linear transform only rescales; lambda_phi = a * lambda removes the residual.
  CHECK(lm_invariance_residual(f, linear_transform(3.0, 1.0), x, 0.1).residual <= 1e-8);

  CHECK_THROWS_AS(lm_invariance_residual(zoo::parse_loss("cauchy1d"), t, Vector::Constant(1, 0.5), 0.1),
                  PreconditionError);
  CHECK_THROWS_AS(lm_step(Matrix::Identity(2, 2), Vector::Ones(2), -1.0), PreconditionError);
}

TEST_CASE("forwarded schedule requires a nonsingular scaling factor") {
  const SmoothLoss q = make_quadratic(Matrix::Identity(1, 1));
  const SchedulePtr s = StepsizeSchedule::forwarded(StepsizeSchedule::constant(1.0), logarithmic_transform(0.5), q);
  const IterateTrace t = run_newton(compose(q, logarithmic_transform(0.5)).as_loss(), *s, Vector::Constant(1, 1.0));
  CHECK(t.termination == Termination::SingularScaling);
}
