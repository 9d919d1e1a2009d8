#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tnewton/convexify.hpp"
#include "tnewton/errors.hpp"
#include "tnewton/zoo.hpp"

#include <cmath>

using namespace tnewton;
using namespace tnewton::convexify;

TEST_CASE("bordered Hessian layout") {
  Vector g(2);
  g << 1.0, 2.0;
  Matrix h(2, 2);
  h << 3, 4, 4, 5;
  const Matrix b = bordered_hessian(g, h);
  CHECK(b(0, 0) == 0.0);
  CHECK(b(0, 2) == 2.0);
  CHECK(b(2, 0) == 2.0);
  CHECK(b(1, 2) == 4.0);
}

TEST_CASE("Schaible coefficient in one dimension is max(0, -f''/f'^2)") {
  Vector g(1);
  Matrix h(1, 1);
  for (double x : {0.5, 1.5, 2.0, 3.0}) {
    g << 2 * x / (1 + x * x);
    h << 2 * (1 - x * x) / ((1 + x * x) * (1 + x * x));
    const double expected = std::max(0.0, -h(0, 0) / (g(0) * g(0)));
    CHECK(schaible_r(g, h, RMode::General) == doctest::Approx(expected));
  }
}

TEST_CASE("r(x) makes H + r g g^T positive semidefinite on the tangent-safe side") {
  const SmoothLoss f = zoo::parse_loss("cauchy1d");
  for (double x : {1.2, 1.7, 2.0}) {
    const Evaluation e = f.evaluate(Vector::Constant(1, x));
    const double r = schaible_r(e.gradient, e.hessian, RMode::General);
    const Matrix m = e.hessian + r * e.gradient * e.gradient.transpose();
    CHECK(linalg::min_eigenvalue(m) >= -1e-12);
  }
  // Strict mode on the 1D quadratic: det H > 0 gives 0.
  CHECK(schaible_r(make_quadratic(Matrix::Identity(1, 1)), Vector::Constant(1, 1.0), RMode::Strict) == 0.0);
}

TEST_CASE("strict mode needs g^T H g != 0") {
  Vector g(2);
  g << 1.0, 1.0;
  Matrix h(2, 2);
  h << 1, 0, 0, -1;
  CHECK_THROWS_AS(schaible_r(g, h, RMode::Strict), PreconditionError);
}

TEST_CASE("compact constant convexifies the Cauchy loss on its sublevel set") {
  const SmoothLoss f = zoo::parse_loss("cauchy1d");
  const auto grid = box_grid(-2.0, 2.0, 1e-3, 1);
  const double c = compact_constant(f, Vector::Constant(1, 2.0), grid);
  CHECK(c == doctest::Approx(3.0 / 8.0));
  const ConvexityCheck check = verify_convexified(f, exp_convexifier(c, 0.0), grid);
  CHECK(check.passes);
  CHECK(check.min_eigenvalue >= -1e-8);
  CHECK_FALSE(verify_convexified(f, exp_convexifier(0.2, 0.0), grid).passes);
  CHECK_THROWS_AS(compact_constant(f, Vector::Constant(1, 2.0), box_grid(3.0, 4.0, 0.1, 1)), InputError);
}

TEST_CASE("pseudoconvexity checker") {
  const PseudoconvexReport good =
      check_pseudoconvex(zoo::parse_loss("cauchy1d"), {Vector::Constant(1, -3), Vector::Constant(1, 3)}, 200, 4, 1);
  CHECK(good.ok());
  CHECK(good.points_checked > 0);
  const PseudoconvexReport bad = check_pseudoconvex(make_saddle(), {Vector::Constant(2, -1), Vector::Constant(2, 1)},
                                                    200, 4, 1);
  CHECK_FALSE(bad.ok());
}

TEST_CASE("counterexample resists every standard transform") {
  const SmoothLoss f = make_counterexample();
  auto grid = box_grid(-0.5, 1.5, 1e-3, 1);
  for (const char* spec : {"linear:a=2:b=1", "poly:r=3", "poly:r=0.5", "exp:a=0.5", "exp:a=1", "log:a=1", "sigmoid"}) {
    CAPTURE(spec);
    const ConvexityCheck check = verify_convexified(f, *zoo::parse_transform(spec), grid);
    CHECK_FALSE(check.passes);
    CHECK(check.min_eigenvalue < -1e-4);
  }
  // A steep exponential still has negative curvature, but its Hessian norm
  // (around 1e18 here) swamps the relative pass threshold.
  const ConvexityCheck steep = verify_convexified(f, *zoo::parse_transform("exp:a=5"), grid);
  CHECK(steep.min_eigenvalue < -1e-4);
}

TEST_CASE("convexification report rows") {
  const auto rows = convexify_report(zoo::parse_loss("cauchy1d"), box_grid(-2.0, 2.0, 0.5, 1), 0.375);
  CHECK(rows.size() == 9);
  for (const auto& r : rows) CHECK(r.min_eig_after >= -1e-12);
}

TEST_CASE("grids") {
  CHECK(arange(0.0, 1.0, 0.25).size() == 5);
  CHECK(box_grid(0.0, 1.0, 0.5, 2).size() == 9);
  CHECK_THROWS_AS(arange(1.0, 0.0, 0.1), InputError);
  CHECK_THROWS_AS(box_grid(0.0, 1.0, 0.5, 3), CapabilityError);
}
