#include "tnewton/quadrature.hpp"

#include "tnewton/errors.hpp"

#include <cmath>

namespace tnewton::quad {

namespace {

struct Panel {
  double a, m, b;
  double fa, fm, fb;
  double whole;
};

double checked(const std::function<double(double)>& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    throw EvaluationError("quadrature: non-finite integrand at t = " + std::to_string(x));
  }
  return y;
}

double recurse(const std::function<double(double)>& f, const Panel& p, double tol, int depth) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = checked(f, lm);
  const double frm = checked(f, rm);
  const double left = (p.m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
  const double right = (p.b - p.m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
  const double delta = left + right - p.whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return recurse(f, {p.a, lm, p.m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1) +
         recurse(f, {p.m, rm, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  if (b < a) return -adaptive_simpson(f, b, a, abs_tol, max_depth);

  // A few fixed initial panels keep symmetric integrands from fooling the
  // first error estimate.
  constexpr int kPanels = 4;
  const double h = (b - a) / kPanels;
  double total = 0.0;
  double left_x = a;
  double left_f = checked(f, a);
  for (int i = 0; i < kPanels; ++i) {
    const double right_x = (i + 1 == kPanels) ? b : a + (i + 1) * h;
    const double mid_x = 0.5 * (left_x + right_x);
    const double mid_f = checked(f, mid_x);
    const double right_f = checked(f, right_x);
    const double whole = (right_x - left_x) / 6.0 * (left_f + 4.0 * mid_f + right_f);
    total += recurse(f, {left_x, mid_x, right_x, left_f, mid_f, right_f, whole},
                     abs_tol / kPanels, max_depth);
    left_x = right_x;
    left_f = right_f;
  }
  return total;
}

}  // namespace tnewton::quad
