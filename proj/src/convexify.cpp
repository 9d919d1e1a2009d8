#include "tnewton/convexify.hpp"

#include "tnewton/errors.hpp"
#include "tnewton/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>

namespace tnewton::convexify {

PseudoconvexReport check_pseudoconvex(const SmoothLoss& loss, const Box& box, int n_samples,
                                      int n_tangents, std::uint64_t seed) {
  if (n_samples < 1 || n_tangents < 1) {
    throw InputError("check_pseudoconvex: sample counts must be >= 1");
  }
  const int d = loss.dimension();
  if (box.lo.size() != d || box.hi.size() != d) {
    throw InputError("check_pseudoconvex: box dimension mismatch");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  struct Sample {
    Vector x;
    double f;
    double grad_norm;
  };
  std::vector<Sample> stationary;
  double f_min = std::numeric_limits<double>::infinity();

  PseudoconvexReport report;
  for (int s = 0; s < n_samples; ++s) {
    Vector x(d);
    for (int i = 0; i < d; ++i) x(i) = box.lo(i) + unit(rng) * (box.hi(i) - box.lo(i));
    Evaluation e;
    try {
      e = loss.evaluate(x);
    } catch (const EvaluationError&) {
      continue;
    } catch (const DomainError&) {
      continue;
    }
    ++report.points_checked;
    f_min = std::min(f_min, e.value);

    const double gnorm = e.gradient.norm();
    const double hnorm = e.hessian.norm();
    if (gnorm < 1e-8) stationary.push_back({x, e.value, gnorm});

    for (int t = 0; t < n_tangents; ++t) {
      Vector v(d);
      for (int i = 0; i < d; ++i) v(i) = normal(rng);
      if (gnorm > 0.0) v -= (v.dot(e.gradient) / (gnorm * gnorm)) * e.gradient;
      const double vnorm = v.norm();
      // In 1D (or when v happened to be parallel to g) the tangent space is {0}.
      if (vnorm < 1e-12) continue;
      v /= vnorm;
      if (gnorm > 0.0 && std::abs(v.dot(e.gradient)) > 1e-12 * gnorm) continue;
      const double curv = v.dot(e.hessian * v);
      if (curv < -1e-8 * hnorm) {
        report.violations.push_back({PseudoconvexViolation::Kind::TangentCurvature, x, curv});
      }
    }
  }
  for (const auto& s : stationary) {
    if (s.f - f_min > 1e-6) {
      report.violations.push_back(
          {PseudoconvexViolation::Kind::StationaryNotMinimal, s.x, s.f - f_min});
    }
  }
  return report;
}

Matrix bordered_hessian(const Vector& gradient, const Matrix& hessian) {
  const auto d = gradient.size();
  if (hessian.rows() != d || hessian.cols() != d) {
    throw InputError("bordered_hessian: dimension mismatch");
  }
  Matrix b = Matrix::Zero(d + 1, d + 1);
  b.block(0, 1, 1, d) = gradient.transpose();
  b.block(1, 0, d, 1) = gradient;
  b.block(1, 1, d, d) = hessian;
  return b;
}

double schaible_r(const Vector& gradient, const Matrix& hessian, RMode mode) {
  const auto d = gradient.size();
  if (d > linalg::kMaxMinorDimension) {
    throw CapabilityError("schaible_r: dimension exceeds " +
                          std::to_string(linalg::kMaxMinorDimension));
  }
  const Matrix h = linalg::symmetrized(hessian);

  if (mode == RMode::Strict) {
    if (linalg::lu_determinant(h) >= 0.0) return 0.0;
    const double ghg = gradient.dot(h * gradient);
    if (ghg == 0.0) {
      throw PreconditionError("schaible_r: g^T H g vanishes with det H < 0");
    }
    return std::max(0.0, -1.0 / ghg);
  }

  const Matrix b = bordered_hessian(gradient, h);
  double r = 0.0;
  for (const auto& minor : linalg::principal_minors(h)) {
    const auto k = static_cast<Eigen::Index>(minor.indices.size());
    Matrix sub(k + 1, k + 1);
    std::vector<Eigen::Index> rows{0};
    for (int i : minor.indices) rows.push_back(i + 1);
    for (Eigen::Index i = 0; i <= k; ++i) {
      for (Eigen::Index j = 0; j <= k; ++j) sub(i, j) = b(rows[i], rows[j]);
    }
    const double bordered = linalg::lu_determinant(sub);
    if (bordered < 0.0) r = std::max(r, minor.determinant / bordered);
  }
  return r;
}

double schaible_r(const SmoothLoss& loss, const Vector& x, RMode mode) {
  const Evaluation e = loss.evaluate(x);
  return schaible_r(e.gradient, e.hessian, mode);
}

double compact_constant(const SmoothLoss& loss, const Vector& x0, const std::vector<Vector>& grid,
                        RMode mode) {
  if (grid.empty()) throw InputError("compact_constant: empty grid");
  const double level = loss.value(x0);
  double c = 0.0;
  int used = 0;
  // x0 sits on the boundary of its own sublevel set, where r is often largest.
  std::vector<Vector> points;
  points.reserve(grid.size() + 1);
  points.push_back(x0);
  points.insert(points.end(), grid.begin(), grid.end());
  for (const auto& x : points) {
    Evaluation e;
    try {
      e = loss.evaluate(x);
    } catch (const EvaluationError&) {
      continue;
    } catch (const DomainError&) {
      continue;
    }
    if (!(e.value <= level)) continue;
    ++used;
    try {
      c = std::max(c, schaible_r(e.gradient, e.hessian, mode));
    } catch (const PreconditionError&) {
      c = std::numeric_limits<double>::infinity();
    }
  }
  if (used <= 1) throw InputError("compact_constant: no grid point lies in the sublevel set");
  return c;
}

ScalarTransform exp_convexifier(double c, double f_star) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw InputError("exp_convexifier: c must be >= 0");
  if (!std::isfinite(f_star)) throw InputError("exp_convexifier: f* must be finite");
  const Interval valid{f_star, std::numeric_limits<double>::infinity(), true, false};
  if (c == 0.0) {
    return ScalarTransform(
        "expconv:c=0", [f_star](double y) { return y - f_star; }, [](double) { return 1.0; },
        [](double) { return 0.0; }, valid);
  }
  return ScalarTransform(
      "expconv:c=" + std::to_string(c),
      [c, f_star](double y) { return std::expm1(c * (y - f_star)) / c; },
      [c, f_star](double y) { return std::exp(c * (y - f_star)); },
      [c, f_star](double y) { return c * std::exp(c * (y - f_star)); }, valid);
}

namespace {

// Cumulative tables for the nested integral, built once.
struct NestedTable {
  std::function<double(double)> h;
  double lo = 0.0;
  double width = 0.0;
  std::vector<double> inner;  // int_{lo}^{node} h
  std::vector<double> outer;  // int_{lo}^{node} exp(inner)
  double panel_tol = 0.0;

  std::size_t panel(double y) const {
    const auto n = inner.size() - 1;
    auto i = static_cast<std::size_t>(std::floor((y - lo) / width));
    return std::min(i, n - 1);
  }
  double node(std::size_t i) const { return lo + static_cast<double>(i) * width; }

  double log_derivative(double y) const {
    const std::size_t i = panel(y);
    return inner[i] + quad::adaptive_simpson(h, node(i), y, panel_tol);
  }
  double value(double y) const {
    const std::size_t i = panel(y);
    auto integrand = [this](double s) { return std::exp(log_derivative(s)); };
    return outer[i] + quad::adaptive_simpson(integrand, node(i), y, panel_tol);
  }
};

}  // namespace

ScalarTransform nested_bound_convexifier(std::function<double(double)> h, double f_star,
                                         double y_max) {
  if (!h) throw InputError("nested_bound_convexifier: missing h");
  if (!(y_max > f_star) || !std::isfinite(y_max) || !std::isfinite(f_star)) {
    throw InputError("nested_bound_convexifier: need finite f* < y_max");
  }
  constexpr std::size_t kPanels = 64;
  auto table = std::make_shared<NestedTable>();
  table->h = std::move(h);
  table->lo = f_star;
  table->width = (y_max - f_star) / kPanels;
  table->panel_tol = quad::kDefaultAbsTol / kPanels;
  table->inner.assign(kPanels + 1, 0.0);
  table->outer.assign(kPanels + 1, 0.0);
  for (std::size_t i = 0; i < kPanels; ++i) {
    const double a = table->node(i);
    const double b = table->node(i + 1);
    table->inner[i + 1] = table->inner[i] + quad::adaptive_simpson(table->h, a, b, table->panel_tol);
  }
  for (std::size_t i = 0; i < kPanels; ++i) {
    const double a = table->node(i);
    const double b = table->node(i + 1);
    const double base = table->inner[i];
    auto integrand = [&table, base, a](double s) {
      return std::exp(base + quad::adaptive_simpson(table->h, a, s, table->panel_tol));
    };
    table->outer[i + 1] = table->outer[i] + quad::adaptive_simpson(integrand, a, b, table->panel_tol);
  }

  const Interval valid{f_star, y_max, true, true};
  std::shared_ptr<const NestedTable> t = table;
  return ScalarTransform(
      "nested", [t](double y) { return t->value(y); },
      [t](double y) { return std::exp(t->log_derivative(y)); },
      [t](double y) { return t->h(y) * std::exp(t->log_derivative(y)); }, valid);
}

ConvexityCheck verify_convexified(const SmoothLoss& loss, const ScalarTransform& t,
                                  const std::vector<Vector>& grid) {
  const TransformedLoss composed = compose(loss, t);
  ConvexityCheck out;
  out.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& x : grid) {
    Evaluation e;
    try {
      e = composed.evaluate(x);
    } catch (const EvaluationError&) {
      ++out.skipped;
      continue;
    } catch (const DomainError&) {
      ++out.skipped;
      continue;
    }
    if (!e.hessian.allFinite()) {
      ++out.skipped;
      continue;
    }
    ++out.evaluated;
    out.min_eigenvalue = std::min(out.min_eigenvalue, linalg::min_eigenvalue(e.hessian));
    out.max_hessian_norm = std::max(out.max_hessian_norm, e.hessian.norm());
  }
  out.passes = out.evaluated > 0 && out.min_eigenvalue >= -1e-8 * (1.0 + out.max_hessian_norm);
  return out;
}

std::vector<double> arange(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw InputError("arange: need lo <= hi and step > 0");
  }
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + static_cast<double>(i) * step;
  return out;
}

std::vector<Vector> box_grid(double lo, double hi, double step, int dimension) {
  const auto axis = arange(lo, hi, step);
  std::vector<Vector> out;
  if (dimension == 1) {
    for (double v : axis) out.push_back(Vector::Constant(1, v));
  } else if (dimension == 2) {
    for (double y : axis) {
      for (double x : axis) {
        Vector p(2);
        p << x, y;
        out.push_back(p);
      }
    }
  } else {
    throw CapabilityError("box_grid supports dimensions 1 and 2");
  }
  return out;
}

std::vector<ReportRow> convexify_report(const SmoothLoss& loss, const std::vector<Vector>& grid,
                                        double c, RMode mode) {
  std::vector<ReportRow> rows;
  for (const auto& x : grid) {
    Evaluation e;
    try {
      e = loss.evaluate(x);
    } catch (const EvaluationError&) {
      continue;
    } catch (const DomainError&) {
      continue;
    }
    ReportRow row;
    row.x = x;
    row.f = e.value;
    try {
      row.r = schaible_r(e.gradient, e.hessian, mode);
    } catch (const PreconditionError&) {
      row.r = std::numeric_limits<double>::infinity();
    }
    row.min_eig_before = linalg::min_eigenvalue(e.hessian);
    row.min_eig_after =
        linalg::min_eigenvalue(e.hessian + c * e.gradient * e.gradient.transpose());
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace tnewton::convexify
