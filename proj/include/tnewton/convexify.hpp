#pragma once

#include "tnewton/linalg.hpp"
#include "tnewton/losses.hpp"
#include "tnewton/transforms.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace tnewton::convexify {

/// Axis-aligned sampling box.
struct Box {
  Vector lo;
  Vector hi;
};

struct PseudoconvexViolation {
  enum class Kind { TangentCurvature, StationaryNotMinimal };
  Kind kind = Kind::TangentCurvature;
  Vector x;
  double amount = 0.0;  ///< v^T H v for curvature, f - f_min for stationarity
};

struct PseudoconvexReport {
  std::vector<PseudoconvexViolation> violations;
  int points_checked = 0;
  bool ok() const { return violations.empty(); }
};

/// Samples `n_samples` points uniformly in `box` and tests, at each, the
/// tangent-curvature condition v^T grad f = 0 => v^T H v >= -1e-8 ||H|| on
/// `n_tangents` random tangent directions, plus the stationarity condition
/// (||grad f|| < 1e-8 must mean f within 1e-6 of the smallest sampled value).
PseudoconvexReport check_pseudoconvex(const SmoothLoss& loss, const Box& box, int n_samples,
                                      int n_tangents, std::uint64_t seed = 0);

/// (d+1)x(d+1) matrix [[0, g^T], [g, H]].
Matrix bordered_hessian(const Vector& gradient, const Matrix& hessian);

enum class RMode { Strict, General };

/// Pointwise convexifier coefficient r(x).
///   strict:  max{0, -1/(g^T H g)} when det H < 0, else 0
///   general: max{0, M_I / D_I : D_I < 0} over all nonempty index sets I, with
///            D_I the bordered minor on rows {0} u I and M_I the Hessian minor.
/// d > 8 throws CapabilityError.
double schaible_r(const Vector& gradient, const Matrix& hessian, RMode mode);
double schaible_r(const SmoothLoss& loss, const Vector& x, RMode mode);

/// c = max of schaible_r over x0 and the grid points inside the sublevel set
/// {x : f(x) <= f(x0)}, clamped at 0. Points where the loss cannot be
/// evaluated are skipped. Throws InputError if no grid point qualifies.
double compact_constant(const SmoothLoss& loss, const Vector& x0, const std::vector<Vector>& grid,
                        RMode mode = RMode::General);

/// phi(y) = (exp(c (y - f*)) - 1) / c on [f*, inf); c = 0 gives y - f*.
ScalarTransform exp_convexifier(double c, double f_star);

/// phi'(y) = exp(int_{f*}^y h), phi(y) = int_{f*}^y phi', phi'' = h phi' on
/// [f*, y_max], by adaptive Simpson over a cached cumulative table.
ScalarTransform nested_bound_convexifier(std::function<double(double)> h, double f_star,
                                         double y_max);

struct ConvexityCheck {
  double min_eigenvalue = 0.0;   ///< over grid points that evaluated
  double max_hessian_norm = 0.0;
  int evaluated = 0;
  int skipped = 0;               ///< domain/evaluation errors
  bool passes = false;           ///< min >= -1e-8 (1 + max ||hess L||)
};

/// Minimum eigenvalue of hess(phi o f) over the grid.
ConvexityCheck verify_convexified(const SmoothLoss& loss, const ScalarTransform& t,
                                  const std::vector<Vector>& grid);

/// Evenly spaced 1D points lo, lo+step, ... up to hi (inclusive within 1e-9 step).
std::vector<double> arange(double lo, double hi, double step);

/// Cartesian product grid for d = 1 or 2 with a shared axis spec.
std::vector<Vector> box_grid(double lo, double hi, double step, int dimension);

struct ReportRow {
  Vector x;
  double f = 0.0;
  double r = 0.0;
  double min_eig_before = 0.0;
  double min_eig_after = 0.0;
};

/// Per-point data behind the `convexify` CLI subcommand: r(x), min eigenvalue
/// of hess f and of hess f + c grad f grad f^T. Unevaluable points are dropped.
std::vector<ReportRow> convexify_report(const SmoothLoss& loss, const std::vector<Vector>& grid,
                                        double c, RMode mode = RMode::General);

}  // namespace tnewton::convexify
