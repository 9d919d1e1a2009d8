#pragma once

#include "tnewton/losses.hpp"

#include <functional>
#include <limits>
#include <string>
#include <string_view>

namespace tnewton {

/// Interval of R with independently open/closed ends.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_closed = false;
  bool hi_closed = false;

  bool contains(double y) const;
  std::string to_string() const;

  static Interval real_line() { return {}; }
};

/// Monotone scalar map phi with first and second derivatives, restricted to a
/// validity interval. Every accessor checks membership and throws DomainError
/// outside it.
class ScalarTransform {
 public:
  using Fn = std::function<double(double)>;

  ScalarTransform(std::string name, Fn phi, Fn phi_prime, Fn phi_double_prime, Interval valid);

  double phi(double y) const;
  double phi_prime(double y) const;
  double phi_double_prime(double y) const;
  /// phi''(y) / phi'(y).
  double ratio(double y) const;

  const Interval& valid_interval() const { return valid_; }
  const std::string& name() const { return name_; }

 private:
  void check(double y) const;

  std::string name_;
  Fn phi_;
  Fn phi_prime_;
  Fn phi_double_prime_;
  Interval valid_;
};

// Standard monotone families.
ScalarTransform linear_transform(double a, double b);  ///< a*y + b, a > 0
ScalarTransform polynomial_transform(double r);        ///< y^r on y > 0, r != 0
ScalarTransform exponential_transform(double a);       ///< exp(a*y), a != 0
ScalarTransform logarithmic_transform(double a);       ///< log(a + y) on y > -a
ScalarTransform sigmoid_transform();                   ///< 1 / (1 + exp(-y))

enum class FamilyKind { Linear, Polynomial, Exponential, Logarithmic, Sigmoid };

struct FamilySpec {
  FamilyKind kind = FamilyKind::Linear;
  double a = 1.0;  ///< linear slope, exponential rate, logarithmic shift
  double b = 0.0;  ///< linear offset
  double r = 1.0;  ///< polynomial exponent
};

ScalarTransform make_family(const FamilySpec& spec);

/// L = phi o f with the chain rule
///   grad L = phi'(f) grad f,   hess L = phi'(f) hess f + phi''(f) grad f grad f^T.
class TransformedLoss {
 public:
  TransformedLoss(SmoothLoss base, ScalarTransform transform);

  Evaluation evaluate(const Vector& x) const;
  double value(const Vector& x) const;

  const SmoothLoss& base() const { return base_; }
  const ScalarTransform& transform() const { return transform_; }

  /// Type-erased view usable anywhere a SmoothLoss is expected. Keeps the
  /// base minimizer; min_value becomes phi(f*) when that is in the domain.
  SmoothLoss as_loss() const;

 private:
  SmoothLoss base_;
  ScalarTransform transform_;
};

TransformedLoss compose(SmoothLoss base, ScalarTransform transform);

/// |scaling| at or below this is treated as singular.
inline constexpr double kSingularScaling = 1e-12;

/// 1 + (phi''(f)/phi'(f)) * dual_sq. May be zero or negative.
double scaling_factor(const ScalarTransform& t, double f_val, double dual_sq);

/// Stepsize on f that reproduces a stepsize on L: alpha_L / scaling.
/// Throws SingularScalingError when |scaling| <= 1e-12.
double induced_stepsize(double alpha_on_transformed, double scaling);

/// Stepsize on L that reproduces a stepsize on f: alpha_f * scaling.
double forward_stepsize(double alpha_on_base, double scaling);

}  // namespace tnewton
