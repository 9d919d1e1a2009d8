#include "tnewton/transforms.hpp"

#include "tnewton/errors.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace tnewton {

bool Interval::contains(double y) const {
  if (std::isnan(y)) return false;
  const bool above = lo_closed ? y >= lo : y > lo;
  const bool below = hi_closed ? y <= hi : y < hi;
  return above && below;
}

std::string Interval::to_string() const {
  std::ostringstream os;
  os << (lo_closed ? '[' : '(') << lo << ", " << hi << (hi_closed ? ']' : ')');
  return os.str();
}

ScalarTransform::ScalarTransform(std::string name, Fn phi, Fn phi_prime, Fn phi_double_prime,
                                 Interval valid)
    : name_(std::move(name)),
      phi_(std::move(phi)),
      phi_prime_(std::move(phi_prime)),
      phi_double_prime_(std::move(phi_double_prime)),
      valid_(valid) {}

void ScalarTransform::check(double y) const {
  if (!valid_.contains(y)) {
    std::ostringstream os;
    os << name_ << ": argument " << y << " outside " << valid_.to_string();
    throw DomainError(os.str());
  }
}

double ScalarTransform::phi(double y) const {
  check(y);
  return phi_(y);
}

double ScalarTransform::phi_prime(double y) const {
  check(y);
  return phi_prime_(y);
}

double ScalarTransform::phi_double_prime(double y) const {
  check(y);
  return phi_double_prime_(y);
}

double ScalarTransform::ratio(double y) const {
  check(y);
  return phi_double_prime_(y) / phi_prime_(y);
}

// ---------------------------------------------------------------------------

namespace {

std::string fmt_param(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

ScalarTransform linear_transform(double a, double b) {
  if (!(a > 0.0) || !std::isfinite(b)) throw InputError("linear transform requires a > 0");
  return ScalarTransform(
      "linear:a=" + fmt_param(a) + ":b=" + fmt_param(b), [a, b](double y) { return a * y + b; },
      [a](double) { return a; }, [](double) { return 0.0; }, Interval::real_line());
}

ScalarTransform polynomial_transform(double r) {
  if (r == 0.0 || !std::isfinite(r)) throw InputError("polynomial transform requires r != 0");
  return ScalarTransform(
      "poly:r=" + fmt_param(r), [r](double y) { return std::pow(y, r); },
      [r](double y) { return r * std::pow(y, r - 1); },
      [r](double y) { return r * (r - 1) * std::pow(y, r - 2); },
      Interval{0.0, Interval::real_line().hi, false, false});
}

ScalarTransform exponential_transform(double a) {
  if (a == 0.0 || !std::isfinite(a)) throw InputError("exponential transform requires a != 0");
  return ScalarTransform(
      "exp:a=" + fmt_param(a), [a](double y) { return std::exp(a * y); },
      [a](double y) { return a * std::exp(a * y); },
      [a](double y) { return a * a * std::exp(a * y); }, Interval::real_line());
}

ScalarTransform logarithmic_transform(double a) {
  if (!std::isfinite(a)) throw InputError("logarithmic transform requires finite a");
  return ScalarTransform(
      "log:a=" + fmt_param(a), [a](double y) { return std::log(a + y); },
      [a](double y) { return 1.0 / (a + y); },
      [a](double y) { return -1.0 / ((a + y) * (a + y)); },
      Interval{-a, Interval::real_line().hi, false, false});
}

ScalarTransform sigmoid_transform() {
  auto sigma = [](double y) { return 1.0 / (1.0 + std::exp(-y)); };
  return ScalarTransform(
      "sigmoid", sigma,
      [sigma](double y) {
        const double s = sigma(y);
        return s * (1 - s);
      },
      [sigma](double y) {
        const double s = sigma(y);
        return s * (1 - s) * (1 - 2 * s);
      },
      Interval::real_line());
}

ScalarTransform make_family(const FamilySpec& spec) {
  switch (spec.kind) {
    case FamilyKind::Linear: return linear_transform(spec.a, spec.b);
    case FamilyKind::Polynomial: return polynomial_transform(spec.r);
    case FamilyKind::Exponential: return exponential_transform(spec.a);
    case FamilyKind::Logarithmic: return logarithmic_transform(spec.a);
    case FamilyKind::Sigmoid: return sigmoid_transform();
  }
  throw InputError("unknown transform family");
}

// ---------------------------------------------------------------------------

TransformedLoss::TransformedLoss(SmoothLoss base, ScalarTransform transform)
    : base_(std::move(base)), transform_(std::move(transform)) {}

Evaluation TransformedLoss::evaluate(const Vector& x) const {
  Evaluation f = base_.evaluate(x);
  const double d1 = transform_.phi_prime(f.value);
  const double d2 = transform_.phi_double_prime(f.value);
  Evaluation out;
  out.value = transform_.phi(f.value);
  out.hessian = d1 * f.hessian + d2 * f.gradient * f.gradient.transpose();
  out.gradient = d1 * f.gradient;
  return out;
}

double TransformedLoss::value(const Vector& x) const { return transform_.phi(base_.value(x)); }

SmoothLoss TransformedLoss::as_loss() const {
  std::optional<double> min_value;
  if (base_.min_value() && transform_.valid_interval().contains(*base_.min_value())) {
    min_value = transform_.phi(*base_.min_value());
  }
  TransformedLoss self = *this;
  return SmoothLoss(
      base_.name() + "|" + transform_.name(), base_.dimension(),
      [self](const Vector& x) { return self.evaluate(x); }, base_.minimizer(), min_value,
      [self](const Vector& x) { return self.value(x); });
}

TransformedLoss compose(SmoothLoss base, ScalarTransform transform) {
  return TransformedLoss(std::move(base), std::move(transform));
}

double scaling_factor(const ScalarTransform& t, double f_val, double dual_sq) {
  return 1.0 + t.ratio(f_val) * dual_sq;
}

double induced_stepsize(double alpha_on_transformed, double scaling) {
  if (!(std::abs(scaling) > kSingularScaling)) {
    throw SingularScalingError("scaling factor " + fmt_param(scaling) + " is singular");
  }
  return alpha_on_transformed / scaling;
}

double forward_stepsize(double alpha_on_base, double scaling) { return alpha_on_base * scaling; }

}  // namespace tnewton
