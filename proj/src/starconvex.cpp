#include "tnewton/starconvex.hpp"

#include "tnewton/errors.hpp"
#include "tnewton/quadrature.hpp"
#include "tnewton/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace tnewton::star {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInverseQuadTol = 1e-13;
// Below this f-value the two terms of phi'' cancel catastrophically; phi'' is
// held at its value here.
constexpr double kSmallC = 1e-5;

}  // namespace

double star_value(const SmoothLoss& base, const Vector& x, double quad_tol) {
  if (!base.minimizer()) throw InputError("star_value: base loss has no known minimizer");
  const Vector& xstar = *base.minimizer();
  const double fstar = base.min_value() ? *base.min_value() : base.value(xstar);
  const Vector u = x - xstar;
  if (u.squaredNorm() == 0.0) return fstar;

  const Evaluation at_min = base.evaluate(xstar);
  const double head = kRaySplit * u.dot(at_min.hessian * u);
  auto integrand = [&base, &xstar, &u](double t) {
    return base.evaluate(xstar + t * u).gradient.dot(u) / t;
  };
  const double tail = quad::adaptive_simpson(integrand, kRaySplit, 1.0, quad_tol);
  const double g = fstar + head + tail;
  if (!std::isfinite(g)) throw EvaluationError("star_value: non-finite result");
  return g;
}

double closed_form_inner(RadialKind kind, double r) {
  switch (kind) {
    case RadialKind::GemanMcClure: return r / (r * r + 1) + std::atan(r);
    case RadialKind::Welsh: return std::sqrt(std::numbers::pi) * tnewton::erf(r);
    case RadialKind::Cauchy: return 2 * std::atan(r);
  }
  throw InputError("closed_form_inner: unknown radial kind");
}

double closed_form_profile(RadialKind kind, double r) { return r * closed_form_inner(kind, r); }

ScalarTransform star_transform(const RadialLoss& radial) {
  const double limit0 = std::sqrt(2.0 * radial.psi_double_prime(0.0));

  // int_0^c dv / psi^{-1}(v), substituted v = u^2.
  auto integral = [radial, limit0](double c) {
    if (c == 0.0) return 0.0;
    auto integrand = [&radial, limit0](double u) {
      if (u == 0.0) return limit0;
      return 2.0 * u / radial.inverse_unchecked(u * u);
    };
    return quad::adaptive_simpson(integrand, 0.0, std::sqrt(c), kInverseQuadTol);
  };

  auto phi = [radial, integral](double c) {
    if (c == 0.0) return 0.0;
    return radial.inverse_unchecked(c) * integral(c);
  };
  // (psi^{-1})'(c) = 1 / psi'(s) with s = psi^{-1}(c).
  auto phi_prime = [radial, integral](double c) {
    if (c == 0.0) return 2.0;
    const double s = radial.inverse_unchecked(c);
    return 1.0 + integral(c) / radial.psi_prime(s);
  };
  // (psi^{-1})''(c) = -psi''(s) / psi'(s)^3.
  auto raw_second = [radial, integral](double c) {
    const double s = radial.inverse_unchecked(c);
    const double d1 = radial.psi_prime(s);
    const double d2 = radial.psi_double_prime(s);
    return -d2 / (d1 * d1 * d1) * integral(c) + 1.0 / (d1 * s);
  };
  auto phi_double_prime = [raw_second](double c) { return raw_second(c < kSmallC ? kSmallC : c); };

  const Interval valid{0.0, radial.inverse_upper, true, false};
  return ScalarTransform("star:" + radial.name(), phi, phi_prime, phi_double_prime, valid);
}

RadialStar radial_star_loss(const RadialLoss& radial) {
  const RadialKind kind = radial.kind;
  const double curvature0 = 2.0 * radial.psi_double_prime(0.0);
  const int d = static_cast<int>(radial.center.size());

  auto eval = [radial, kind, curvature0](const Vector& x) {
    const Vector u = x - radial.center;
    const double r = u.norm();
    const auto n = u.size();
    Evaluation e;
    if (r == 0.0) {
      e.value = 0.0;
      e.gradient = Vector::Zero(n);
      e.hessian = curvature0 * Matrix::Identity(n, n);
      return e;
    }
    const double inner = closed_form_inner(kind, r);
    const double d1 = inner + radial.psi_prime(r);
    const double d2 = radial.psi_double_prime(r) + radial.psi_prime(r) / r;
    const Vector dir = u / r;
    const Matrix proj = dir * dir.transpose();
    e.value = r * inner;
    e.gradient = d1 * dir;
    e.hessian = d2 * proj + (d1 / r) * (Matrix::Identity(n, n) - proj);
    return e;
  };
  SmoothLoss loss("star_" + radial.name() + (d == 1 ? "1d" : ""), d, eval, radial.center, 0.0);
  return {std::move(loss), star_transform(radial)};
}

bool convexity_neighborhood(const RadialLoss& radial, double radius, double grid_step) {
  if (!(radius > 0.0)) throw InputError("convexity_neighborhood: M must be positive");
  if (!(grid_step > 0.0)) throw InputError("convexity_neighborhood: grid step must be positive");
  constexpr double kSlack = -1e-10;
  if (2.0 * radial.psi_double_prime(0.0) < kSlack) return false;
  const auto n = static_cast<long>(std::floor(radius / grid_step + 1e-9));
  for (long i = 1; i <= n; ++i) {
    const double r = static_cast<double>(i) * grid_step;
    if (radial.psi_double_prime(r) + radial.psi_prime(r) / r < kSlack) return false;
  }
  return true;
}

namespace {

bool unit_newton_converges(const SmoothLoss& loss, double offset, const NewtonConfig& cfg) {
  static const SchedulePtr unit = StepsizeSchedule::constant(1.0);
  const double xstar = (*loss.minimizer())(0);
  const IterateTrace trace = run_newton(loss, *unit, Vector::Constant(1, xstar + offset), cfg);
  return trace.termination == Termination::Converged &&
         std::abs(trace.last_x()(0) - xstar) <= 1e-6;
}

}  // namespace

RadiusResult convergence_radius(const SmoothLoss& loss_1d, double bracket_hi,
                                const NewtonConfig& cfg) {
  if (loss_1d.dimension() != 1 || !loss_1d.minimizer()) {
    throw InputError("convergence_radius: needs a 1D loss with a known minimizer");
  }
  if (!(bracket_hi > 0.0)) throw InputError("convergence_radius: bracket must be positive");

  RadiusResult out;
  double lo = 0.0;
  double hi = bracket_hi;
  if (unit_newton_converges(loss_1d, bracket_hi, cfg)) {
    lo = bracket_hi;
    bool all = true;
    for (double factor : {10.0, 100.0, 1000.0}) {
      if (unit_newton_converges(loss_1d, bracket_hi * factor, cfg)) {
        lo = bracket_hi * factor;
      } else {
        hi = bracket_hi * factor;
        all = false;
        break;
      }
    }
    if (all) {
      out.radius = kInf;
      return out;
    }
  } else if (!unit_newton_converges(loss_1d, bracket_hi * 1e-6, cfg)) {
    throw EvaluationError("convergence_radius: Newton fails even next to the minimizer");
  }

  for (int i = 0; i < 50; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (unit_newton_converges(loss_1d, mid, cfg)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.radius = 0.5 * (lo + hi);

  // The bisection assumes a monotone predicate; check both sides.
  for (int i = 1; i <= 20; ++i) {
    const double below = out.radius * i / 21.0;
    const double above = out.radius * (1.0 + i / 21.0);
    if (!unit_newton_converges(loss_1d, below, cfg) || unit_newton_converges(loss_1d, above, cfg)) {
      out.monotone = false;
      break;
    }
  }
  return out;
}

double positive_curvature_radius(const std::function<double(double)>& second_derivative,
                                 double bracket_hi, double grid_step) {
  double prev = 0.0;
  for (double r = grid_step; r <= bracket_hi; r += grid_step) {
    if (second_derivative(r) <= 0.0) {
      double lo = prev;
      double hi = r;
      for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (second_derivative(mid) > 0.0 ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev = r;
  }
  return kInf;
}

}  // namespace tnewton::star
