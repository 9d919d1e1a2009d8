#include "tnewton/losses.hpp"

#include "tnewton/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <random>
#include <utility>

namespace tnewton {

SmoothLoss::SmoothLoss(std::string name, int dimension, Evaluator evaluator,
                       std::optional<Vector> minimizer, std::optional<double> min_value,
                       ValueFn value_only)
    : name_(std::move(name)),
      dimension_(dimension),
      evaluator_(std::move(evaluator)),
      minimizer_(std::move(minimizer)),
      min_value_(min_value),
      value_only_(std::move(value_only)) {
  if (dimension_ < 1) throw InputError("loss dimension must be >= 1");
  if (!evaluator_) throw InputError("loss needs an evaluator");
  if (minimizer_ && minimizer_->size() != dimension_) {
    throw InputError("minimizer dimension does not match loss dimension");
  }
}

void SmoothLoss::check_point(const Vector& x) const {
  if (x.size() != dimension_) {
    throw InputError(name_ + ": expected a point of dimension " + std::to_string(dimension_) +
                     ", got " + std::to_string(x.size()));
  }
  if (!x.allFinite()) throw InputError(name_ + ": non-finite point");
}

Evaluation SmoothLoss::evaluate(const Vector& x) const {
  check_point(x);
  return evaluator_(x);
}

double SmoothLoss::value(const Vector& x) const {
  check_point(x);
  if (value_only_) return value_only_(x);
  return evaluator_(x).value;
}

// ---------------------------------------------------------------------------
// Benchmarks

namespace {

Evaluation rosenbrock(const Vector& p) {
  const double x = p(0), y = p(1);
  const double r = y - x * x;
  Evaluation e;
  e.value = (1 - x) * (1 - x) + 100 * r * r;
  e.gradient.resize(2);
  e.gradient << -2 * (1 - x) - 400 * x * r, 200 * r;
  e.hessian.resize(2, 2);
  e.hessian << 2 - 400 * r + 800 * x * x, -400 * x, -400 * x, 200;
  return e;
}

Evaluation beale(const Vector& p) {
  const double x = p(0), y = p(1);
  constexpr double c[3] = {1.5, 2.25, 2.625};
  Evaluation e;
  e.value = 0.0;
  e.gradient = Vector::Zero(2);
  e.hessian = Matrix::Zero(2, 2);
  for (int i = 1; i <= 3; ++i) {
    const double yi = std::pow(y, i);
    const double yi1 = std::pow(y, i - 1);
    const double t = c[i - 1] - x + x * yi;
    Eigen::Vector2d dt(yi - 1.0, i * x * yi1);
    Eigen::Matrix2d ddt;
    const double dxy = i * yi1;
    const double dyy = i >= 2 ? i * (i - 1) * x * std::pow(y, i - 2) : 0.0;
    ddt << 0.0, dxy, dxy, dyy;
    e.value += t * t;
    e.gradient += 2 * t * dt;
    e.hessian += 2 * (dt * dt.transpose() + t * ddt);
  }
  return e;
}

Evaluation goldstein_price(const Vector& p) {
  const double x = p(0), y = p(1);

  const double u = x + y + 1;
  const double pp = 19 - 14 * x + 3 * x * x - 14 * y + 6 * x * y + 3 * y * y;
  const Eigen::Vector2d du(1, 1);
  const double dpc = -14 + 6 * x + 6 * y;
  const Eigen::Vector2d dp(dpc, dpc);
  Eigen::Matrix2d ddp;
  ddp << 6, 6, 6, 6;
  const double a = 1 + u * u * pp;
  const Eigen::Vector2d da = 2 * u * pp * du + u * u * dp;
  const Eigen::Matrix2d dda = 2 * pp * du * du.transpose() +
                              2 * u * (du * dp.transpose() + dp * du.transpose()) + u * u * ddp;

  const double v = 2 * x - 3 * y;
  const double q = 18 - 32 * x + 12 * x * x + 48 * y - 36 * x * y + 27 * y * y;
  const Eigen::Vector2d dv(2, -3);
  const Eigen::Vector2d dq(-32 + 24 * x - 36 * y, 48 - 36 * x + 54 * y);
  Eigen::Matrix2d ddq;
  ddq << 24, -36, -36, 54;
  const double b = 30 + v * v * q;
  const Eigen::Vector2d db = 2 * v * q * dv + v * v * dq;
  const Eigen::Matrix2d ddb = 2 * q * dv * dv.transpose() +
                              2 * v * (dv * dq.transpose() + dq * dv.transpose()) + v * v * ddq;

  Evaluation e;
  e.value = a * b;
  e.gradient = da * b + a * db;
  e.hessian = dda * b + da * db.transpose() + db * da.transpose() + a * ddb;
  return e;
}

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

}  // namespace

Benchmark parse_benchmark(std::string_view name) {
  if (name == "rosenbrock") return Benchmark::Rosenbrock;
  if (name == "beale") return Benchmark::Beale;
  if (name == "goldstein_price" || name == "goldstein-price") return Benchmark::GoldsteinPrice;
  throw InputError("unknown benchmark loss '" + std::string(name) + "'");
}

std::string_view to_string(Benchmark b) {
  switch (b) {
    case Benchmark::Rosenbrock: return "rosenbrock";
    case Benchmark::Beale: return "beale";
    case Benchmark::GoldsteinPrice: return "goldstein_price";
  }
  return "?";
}

SmoothLoss make_benchmark(Benchmark which) {
  switch (which) {
    case Benchmark::Rosenbrock:
      return SmoothLoss("rosenbrock", 2, rosenbrock, vec2(1, 1), 0.0);
    case Benchmark::Beale:
      return SmoothLoss("beale", 2, beale, vec2(3, 0.5), 0.0);
    case Benchmark::GoldsteinPrice:
      return SmoothLoss("goldstein_price", 2, goldstein_price, vec2(0, -1), 3.0);
  }
  throw InputError("unknown benchmark");
}

SmoothLoss make_benchmark(std::string_view name) { return make_benchmark(parse_benchmark(name)); }

// ---------------------------------------------------------------------------
// Polynomial norm and fixtures

SmoothLoss make_polynorm(const Matrix& a, double p) {
  if (p == 1.0 || p == 0.0) throw InputError("polynorm: exponent p must differ from 0 and 1");
  if (!std::isfinite(p)) throw InputError("polynorm: non-finite exponent");
  const Matrix sym = linalg::symmetrized(a);
  if (linalg::min_eigenvalue(sym) <= 0.0) {
    throw InputError("polynorm: A must be positive definite");
  }
  const int d = static_cast<int>(sym.rows());

  auto eval = [sym, p](const Vector& x) {
    const Vector ax = sym * x;
    const double norm_sq = x.dot(ax);
    Evaluation e;
    if (norm_sq == 0.0) {
      if (p < 2.0) throw EvaluationError("polynorm: derivatives undefined at 0 for p < 2");
      e.value = 0.0;
      e.gradient = Vector::Zero(x.size());
      e.hessian = p == 2.0 ? sym : Matrix::Zero(x.size(), x.size());
      return e;
    }
    const double norm = std::sqrt(norm_sq);
    e.value = std::pow(norm, p) / p;
    e.gradient = std::pow(norm, p - 2) * ax;
    e.hessian = (p - 2) * std::pow(norm, p - 4) * ax * ax.transpose() + std::pow(norm, p - 2) * sym;
    return e;
  };
  std::optional<Vector> xstar;
  std::optional<double> fstar;
  if (p > 0.0) {
    xstar = Vector::Zero(d);
    fstar = 0.0;
  }
  auto value = [sym, p](const Vector& x) {
    return std::pow(std::sqrt(x.dot(sym * x)), p) / p;
  };
  return SmoothLoss("polynorm", d, eval, xstar, fstar, value);
}

SmoothLoss make_quadratic(const Matrix& a) {
  const Matrix sym = linalg::symmetrized(a);
  const int d = static_cast<int>(sym.rows());
  auto eval = [sym](const Vector& x) {
    Evaluation e;
    e.gradient = sym * x;
    e.value = 0.5 * x.dot(e.gradient);
    e.hessian = sym;
    return e;
  };
  std::optional<Vector> xstar;
  std::optional<double> fstar;
  if (linalg::min_eigenvalue(sym) > 0.0) {
    xstar = Vector::Zero(d);
    fstar = 0.0;
  }
  return SmoothLoss("quadratic", d, eval, xstar, fstar);
}

SmoothLoss make_saddle() {
  auto eval = [](const Vector& x) {
    Evaluation e;
    e.value = x(0) * x(0) - x(1) * x(1);
    e.gradient = vec2(2 * x(0), -2 * x(1));
    e.hessian.resize(2, 2);
    e.hessian << 2, 0, 0, -2;
    return e;
  };
  return SmoothLoss("saddle", 2, eval);
}

SmoothLoss make_counterexample() {
  auto value = [](const Vector& x) { return std::abs(1.0 + std::pow(x(0) - 1.0, 5)); };
  auto eval = [value](const Vector& x) {
    const double t = x(0) - 1.0;
    const double inner = 1.0 + std::pow(t, 5);
    if (inner == 0.0) {
      throw EvaluationError("counterexample: derivatives undefined at the kink x = 0");
    }
    const double sign = inner > 0.0 ? 1.0 : -1.0;
    Evaluation e;
    e.value = value(x);
    e.gradient = Vector::Constant(1, sign * 5.0 * std::pow(t, 4));
    e.hessian = Matrix::Constant(1, 1, sign * 20.0 * std::pow(t, 3));
    return e;
  };
  // The global minimum (value 0) sits on the kink.
  return SmoothLoss("counterexample", 1, eval, Vector::Zero(1), 0.0, value);
}

// ---------------------------------------------------------------------------
// Polytope

SmoothLoss make_polytope(const Polytope& poly) {
  if (poly.rows.rows() < 1) throw InputError("polytope: need at least one halfspace");
  if (poly.offsets.size() != poly.rows.rows()) {
    throw InputError("polytope: offsets and rows disagree in count");
  }
  if (!(poly.p >= 2.0)) throw InputError("polytope: exponent p must be >= 2");
  const int d = static_cast<int>(poly.rows.cols());

  auto eval = [poly](const Vector& x) {
    const Vector s = poly.rows * x - poly.offsets;
    const double p = poly.p;
    Evaluation e;
    e.value = 0.0;
    e.gradient = Vector::Zero(x.size());
    e.hessian = Matrix::Zero(x.size(), x.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (!(s(i) > 0.0)) continue;
      const auto a = poly.rows.row(i).transpose();
      e.value += std::pow(s(i), p);
      e.gradient += p * std::pow(s(i), p - 1) * a;
      e.hessian += p * (p - 1) * std::pow(s(i), p - 2) * a * a.transpose();
    }
    return e;
  };
  return SmoothLoss("polytope", d, eval, std::nullopt, 0.0);
}

SmoothLoss make_polytope(const Matrix& rows, const Vector& offsets, double p) {
  return make_polytope(Polytope{rows, offsets, p});
}

Polytope random_polytope(int dimension, int count, double p, std::uint64_t seed) {
  if (dimension < 1 || count < 1) throw InputError("random_polytope: sizes must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Polytope poly;
  poly.rows.resize(count, dimension);
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < dimension; ++j) poly.rows(i, j) = normal(rng);
  }
  poly.offsets = Vector::Ones(count);
  poly.p = p;
  return poly;
}

// ---------------------------------------------------------------------------
// Radial losses

RadialKind parse_radial(std::string_view name) {
  if (name == "geman_mcclure" || name == "geman-mcclure") return RadialKind::GemanMcClure;
  if (name == "welsh") return RadialKind::Welsh;
  if (name == "cauchy") return RadialKind::Cauchy;
  throw InputError("unknown radial loss '" + std::string(name) + "'");
}

std::string_view to_string(RadialKind k) {
  switch (k) {
    case RadialKind::GemanMcClure: return "geman_mcclure";
    case RadialKind::Welsh: return "welsh";
    case RadialKind::Cauchy: return "cauchy";
  }
  return "?";
}

double RadialLoss::psi_inverse(double c) const {
  if (!(c >= 0.0 && c < inverse_upper)) {
    throw DomainError(name() + ": psi^{-1} undefined at " + std::to_string(c));
  }
  return inverse_unchecked(c);
}

RadialLoss make_radial(RadialKind kind, const Vector& center) {
  if (center.size() < 1 || !center.allFinite()) throw InputError("radial: bad center");
  RadialLoss r;
  r.kind = kind;
  r.center = center;
  switch (kind) {
    case RadialKind::GemanMcClure:
      r.psi = [](double t) { return t * t / (t * t + 1); };
      r.psi_prime = [](double t) { return 2 * t / std::pow(t * t + 1, 2); };
      r.psi_double_prime = [](double t) { return 2 * (1 - 3 * t * t) / std::pow(t * t + 1, 3); };
      r.inverse_unchecked = [](double c) { return std::sqrt(c / (1 - c)); };
      r.inverse_upper = 1.0;
      break;
    case RadialKind::Welsh:
      r.psi = [](double t) { return -std::expm1(-t * t); };
      r.psi_prime = [](double t) { return 2 * t * std::exp(-t * t); };
      r.psi_double_prime = [](double t) { return (2 - 4 * t * t) * std::exp(-t * t); };
      r.inverse_unchecked = [](double c) { return std::sqrt(-std::log1p(-c)); };
      r.inverse_upper = 1.0;
      break;
    case RadialKind::Cauchy:
      r.psi = [](double t) { return std::log1p(t * t); };
      r.psi_prime = [](double t) { return 2 * t / (1 + t * t); };
      r.psi_double_prime = [](double t) { return 2 * (1 - t * t) / std::pow(1 + t * t, 2); };
      r.inverse_unchecked = [](double c) { return std::sqrt(std::expm1(c)); };
      r.inverse_upper = std::numeric_limits<double>::infinity();
      break;
  }
  return r;
}

RadialLoss make_radial(std::string_view name, const Vector& center) {
  return make_radial(parse_radial(name), center);
}

SmoothLoss radial_as_loss(const RadialLoss& radial) {
  const int d = static_cast<int>(radial.center.size());
  auto eval = [radial](const Vector& x) {
    const Vector u = x - radial.center;
    const double r = u.norm();
    const auto n = u.size();
    Evaluation e;
    e.value = radial.psi(r);
    if (r == 0.0) {
      e.gradient = Vector::Zero(n);
      e.hessian = radial.psi_double_prime(0.0) * Matrix::Identity(n, n);
      return e;
    }
    const Vector dir = u / r;
    const double d1 = radial.psi_prime(r);
    const double d2 = radial.psi_double_prime(r);
    const Matrix proj = dir * dir.transpose();
    e.gradient = d1 * dir;
    e.hessian = d2 * proj + (d1 / r) * (Matrix::Identity(n, n) - proj);
    return e;
  };
  return SmoothLoss(radial.name(), d, eval, radial.center, radial.psi(0.0));
}

SmoothLoss as_1d_loss(const RadialLoss& radial) {
  if (radial.center.size() != 1) throw InputError("as_1d_loss: radial center must be 1D");
  const double c = radial.center(0);
  auto eval = [radial, c](const Vector& x) {
    const double u = x(0) - c;
    const double r = std::abs(u);
    const double sign = u > 0 ? 1.0 : (u < 0 ? -1.0 : 0.0);
    Evaluation e;
    e.value = radial.psi(r);
    e.gradient = Vector::Constant(1, sign * radial.psi_prime(r));
    e.hessian = Matrix::Constant(1, 1, radial.psi_double_prime(r));
    return e;
  };
  return SmoothLoss(radial.name() + "1d", 1, eval, radial.center, radial.psi(0.0));
}

}  // namespace tnewton
