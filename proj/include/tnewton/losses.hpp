#pragma once

#include "tnewton/linalg.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace tnewton {

/// Value, gradient and Hessian of a loss at one point.
struct Evaluation {
  double value = 0.0;
  Vector gradient;
  Matrix hessian;
};

/// A twice-differentiable loss f: R^d -> R exposing (f, grad f, hess f).
///
/// Losses are immutable values; copies share nothing mutable, so evaluation
/// from several threads is safe.
class SmoothLoss {
 public:
  using Evaluator = std::function<Evaluation(const Vector&)>;
  using ValueFn = std::function<double(const Vector&)>;

  SmoothLoss(std::string name, int dimension, Evaluator evaluator,
             std::optional<Vector> minimizer = std::nullopt,
             std::optional<double> min_value = std::nullopt, ValueFn value_only = nullptr);

  /// Full evaluation. Throws InputError on a dimension mismatch or non-finite
  /// point; losses themselves may throw EvaluationError or DomainError.
  Evaluation evaluate(const Vector& x) const;

  /// Value only. Available at points where derivatives are not (kinks).
  double value(const Vector& x) const;

  int dimension() const { return dimension_; }
  const std::string& name() const { return name_; }
  const std::optional<Vector>& minimizer() const { return minimizer_; }
  std::optional<double> min_value() const { return min_value_; }

 private:
  void check_point(const Vector& x) const;

  std::string name_;
  int dimension_;
  Evaluator evaluator_;
  std::optional<Vector> minimizer_;
  std::optional<double> min_value_;
  ValueFn value_only_;
};

// ---------------------------------------------------------------------------
// Benchmarks

enum class Benchmark { Rosenbrock, Beale, GoldsteinPrice };

Benchmark parse_benchmark(std::string_view name);
std::string_view to_string(Benchmark b);

/// Rosenbrock (min at (1,1)), Beale (min at (3, 0.5)), Goldstein-Price
/// (min at (0,-1), value 3), all with analytic derivatives.
SmoothLoss make_benchmark(Benchmark which);
SmoothLoss make_benchmark(std::string_view name);

// ---------------------------------------------------------------------------
// Polynomial norm, quadratics and small fixtures

/// f(x) = (1/p) ||x||_A^p with ||x||_A = sqrt(x^T A x). Requires A symmetric
/// positive definite and p not in {0, 1}. For p < 2 evaluation at x = 0
/// throws EvaluationError.
SmoothLoss make_polynorm(const Matrix& a, double p);

/// f(x) = 1/2 x^T A x (A symmetric).
SmoothLoss make_quadratic(const Matrix& a);

/// f(x, y) = x^2 - y^2.
SmoothLoss make_saddle();

/// f(x) = |1 + (x - 1)^5|. Derivatives at the kink x = 0 throw
/// EvaluationError; value() works everywhere.
SmoothLoss make_counterexample();

// ---------------------------------------------------------------------------
// Polytope feasibility

struct Polytope {
  Matrix rows;     ///< n x d, row i is a_i
  Vector offsets;  ///< b_i
  double p = 2.0;
};

/// f_p(x) = sum_i (<a_i, x> - b_i)_+^p. Active set is {i : s_i > 0} strictly.
SmoothLoss make_polytope(const Polytope& poly);
SmoothLoss make_polytope(const Matrix& rows, const Vector& offsets, double p);

/// Seeded instance: standard normal rows, b_i = 1.
Polytope random_polytope(int dimension, int count, double p, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Radial robust losses f(x) = psi(||x - center||)

enum class RadialKind { GemanMcClure, Welsh, Cauchy };

RadialKind parse_radial(std::string_view name);
std::string_view to_string(RadialKind k);

struct RadialLoss {
  RadialKind kind = RadialKind::Cauchy;
  std::function<double(double)> psi;
  std::function<double(double)> psi_prime;
  std::function<double(double)> psi_double_prime;
  /// Supremum of psi; psi_inverse is defined on [0, inverse_upper).
  double inverse_upper = 0.0;
  Vector center;

  /// psi^{-1}(c); throws DomainError for c outside [0, inverse_upper).
  double psi_inverse(double c) const;

  std::string name() const { return std::string(to_string(kind)); }

  std::function<double(double)> inverse_unchecked;
};

RadialLoss make_radial(RadialKind kind, const Vector& center);
RadialLoss make_radial(std::string_view name, const Vector& center);

/// d-dimensional loss psi(||x - center||); Hessian at the center is
/// psi''(0) I.
SmoothLoss radial_as_loss(const RadialLoss& radial);

/// 1D view psi(|x - x*|); the radial center must be one-dimensional.
SmoothLoss as_1d_loss(const RadialLoss& radial);

}  // namespace tnewton
