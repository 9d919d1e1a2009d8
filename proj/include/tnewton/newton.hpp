#pragma once

#include "tnewton/linalg.hpp"
#include "tnewton/losses.hpp"
#include "tnewton/transforms.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tnewton {

struct NewtonConfig {
  int max_iters = 100;
  double gtol = 1e-10;
  double xtol = 1e-10;
  double divergence_radius = 1e6;
  double pinv_rel_tol = linalg::kDefaultRelTol;

  /// Throws InputError unless every field is positive (tolerances may be 0).
  void validate() const;
};

enum class Termination { Converged, Diverged, MaxIters, SingularScaling, DomainError };

std::string_view to_string(Termination t);

/// State at iterate k. `alpha` and `scaling` describe the step taken from x_k
/// to x_{k+1} and are NaN / empty on the final record.
struct IterateRecord {
  int k = 0;
  Vector x;
  double f = 0.0;
  double grad_norm = 0.0;
  double alpha = 0.0;
  std::optional<double> scaling;
  double dual_sq = 0.0;
  bool in_range = true;
};

struct IterateTrace {
  std::vector<IterateRecord> records;  ///< iterations + 1 entries
  Termination termination = Termination::MaxIters;
  int iterations = 0;
  bool range_violation = false;  ///< some iterate had grad f outside Range(hess f)
  std::string message;

  const Vector& last_x() const { return records.back().x; }
};

/// Everything a schedule may look at when choosing alpha_k.
struct StepContext {
  const SmoothLoss& driven;        ///< loss the Newton method is run on
  const Vector& x;
  const Evaluation& eval;          ///< driven loss at x
  const Vector& direction;         ///< hess^+ grad of the driven loss
  const linalg::DualNormResult& dual;
  double pinv_rel_tol;
};

struct StepChoice {
  double alpha = 1.0;
  std::optional<double> scaling;
};

class StepsizeSchedule;
using SchedulePtr = std::shared_ptr<const StepsizeSchedule>;

/// Newton stepsize schedules.
///
///  - constant(a): alpha_k = a.
///  - induced(base, phi): run on f, alpha = alpha_L / scaling where alpha_L is
///    `base` evaluated on L = phi o f.
///  - forwarded(base, phi, f): run on L = phi o f, alpha = alpha_f * scaling
///    where alpha_f is `base` evaluated on f.
///  - backtracking(beta, c1): Armijo on the driven loss starting from alpha0.
///
/// induced and forwarded throw SingularScalingError when |scaling| <= 1e-12.
class StepsizeSchedule {
 public:
  struct Constant {
    double alpha = 1.0;
  };
  struct Induced {
    SchedulePtr base;
    ScalarTransform transform;
  };
  struct Forwarded {
    SchedulePtr base;
    ScalarTransform transform;
    SmoothLoss base_loss;
  };
  struct Backtracking {
    double beta = 0.5;
    double c1 = 1e-4;
    double alpha0 = 1.0;
    int max_halvings = 60;
  };

  static SchedulePtr constant(double alpha);
  static SchedulePtr induced(SchedulePtr base, ScalarTransform transform);
  static SchedulePtr forwarded(SchedulePtr base, ScalarTransform transform, SmoothLoss base_loss);
  static SchedulePtr backtracking(double beta = 0.5, double c1 = 1e-4, double alpha0 = 1.0);

  StepChoice choose(const StepContext& ctx) const;

  /// True for induced/forwarded schedules, whose records carry a scaling factor.
  bool transform_aware() const;
  std::string describe() const;

  using Variant = std::variant<Constant, Induced, Forwarded, Backtracking>;
  const Variant& variant() const { return v_; }

 private:
  explicit StepsizeSchedule(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Damped Newton iteration x_{k+1} = x_k - alpha_k hess^+ grad.
///
/// Stops on gtol/xtol (converged), ||x|| > R or non-finite values (diverged),
/// max_iters, a singular scaling factor, or a domain/evaluation error. Never
/// throws for numerical reasons; everything lands in the trace.
IterateTrace run_newton(const SmoothLoss& loss, const StepsizeSchedule& schedule,
                        const Vector& x0, const NewtonConfig& cfg = {});

struct EquivalenceResult {
  IterateTrace trace_f;
  IterateTrace trace_L;
  double max_deviation = 0.0;
  int common_iterations = 0;            ///< compared steps (prefix length - 1)
  double min_abs_scaling = 0.0;         ///< over the compared steps
  bool truncated_by_range = false;      ///< comparison stopped at a range violation
};

/// Runs Newton on f with `base_schedule` and on phi o f with
/// forwarded(base_schedule, phi, f); compares iterates over the common prefix
/// with deviation ||x_f - x_L|| / (1 + ||x_f||).
EquivalenceResult run_equivalence(const SmoothLoss& loss, const ScalarTransform& t,
                                  const SchedulePtr& base_schedule, const Vector& x0,
                                  const NewtonConfig& cfg = {});

/// Levenberg-Marquardt displacement (H + lambda I)^{-1} g.
/// Throws PreconditionError when the regularized matrix is singular.
Vector lm_step(const Matrix& hessian, const Vector& gradient, double lambda);
Vector lm_step(const SmoothLoss& loss, const Vector& x, double lambda);

struct LmResidual {
  double residual = 0.0;
  double best_lambda = 0.0;  ///< minimizing lambda_phi
};

/// min over lambda_phi in [-1e6, 1e6] of ||lm_step(f, x, lambda) - lm_step(L, x, lambda_phi)||
/// with L = t o f. Log-spaced bracketing followed by golden-section refinement.
/// Requires d >= 2 and grad f not an eigenvector of hess f (PreconditionError).
LmResidual lm_invariance_residual(const SmoothLoss& loss, const ScalarTransform& t,
                                  const Vector& x, double lambda);

}  // namespace tnewton
