#include "tnewton/newton.hpp"

#include "tnewton/errors.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tnewton {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

void NewtonConfig::validate() const {
  if (max_iters < 1) throw InputError("max_iters must be >= 1");
  if (!(gtol >= 0.0) || !(xtol >= 0.0)) throw InputError("tolerances must be non-negative");
  if (!(divergence_radius > 0.0)) throw InputError("divergence radius must be positive");
  if (!(pinv_rel_tol > 0.0 && pinv_rel_tol <= 1e-4)) {
    throw InputError("pinv rel_tol must lie in (0, 1e-4]");
  }
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::Diverged: return "diverged";
    case Termination::MaxIters: return "max_iters";
    case Termination::SingularScaling: return "singular_scaling";
    case Termination::DomainError: return "domain_error";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Schedules

SchedulePtr StepsizeSchedule::constant(double alpha) {
  if (!std::isfinite(alpha)) throw InputError("constant stepsize must be finite");
  return SchedulePtr(new StepsizeSchedule(Constant{alpha}));
}

SchedulePtr StepsizeSchedule::induced(SchedulePtr base, ScalarTransform transform) {
  if (!base) throw InputError("induced schedule needs a base schedule");
  return SchedulePtr(new StepsizeSchedule(Induced{std::move(base), std::move(transform)}));
}

SchedulePtr StepsizeSchedule::forwarded(SchedulePtr base, ScalarTransform transform,
                                        SmoothLoss base_loss) {
  if (!base) throw InputError("forwarded schedule needs a base schedule");
  return SchedulePtr(new StepsizeSchedule(
      Forwarded{std::move(base), std::move(transform), std::move(base_loss)}));
}

SchedulePtr StepsizeSchedule::backtracking(double beta, double c1, double alpha0) {
  if (!(beta > 0.0 && beta < 1.0)) throw InputError("backtracking beta must lie in (0, 1)");
  if (!(c1 > 0.0 && c1 < 1.0)) throw InputError("backtracking c1 must lie in (0, 1)");
  if (!(alpha0 > 0.0)) throw InputError("backtracking alpha0 must be positive");
  return SchedulePtr(new StepsizeSchedule(Backtracking{beta, c1, alpha0, 60}));
}

bool StepsizeSchedule::transform_aware() const {
  return std::holds_alternative<Induced>(v_) || std::holds_alternative<Forwarded>(v_);
}

std::string StepsizeSchedule::describe() const {
  std::ostringstream os;
  std::visit(
      [&os](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Constant>) {
          os << "const:" << s.alpha;
        } else if constexpr (std::is_same_v<T, Induced>) {
          os << "induced(" << s.base->describe() << "," << s.transform.name() << ")";
        } else if constexpr (std::is_same_v<T, Forwarded>) {
          os << "forwarded(" << s.base->describe() << "," << s.transform.name() << ")";
        } else {
          os << "armijo:beta=" << s.beta << ":c1=" << s.c1;
        }
      },
      v_);
  return os.str();
}

namespace {

double require_nonsingular(double scaling) {
  if (!(std::abs(scaling) > kSingularScaling)) {
    std::ostringstream os;
    os << "scaling factor " << scaling << " is singular";
    throw SingularScalingError(os.str());
  }
  return scaling;
}

double armijo(const StepsizeSchedule::Backtracking& bt, const StepContext& ctx) {
  const double f0 = ctx.eval.value;
  const double slope = ctx.eval.gradient.dot(ctx.direction);
  double alpha = bt.alpha0;
  for (int i = 0; i < bt.max_halvings; ++i) {
    try {
      const double trial = ctx.driven.value(ctx.x - alpha * ctx.direction);
      if (std::isfinite(trial) && trial <= f0 - bt.c1 * alpha * slope) return alpha;
    } catch (const DomainError&) {
    } catch (const EvaluationError&) {
    }
    alpha *= bt.beta;
  }
  return alpha;
}

}  // namespace

StepChoice StepsizeSchedule::choose(const StepContext& ctx) const {
  return std::visit(
      [&ctx](const auto& s) -> StepChoice {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return {s.alpha, std::nullopt};
        } else if constexpr (std::is_same_v<T, Backtracking>) {
          return {armijo(s, ctx), std::nullopt};
        } else if constexpr (std::is_same_v<T, Induced>) {
          // The base schedule lives on L = phi o f; build L's view of this point
          // from f's evaluation by the chain rule.
          const double scaling =
              require_nonsingular(scaling_factor(s.transform, ctx.eval.value, ctx.dual.value));
          const SmoothLoss lifted = compose(ctx.driven, s.transform).as_loss();
          const double d1 = s.transform.phi_prime(ctx.eval.value);
          const double d2 = s.transform.phi_double_prime(ctx.eval.value);
          Evaluation l_eval;
          l_eval.value = s.transform.phi(ctx.eval.value);
          l_eval.gradient = d1 * ctx.eval.gradient;
          l_eval.hessian = d1 * ctx.eval.hessian + d2 * ctx.eval.gradient * ctx.eval.gradient.transpose();
          const Vector l_dir = linalg::pinv_solve(l_eval.hessian, l_eval.gradient, ctx.pinv_rel_tol);
          const linalg::DualNormResult l_dual =
              linalg::dual_norm_sq(l_eval.hessian, l_eval.gradient, ctx.pinv_rel_tol);
          const StepContext l_ctx{lifted, ctx.x, l_eval, l_dir, l_dual, ctx.pinv_rel_tol};
          const double alpha_l = s.base->choose(l_ctx).alpha;
          return {induced_stepsize(alpha_l, scaling), scaling};
        } else {
          const Evaluation f_eval = s.base_loss.evaluate(ctx.x);
          const Vector f_dir = linalg::pinv_solve(f_eval.hessian, f_eval.gradient, ctx.pinv_rel_tol);
          const linalg::DualNormResult f_dual =
              linalg::dual_norm_sq(f_eval.hessian, f_eval.gradient, ctx.pinv_rel_tol);
          const double scaling =
              require_nonsingular(scaling_factor(s.transform, f_eval.value, f_dual.value));
          const StepContext f_ctx{s.base_loss, ctx.x, f_eval, f_dir, f_dual, ctx.pinv_rel_tol};
          const double alpha_f = s.base->choose(f_ctx).alpha;
          return {forward_stepsize(alpha_f, scaling), scaling};
        }
      },
      v_);
}

// ---------------------------------------------------------------------------
// Driver

IterateTrace run_newton(const SmoothLoss& loss, const StepsizeSchedule& schedule, const Vector& x0,
                        const NewtonConfig& cfg) {
  cfg.validate();
  if (x0.size() != loss.dimension() || !x0.allFinite()) {
    throw InputError("run_newton: start point must be finite with the loss dimension");
  }

  IterateTrace trace;
  Vector x = x0;
  const auto& xstar = loss.minimizer();

  auto finish = [&trace](Termination t, std::string msg = {}) {
    trace.termination = t;
    trace.iterations = static_cast<int>(trace.records.size()) - 1;
    trace.message = std::move(msg);
    return trace;
  };

  for (int k = 0;; ++k) {
    IterateRecord rec;
    rec.k = k;
    rec.x = x;
    rec.alpha = kNaN;
    rec.f = kNaN;
    rec.grad_norm = kNaN;
    rec.dual_sq = kNaN;

    Evaluation eval;
    try {
      eval = loss.evaluate(x);
    } catch (const DomainError& e) {
      trace.records.push_back(rec);
      return finish(Termination::DomainError, e.what());
    } catch (const EvaluationError& e) {
      trace.records.push_back(rec);
      return finish(Termination::DomainError, e.what());
    }
    rec.f = eval.value;
    rec.grad_norm = eval.gradient.norm();
    if (!std::isfinite(eval.value) || !eval.gradient.allFinite() || !eval.hessian.allFinite()) {
      trace.records.push_back(rec);
      return finish(Termination::Diverged, "non-finite evaluation");
    }

    const Vector direction = linalg::pinv_solve(eval.hessian, eval.gradient, cfg.pinv_rel_tol);
    const linalg::DualNormResult dual =
        linalg::dual_norm_sq(eval.hessian, eval.gradient, cfg.pinv_rel_tol);
    rec.dual_sq = dual.value;
    rec.in_range = dual.in_range;

    const bool small_grad = rec.grad_norm <= cfg.gtol;
    const bool near_opt = xstar && (x - *xstar).norm() <= cfg.xtol;
    if (small_grad || near_opt) {
      trace.records.push_back(rec);
      return finish(Termination::Converged);
    }
    if (k >= cfg.max_iters) {
      trace.records.push_back(rec);
      return finish(Termination::MaxIters);
    }
    if (!dual.in_range) trace.range_violation = true;

    StepChoice choice;
    try {
      choice = schedule.choose({loss, x, eval, direction, dual, cfg.pinv_rel_tol});
    } catch (const SingularScalingError& e) {
      trace.records.push_back(rec);
      return finish(Termination::SingularScaling, e.what());
    } catch (const DomainError& e) {
      trace.records.push_back(rec);
      return finish(Termination::DomainError, e.what());
    } catch (const EvaluationError& e) {
      trace.records.push_back(rec);
      return finish(Termination::DomainError, e.what());
    }
    rec.alpha = choice.alpha;
    rec.scaling = choice.scaling;
    trace.records.push_back(rec);

    x = x - choice.alpha * direction;
    if (!x.allFinite() || x.norm() > cfg.divergence_radius) {
      IterateRecord last;
      last.k = k + 1;
      last.x = x;
      last.alpha = kNaN;
      last.f = kNaN;
      last.grad_norm = kNaN;
      last.dual_sq = kNaN;
      if (x.allFinite()) {
        try {
          const Evaluation e = loss.evaluate(x);
          last.f = e.value;
          last.grad_norm = e.gradient.norm();
        } catch (const std::exception&) {
        }
      }
      trace.records.push_back(last);
      return finish(Termination::Diverged, "iterate left the divergence radius");
    }
  }
}

EquivalenceResult run_equivalence(const SmoothLoss& loss, const ScalarTransform& t,
                                  const SchedulePtr& base_schedule, const Vector& x0,
                                  const NewtonConfig& cfg) {
  EquivalenceResult out;
  out.trace_f = run_newton(loss, *base_schedule, x0, cfg);
  const SmoothLoss transformed = compose(loss, t).as_loss();
  const SchedulePtr fwd = StepsizeSchedule::forwarded(base_schedule, t, loss);
  out.trace_L = run_newton(transformed, *fwd, x0, cfg);

  if (out.trace_L.termination == Termination::SingularScaling &&
      out.trace_f.records.size() > out.trace_L.records.size()) {
    out.trace_f.records.resize(out.trace_L.records.size());
    out.trace_f.iterations = static_cast<int>(out.trace_f.records.size()) - 1;
    out.trace_f.termination = Termination::SingularScaling;
  }

  std::size_t common = std::min(out.trace_f.records.size(), out.trace_L.records.size());
  for (std::size_t k = 0; k < common; ++k) {
    if (!out.trace_f.records[k].in_range) {
      out.truncated_by_range = true;
      common = k + 1;
      break;
    }
  }

  out.max_deviation = 0.0;
  out.min_abs_scaling = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < common; ++k) {
    const Vector& xf = out.trace_f.records[k].x;
    const Vector& xl = out.trace_L.records[k].x;
    out.max_deviation = std::max(out.max_deviation, (xf - xl).norm() / (1.0 + xf.norm()));
    if (k + 1 < common && out.trace_L.records[k].scaling) {
      out.min_abs_scaling = std::min(out.min_abs_scaling, std::abs(*out.trace_L.records[k].scaling));
    }
  }
  out.common_iterations = common == 0 ? 0 : static_cast<int>(common) - 1;
  return out;
}

// ---------------------------------------------------------------------------
// Levenberg-Marquardt

Vector lm_step(const Matrix& hessian, const Vector& gradient, double lambda) {
  const auto n = hessian.rows();
  const Matrix m = hessian + lambda * Matrix::Identity(n, n);
  Eigen::FullPivLU<Matrix> lu(m);
  lu.setThreshold(1e-14);
  if (!lu.isInvertible()) throw PreconditionError("lm_step: regularized Hessian is singular");
  return lu.solve(gradient);
}

Vector lm_step(const SmoothLoss& loss, const Vector& x, double lambda) {
  const Evaluation e = loss.evaluate(x);
  return lm_step(e.hessian, e.gradient, lambda);
}

LmResidual lm_invariance_residual(const SmoothLoss& loss, const ScalarTransform& t, const Vector& x,
                                  double lambda) {
  if (loss.dimension() < 2) {
    throw PreconditionError("lm_invariance_residual: needs d >= 2 (one equation per unknown in 1D)");
  }
  const Evaluation f = loss.evaluate(x);
  const Vector& g = f.gradient;
  const Matrix& h = f.hessian;
  const double gg = g.squaredNorm();
  if (gg == 0.0) throw PreconditionError("lm_invariance_residual: gradient vanishes");
  const Vector hg = h * g;
  const Vector off_axis = hg - (g.dot(hg) / gg) * g;
  if (off_axis.norm() <= 1e-8 * h.norm() * std::sqrt(gg)) {
    throw PreconditionError("lm_invariance_residual: gradient is an eigenvector of the Hessian");
  }

  const Evaluation l = compose(loss, t).evaluate(x);
  const Vector target = lm_step(h, g, lambda);
  auto residual = [&](double lambda_phi) {
    try {
      return (target - lm_step(l.hessian, l.gradient, lambda_phi)).norm();
    } catch (const PreconditionError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  // Log-spaced bracket over [-1e6, 1e6].
  std::vector<double> grid;
  for (int e = 600; e >= -800; e -= 2) grid.push_back(-std::pow(10.0, e / 100.0));
  grid.push_back(0.0);
  for (int e = -800; e <= 600; e += 2) grid.push_back(std::pow(10.0, e / 100.0));

  std::size_t best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = residual(grid[i]);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }

  double a = grid[best == 0 ? 0 : best - 1];
  double b = grid[std::min(best + 1, grid.size() - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = residual(c);
  double fd = residual(d);
  while (std::abs(b - a) > 1e-10 * std::max(1.0, std::abs(c))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = residual(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = residual(d);
    }
  }
  const double mid = 0.5 * (a + b);
  LmResidual out{residual(mid), mid};
  if (best_val < out.residual) out = {best_val, grid[best]};
  return out;
}

}  // namespace tnewton
