#pragma once

#include "tnewton/losses.hpp"
#include "tnewton/newton.hpp"
#include "tnewton/transforms.hpp"

#include <functional>

namespace tnewton::star {

/// Split point of the ray integral; [0, delta] uses the Hessian limit.
inline constexpr double kRaySplit = 1e-4;

/// g(x) = f(x*) + int_0^1 <grad f(x* + t(x - x*)), x - x*> / t dt.
///
/// The integrand tends to <hess f(x*) u, u> as t -> 0, so [0, 1e-4] is
/// integrated with that constant and [1e-4, 1] by adaptive Simpson.
/// Requires a known minimizer (InputError otherwise).
double star_value(const SmoothLoss& base, const Vector& x, double quad_tol = 1e-10);

/// Closed-form profile Psi(r) = r int_0^r psi'(t)/t dt for the three robust
/// losses: r^2/(r^2+1) + r atan r, sqrt(pi) r erf r, 2 r atan r.
double closed_form_profile(RadialKind kind, double r);

/// J(r) = int_0^r psi'(t)/t dt in closed form (Psi = r J).
double closed_form_inner(RadialKind kind, double r);

/// Star-convexifying transform phi(c) = psi^{-1}(c) int_0^c dv / psi^{-1}(v)
/// with phi' and phi'' derived from it; the integral is evaluated by adaptive
/// Simpson after the substitution v = u^2. Valid on [0, sup psi).
ScalarTransform star_transform(const RadialLoss& radial);

struct RadialStar {
  SmoothLoss loss;            ///< x -> Psi(||x - x*||), analytic derivatives
  ScalarTransform transform;  ///< f-value view, quadrature based
};

/// Both views of the radial star-convexification. The loss uses
/// Psi' = J + psi', Psi'' = psi'' + psi'/r (2 psi''(0) at the center).
RadialStar radial_star_loss(const RadialLoss& radial);

/// True iff psi''(r) + psi'(r)/r >= -1e-10 on {step, 2 step, ..., M} and
/// 2 psi''(0) >= -1e-10.
bool convexity_neighborhood(const RadialLoss& radial, double radius, double grid_step);

struct RadiusResult {
  double radius = 0.0;  ///< +infinity when every probe converged
  bool monotone = true; ///< post-hoc check of the bisection assumption
};

/// Largest |x0 - x*| from which unit-step Newton converges (termination
/// converged and |x_last - x*| <= 1e-6), by 50 bisection steps on
/// (0, bracket_hi]. If bracket_hi converges, probes 10x, 100x, 1000x before
/// reporting +infinity. Throws EvaluationError if tiny offsets fail.
RadiusResult convergence_radius(const SmoothLoss& loss_1d, double bracket_hi,
                                const NewtonConfig& cfg = {});

/// Largest r such that `second_derivative` stays positive on (0, r], by grid
/// scan plus bisection on [0, bracket_hi]; +infinity if it never turns.
double positive_curvature_radius(const std::function<double(double)>& second_derivative,
                                 double bracket_hi, double grid_step = 1e-3);

}  // namespace tnewton::star
