#pragma once

#include <functional>

namespace tnewton::quad {

inline constexpr double kDefaultAbsTol = 1e-10;
inline constexpr int kDefaultMaxDepth = 40;

/// Adaptive Simpson on [a, b] with absolute tolerance `abs_tol`.
/// Throws EvaluationError on a non-finite integrand value. b < a integrates
/// with reversed sign.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol = kDefaultAbsTol, int max_depth = kDefaultMaxDepth);

}  // namespace tnewton::quad
