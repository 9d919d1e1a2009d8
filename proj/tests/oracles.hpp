#pragma once
// Independent reference computations used by the tests. None of these call
// into the library's numerical routines.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Fourth-order central difference of a scalar function.
inline double derivative(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

inline double step_for(const Vec& x) { return 1e-4 * (1.0 + x.norm()); }

/// Gradient from function values, fourth-order stencil per coordinate.
inline Vec gradient(const std::function<double(const Vec&)>& f, const Vec& x) {
  const double h = step_for(x);
  Vec g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    g(i) = derivative(
        [&](double t) {
          Vec y = x;
          y(i) = t;
          return f(y);
        },
        x(i), h);
  }
  return g;
}

/// Hessian from an analytic gradient, symmetrized.
inline Mat hessian(const std::function<Vec(const Vec&)>& grad, const Vec& x) {
  const double h = step_for(x);
  const auto d = x.size();
  Mat m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    auto shifted = [&](double t) {
      Vec y = x;
      y(i) += t;
      return grad(y);
    };
    m.col(i) = (-shifted(2 * h) + 8 * shifted(h) - 8 * shifted(-h) + shifted(-2 * h)) / (12 * h);
  }
  return 0.5 * (m + m.transpose());
}

/// Minimum-norm least-squares solution of H p = g through a Jacobi SVD.
inline Vec min_norm_solve(const Mat& h, const Vec& g, double rel_threshold = 1e-10) {
  Eigen::JacobiSVD<Mat> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  svd.setThreshold(rel_threshold);
  return svd.solve(g);
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    nodes[i] = z;
    weights[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

/// Composite Gauss-Legendre integral of f over [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b, int panels = 200,
                        int order = 10) {
  std::vector<double> nodes;
  std::vector<double> weights;
  gauss_legendre(order, nodes, weights);
  const double w = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * w;
    double s = 0.0;
    for (int i = 0; i < order; ++i) s += weights[i] * f(mid + 0.5 * w * nodes[i]);
    total += 0.5 * w * s;
  }
  return total;
}

/// erf(x) as 2/sqrt(pi) * int_0^x exp(-t^2) dt.
inline double erf_by_quadrature(double x) {
  return 2.0 / std::sqrt(std::numbers::pi) * integrate([](double t) { return std::exp(-t * t); }, 0.0, x);
}

/// Dense-then-zoom scan for the minimum of a scalar function of lambda over
/// [-hi, -lo] u {0} u [lo, hi] (log spaced), returning the minimum value.
inline double scan_minimum(const std::function<double(double)>& f, double lo = 1e-8, double hi = 1e6,
                           int points = 20000) {
  double best = f(0.0);
  double best_arg = 0.0;
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int sign : {-1, 1}) {
    for (int i = 0; i <= points; ++i) {
      const double lam = sign * std::pow(10.0, a + (b - a) * i / points);
      const double v = f(lam);
      if (std::isfinite(v) && v < best) {
        best = v;
        best_arg = lam;
      }
    }
  }
  // Zoom linearly around the best sample a few times.
  double width = std::abs(best_arg) * (std::pow(10.0, (b - a) / points) - 1.0) + 1e-12;
  for (int round = 0; round < 6; ++round) {
    const double center = best_arg;
    for (int i = -200; i <= 200; ++i) {
      const double lam = center + width * i / 200.0;
      const double v = f(lam);
      if (std::isfinite(v) && v < best) {
        best = v;
        best_arg = lam;
      }
    }
    width /= 50.0;
  }
  return best;
}

}  // namespace oracle
