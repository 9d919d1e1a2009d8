#pragma once

#include "tnewton/losses.hpp"
#include "tnewton/newton.hpp"
#include "tnewton/transforms.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tnewton::scan {

/// n cells covering [lo, hi]; evaluation happens at cell centers.
struct Axis {
  double lo = -4.0;
  double hi = 4.0;
  int n = 200;

  double center(int i) const { return lo + (i + 0.5) * (hi - lo) / n; }
};

struct Grid2D {
  Axis x;
  Axis y;  ///< ignored (must have n = 1) for one-dimensional losses
};

struct Cell {
  int ix = 0;
  int iy = 0;
  double x = 0.0;
  double y = 0.0;
  int scaling_sign = 0;   ///< -1 / 0 / +1, sign-flip scans
  double scaling = 0.0;   ///< sign-flip scans
  bool converged = false; ///< convergence scans
  int iterations = 0;
  double final_value = 0.0;
  std::string error;      ///< empty unless the cell failed to evaluate

  bool ok() const { return error.empty(); }
};

struct GridScan {
  Grid2D grid;
  std::vector<Cell> cells;  ///< row-major in (iy, ix)
  int cross_checked = 0;    ///< sign-flip scans: cells verified with actual steps
  int cross_mismatches = 0;

  const Cell& at(int ix, int iy) const { return cells[static_cast<std::size_t>(iy) * grid.x.n + ix]; }
  int count_sign(int sign) const;
  int count_converged() const;
  int count_errors() const;
};

/// Sign of the scaling factor 1 + (phi''/phi') ||grad f||*^2 per cell. A
/// `cross_fraction` of cells (chosen with `seed`, at least one when possible)
/// is re-checked by comparing the actual Newton steps on f and on phi o f.
GridScan scan_sign_flip(const SmoothLoss& loss, const ScalarTransform& t, const Grid2D& grid,
                        std::uint64_t seed = 0, double cross_fraction = 0.01,
                        double pinv_rel_tol = linalg::kDefaultRelTol);

/// Unit-step Newton from every cell center (on phi o f when a transform is
/// given). A cell converges when an iterate lands within 1e-6 of the known
/// minimizer before cfg.max_iters.
GridScan scan_convergence(const SmoothLoss& loss, const std::optional<ScalarTransform>& t,
                          const Grid2D& grid, const NewtonConfig& cfg = {});

/// Newton step directions on f and on phi o f at x, and their scaling factor.
struct StepPair {
  Vector step_f;
  Vector step_L;
  double scaling = 0.0;
};
StepPair newton_step_pair(const SmoothLoss& loss, const ScalarTransform& t, const Vector& x,
                          double pinv_rel_tol = linalg::kDefaultRelTol);

struct SweepRow {
  double alpha = 0.0;
  bool converged = false;
  int iterations = 0;
  double final_grad_norm = 0.0;
  Termination termination = Termination::MaxIters;
};

struct SweepResult {
  double best_alpha = 0.0;
  int iterations = 0;
  std::vector<SweepRow> rows;
};

/// Runs Newton for each fixed alpha and ranks: converged first, then fewer
/// iterations, then smaller final gradient norm, then smaller alpha.
SweepResult best_fixed_stepsize(const SmoothLoss& loss, const Vector& x0,
                                const std::vector<double>& alphas, const NewtonConfig& cfg = {});

}  // namespace tnewton::scan
