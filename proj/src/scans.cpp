#include "tnewton/scans.hpp"

#include "tnewton/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>
#include <tuple>

namespace tnewton::scan {

int GridScan::count_sign(int sign) const {
  return static_cast<int>(std::count_if(cells.begin(), cells.end(), [sign](const Cell& c) {
    return c.ok() && c.scaling_sign == sign;
  }));
}

int GridScan::count_converged() const {
  return static_cast<int>(
      std::count_if(cells.begin(), cells.end(), [](const Cell& c) { return c.ok() && c.converged; }));
}

int GridScan::count_errors() const {
  return static_cast<int>(
      std::count_if(cells.begin(), cells.end(), [](const Cell& c) { return !c.ok(); }));
}

namespace {

void validate(const Grid2D& grid, int dimension) {
  if (grid.x.n < 1 || grid.y.n < 1) throw InputError("scan grid needs at least one cell per axis");
  if (!(grid.x.hi > grid.x.lo) || !(grid.y.hi >= grid.y.lo)) {
    throw InputError("scan grid axes need lo < hi");
  }
  if (dimension == 1 && grid.y.n != 1) throw InputError("1D scans take a single y cell");
  if (dimension > 2) throw CapabilityError("grid scans support dimensions 1 and 2");
}

Vector cell_point(const Cell& c, int dimension) {
  Vector p(dimension);
  p(0) = c.x;
  if (dimension == 2) p(1) = c.y;
  return p;
}

std::vector<Cell> make_cells(const Grid2D& grid, int dimension) {
  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(grid.x.n) * grid.y.n);
  for (int iy = 0; iy < grid.y.n; ++iy) {
    for (int ix = 0; ix < grid.x.n; ++ix) {
      Cell c;
      c.ix = ix;
      c.iy = iy;
      c.x = grid.x.center(ix);
      c.y = dimension == 2 ? grid.y.center(iy) : 0.0;
      cells.push_back(c);
    }
  }
  return cells;
}

// Runs body(i) for every cell index on a few worker threads. Cells are
// independent, so the output does not depend on scheduling.
template <typename Body>
void for_each_cell(std::size_t count, Body&& body) {
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
  if (workers == 1 || count < 64) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&body, w, workers, count] {
      for (std::size_t i = w; i < count; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

int sign_of(double v) {
  if (std::abs(v) <= kSingularScaling) return 0;
  return v > 0 ? 1 : -1;
}

}  // namespace

StepPair newton_step_pair(const SmoothLoss& loss, const ScalarTransform& t, const Vector& x,
                          double pinv_rel_tol) {
  const Evaluation f = loss.evaluate(x);
  const Evaluation l = compose(loss, t).evaluate(x);
  StepPair out;
  out.step_f = linalg::pinv_solve(f.hessian, f.gradient, pinv_rel_tol);
  out.step_L = linalg::pinv_solve(l.hessian, l.gradient, pinv_rel_tol);
  out.scaling = scaling_factor(t, f.value, f.gradient.dot(out.step_f));
  return out;
}

GridScan scan_sign_flip(const SmoothLoss& loss, const ScalarTransform& t, const Grid2D& grid,
                        std::uint64_t seed, double cross_fraction, double pinv_rel_tol) {
  const int d = loss.dimension();
  validate(grid, d);
  GridScan scan;
  scan.grid = grid;
  scan.cells = make_cells(grid, d);

  // Cross-check selection is drawn up front so it does not depend on
  // evaluation order.
  std::vector<char> cross(scan.cells.size(), 0);
  if (cross_fraction > 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    bool any = false;
    for (auto& flag : cross) {
      flag = unit(rng) < cross_fraction;
      any = any || flag;
    }
    if (!any && !cross.empty()) cross[rng() % cross.size()] = 1;
  }

  for (std::size_t i = 0; i < scan.cells.size(); ++i) {
    Cell& c = scan.cells[i];
    const Vector x = cell_point(c, d);
    try {
      const Evaluation f = loss.evaluate(x);
      const auto dual = linalg::dual_norm_sq(f.hessian, f.gradient, pinv_rel_tol);
      c.scaling = scaling_factor(t, f.value, dual.value);
      c.scaling_sign = sign_of(c.scaling);
      c.final_value = f.value;
      if (cross[i] && std::abs(c.scaling) > 1e-6) {
        const StepPair steps = newton_step_pair(loss, t, x, pinv_rel_tol);
        const double inner = steps.step_f.dot(steps.step_L);
        ++scan.cross_checked;
        if ((inner > 0 ? 1 : -1) != c.scaling_sign) ++scan.cross_mismatches;
      }
    } catch (const std::exception& e) {
      c.error = e.what();
    }
  }
  return scan;
}

GridScan scan_convergence(const SmoothLoss& loss, const std::optional<ScalarTransform>& t,
                          const Grid2D& grid, const NewtonConfig& cfg) {
  const int d = loss.dimension();
  validate(grid, d);
  if (!loss.minimizer()) throw InputError("scan_convergence: loss has no known minimizer");
  const Vector xstar = *loss.minimizer();
  const SmoothLoss driven = t ? compose(loss, *t).as_loss() : loss;
  const SchedulePtr unit = StepsizeSchedule::constant(1.0);
  NewtonConfig local = cfg;
  local.xtol = std::max(cfg.xtol, 1e-6);
  // Flat transformed losses reach tiny gradients far from x*; only the
  // distance test may end a run early.
  local.gtol = 0.0;

  GridScan scan;
  scan.grid = grid;
  scan.cells = make_cells(grid, d);
  for_each_cell(scan.cells.size(), [&](std::size_t i) {
    Cell& c = scan.cells[i];
    const Vector x0 = cell_point(c, d);
    try {
      const IterateTrace trace = run_newton(driven, *unit, x0, local);
      if (trace.iterations == 0 && trace.termination == Termination::DomainError) {
        c.error = trace.message;
        return;
      }
      c.iterations = trace.iterations;
      c.final_value = trace.records.back().f;
      c.converged = (trace.last_x() - xstar).norm() <= 1e-6;
    } catch (const std::exception& e) {
      c.error = e.what();
    }
  });
  return scan;
}

SweepResult best_fixed_stepsize(const SmoothLoss& loss, const Vector& x0,
                                const std::vector<double>& alphas, const NewtonConfig& cfg) {
  if (alphas.empty()) throw InputError("best_fixed_stepsize: empty stepsize list");
  SweepResult out;
  for (double alpha : alphas) {
    const IterateTrace trace = run_newton(loss, *StepsizeSchedule::constant(alpha), x0, cfg);
    SweepRow row;
    row.alpha = alpha;
    row.termination = trace.termination;
    row.converged = trace.termination == Termination::Converged;
    row.iterations = trace.iterations;
    row.final_grad_norm = trace.records.back().grad_norm;
    out.rows.push_back(row);
  }
  auto key = [](const SweepRow& r) {
    const double g = std::isfinite(r.final_grad_norm) ? r.final_grad_norm : HUGE_VAL;
    return std::make_tuple(!r.converged, r.iterations, g, r.alpha);
  };
  const auto best = std::min_element(out.rows.begin(), out.rows.end(),
                                     [&key](const SweepRow& a, const SweepRow& b) { return key(a) < key(b); });
  out.best_alpha = best->alpha;
  out.iterations = best->iterations;
  return out;
}

}  // namespace tnewton::scan
