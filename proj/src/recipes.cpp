#include "tnewton/recipes.hpp"

#include "tnewton/convexify.hpp"
#include "tnewton/csv.hpp"
#include "tnewton/errors.hpp"
#include "tnewton/starconvex.hpp"
#include "tnewton/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace tnewton::recipes {

namespace fs = std::filesystem;

namespace {

std::string num(double v) { return csv::fmt(v); }

scan::Grid2D default_grid(const Options& opts) {
  return opts.grid.value_or(scan::Grid2D{scan::Axis{-4.0, 4.0, 200}, scan::Axis{-4.0, 4.0, 200}});
}

template <typename Writer>
void write_file(Outcome& out, const fs::path& path, Writer&& writer) {
  auto os = csv::open_output(path);
  writer(os);
  os.flush();
  if (!os) throw IoError("failed writing '" + path.string() + "'");
  out.files.push_back(path);
}

void check(Outcome& out, bool condition, const std::string& what) {
  out.lines.push_back(std::string(condition ? "ok   " : "FAIL ") + what);
  out.ok = out.ok && condition;
}

double max_iterate_gap(const IterateTrace& a, const IterateTrace& b) {
  const std::size_t n = std::min(a.records.size(), b.records.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    worst = std::max(worst, (a.records[i].x - b.records[i].x).norm() / (1.0 + a.records[i].x.norm()));
  }
  return worst;
}

Outcome fig1(const Options& opts) {
  Outcome out;
  const SmoothLoss f = zoo::parse_loss("cauchy1d");
  const SmoothLoss l = zoo::parse_loss("star_cauchy1d");
  const Vector x0 = Vector::Constant(1, 0.8);
  const SchedulePtr unit = StepsizeSchedule::constant(1.0);
  const SchedulePtr induced = StepsizeSchedule::induced(unit, *zoo::parse_transform("star:cauchy"));

  NewtonConfig cfg;
  cfg.xtol = 1e-12;
  const IterateTrace tf = run_newton(f, *unit, x0, cfg);
  const IterateTrace tl = run_newton(l, *unit, x0, cfg);
  const IterateTrace ti = run_newton(f, *induced, x0, cfg);

  write_file(out, opts.out_dir / "trace_f_diverges.csv", [&](std::ostream& os) { csv::write_trace(os, tf); });
  write_file(out, opts.out_dir / "trace_L.csv", [&](std::ostream& os) { csv::write_trace(os, tl); });
  write_file(out, opts.out_dir / "trace_induced.csv", [&](std::ostream& os) { csv::write_trace(os, ti); });

  const double first = tf.records.size() > 1 ? tf.records[1].x(0) : NAN;
  const double gap = max_iterate_gap(tl, ti);
  check(out, std::abs(first + 2.844) <= 1e-3, "unit Newton on f: first iterate " + num(first));
  check(out, tf.termination == Termination::Diverged,
        "unit Newton on f terminates " + std::string(to_string(tf.termination)));
  check(out, tl.termination == Termination::Converged && std::abs(tl.last_x()(0)) <= 1e-8,
        "unit Newton on L terminates " + std::string(to_string(tl.termination)) + " at " + num(tl.last_x()(0)));
  check(out, ti.termination == Termination::Converged,
        "induced schedule on f terminates " + std::string(to_string(ti.termination)));
  check(out, tl.records.size() == ti.records.size() && gap <= 1e-8,
        "induced vs L iterate deviation " + num(gap));
  return out;
}

Outcome sign_flip_family(const Options& opts, const std::string& loss_name,
                         const std::vector<std::string>& transforms, const std::string& must_flip) {
  Outcome out;
  const SmoothLoss loss = zoo::parse_loss(loss_name);
  const scan::Grid2D grid = default_grid(opts);
  for (const auto& spec : transforms) {
    const ScalarTransform t = *zoo::parse_transform(spec);
    const scan::GridScan s = scan::scan_sign_flip(loss, t, grid, opts.seed);
    std::string file = "flip_" + loss_name + "_" + spec + ".csv";
    std::replace(file.begin(), file.end(), ':', '_');
    write_file(out, opts.out_dir / file, [&](std::ostream& os) { csv::write_scan(os, s, csv::ScanKind::SignFlip); });
    std::ostringstream line;
    line << spec << ": +1 " << s.count_sign(1) << ", -1 " << s.count_sign(-1) << ", 0 " << s.count_sign(0)
         << ", errors " << s.count_errors() << ", cross-checked " << s.cross_checked;
    check(out, s.cross_mismatches == 0, line.str() + ", mismatches " + std::to_string(s.cross_mismatches));
    if (spec == must_flip) check(out, s.count_sign(-1) > 0, spec + " has a negative-scaling region");
  }
  return out;
}

Outcome fig3(const Options& opts) {
  Outcome out;
  const scan::Grid2D grid = default_grid(opts);
  for (const std::string loss_name : {"beale", "goldstein_price"}) {
    const SmoothLoss loss = zoo::parse_loss(loss_name);
    std::vector<int> counts;
    for (const std::string spec : {"poly:r=0.5", "poly:r=1", "poly:r=2"}) {
      const scan::GridScan s = scan::scan_convergence(loss, zoo::parse_transform(spec), grid);
      std::string file = "conv_" + loss_name + "_" + spec + ".csv";
      std::replace(file.begin(), file.end(), ':', '_');
      write_file(out, opts.out_dir / file,
                 [&](std::ostream& os) { csv::write_scan(os, s, csv::ScanKind::Convergence); });
      counts.push_back(s.count_converged());
      out.lines.push_back("     " + loss_name + " " + spec + ": converged " + std::to_string(s.count_converged()) +
                          " of " + std::to_string(s.cells.size()) + ", errors " +
                          std::to_string(s.count_errors()));
    }
    check(out, std::adjacent_find(counts.begin(), counts.end(), std::not_equal_to<>()) != counts.end(),
          loss_name + ": converged-cell counts differ across r");
  }
  return out;
}

Outcome table1_check(const Options& opts) {
  Outcome out;
  const auto rows = equivalence_suite();
  int qualified = 0;
  std::map<std::string, double> worst;
  for (const auto& r : rows) {
    if (!r.qualifies) continue;
    ++qualified;
    worst[r.transform] = std::max(worst[r.transform], r.result.max_deviation);
  }
  write_file(out, opts.out_dir / "table1_check.csv", [&](std::ostream& os) {
    os << "loss,transform,alpha,common_iterations,min_abs_scaling,max_deviation,qualifies\n";
    for (const auto& r : rows) {
      os << r.loss << ',' << csv::sanitize(r.transform) << ',' << num(r.alpha) << ',' << r.result.common_iterations
         << ',' << num(r.result.min_abs_scaling) << ',' << num(r.result.max_deviation) << ','
         << (r.qualifies ? 1 : 0) << '\n';
    }
  });
  for (const auto& [name, dev] : worst) check(out, dev <= 1e-8, name + ": max deviation " + num(dev));
  check(out, qualified >= 30, std::to_string(qualified) + " of " + std::to_string(rows.size()) + " runs qualify");
  return out;
}

Outcome table3(const Options& opts) {
  Outcome out;
  struct Row {
    std::string loss;
    double expected;
    double found;
    double curvature;
  };
  std::vector<Row> rows;
  const NewtonConfig cfg;
  for (const std::string kind : {"geman_mcclure", "welsh", "cauchy"}) {
    const RadialLoss radial = make_radial(kind, Vector::Zero(1));
    const SmoothLoss original = as_1d_loss(radial);
    const SmoothLoss star_loss = star::radial_star_loss(radial).loss;
    auto curvature = [](const SmoothLoss& l) {
      return star::positive_curvature_radius(
          [&l](double r) { return l.evaluate(Vector::Constant(1, r)).hessian(0, 0); }, 20.0);
    };
    const double expected_original = kind == "geman_mcclure" ? 1.0 / std::sqrt(3.0)
                                     : kind == "welsh"       ? 1.0 / std::sqrt(2.0)
                                                             : 1.0;
    const double expected_star = kind == "cauchy" ? INFINITY : 1.0;
    rows.push_back({original.name(), expected_original, star::convergence_radius(original, 0.5, cfg).radius,
                    curvature(original)});
    rows.push_back({star_loss.name(), expected_star, star::convergence_radius(star_loss, 0.5, cfg).radius,
                    curvature(star_loss)});
  }
  write_file(out, opts.out_dir / "table3.csv", [&](std::ostream& os) {
    os << "loss,expected_radius,newton_radius,positive_curvature_radius\n";
    for (const auto& r : rows) {
      os << r.loss << ',' << num(r.expected) << ',' << num(r.found) << ',' << num(r.curvature) << '\n';
    }
  });
  for (const auto& r : rows) {
    const bool match = std::isinf(r.expected) ? std::isinf(r.found) : std::abs(r.found - r.expected) <= 1e-3;
    check(out, match,
          r.loss + ": Newton radius " + num(r.found) + ", expected " + num(r.expected) +
              " (positive-curvature radius " + num(r.curvature) + ")");
  }
  return out;
}

Outcome polytope(const Options& opts) {
  Outcome out;
  const auto alphas = convexify::arange(0.1, 4.0, 0.05);
  const auto rows = polytope_sweep(alphas);
  double prev = -INFINITY;
  for (const auto& r : rows) {
    const int p = static_cast<int>(r.p);
    write_file(out, opts.out_dir / ("sweep_polytope_p=" + std::to_string(p) + ".csv"),
               [&](std::ostream& os) { csv::write_sweep(os, r.sweep); });
    const double a = r.sweep.best_alpha;
    check(out, a >= r.p - 1.15 && a <= r.p - 0.9,
          "p=" + std::to_string(p) + ": best alpha " + num(a) + " after " + std::to_string(r.sweep.iterations) +
              " iterations");
    check(out, a >= prev, "p=" + std::to_string(p) + ": best alpha non-decreasing in p");
    prev = a;
  }
  return out;
}

Outcome lemma3(const Options& opts) {
  Outcome out;
  const SmoothLoss f = zoo::parse_loss("rosenbrock");
  const ScalarTransform t = *zoo::parse_transform("exp:a=1");
  Vector x(2);
  x << -0.5, 0.5;
  const double lambda = 0.1;
  const LmResidual res = lm_invariance_residual(f, t, x, lambda);
  const Vector step_f = lm_step(f, x, lambda);
  const SmoothLoss l = compose(f, t).as_loss();
  write_file(out, opts.out_dir / "lemma3.csv", [&](std::ostream& os) {
    os << "lambda_phi,residual\n";
    for (double e = -4.0; e <= 4.0 + 1e-12; e += 0.05) {
      const double lp = std::pow(10.0, e);
      double r = NAN;
      try {
        r = (step_f - lm_step(l, x, lp)).norm();
      } catch (const PreconditionError&) {
      }
      os << num(lp) << ',' << num(r) << '\n';
    }
  });
  check(out, res.residual > 1e-6,
        "best scalar lambda_phi " + num(res.best_lambda) + " leaves residual " + num(res.residual));
  return out;
}

}  // namespace

std::vector<EquivalenceRow> equivalence_suite() {
  struct Start {
    const char* loss;
    double x;
    double y;
  };
  const Start starts[] = {{"rosenbrock", -1.2, 1.0}, {"beale", 2.5, 0.3}, {"goldstein_price", 0.2, -0.8}};
  const char* transforms[] = {"linear:a=2:b=5", "poly:r=2", "exp:a=0.1", "log:a=1", "sigmoid"};
  NewtonConfig cfg;
  cfg.gtol = 0.0;
  cfg.xtol = 0.0;
  cfg.max_iters = 12;

  std::vector<EquivalenceRow> rows;
  for (const auto& s : starts) {
    const SmoothLoss loss = zoo::parse_loss(s.loss);
    Vector x0(2);
    x0 << s.x, s.y;
    for (const char* spec : transforms) {
      const ScalarTransform t = *zoo::parse_transform(spec);
      for (double alpha : {0.25, 0.5, 1.0}) {
        EquivalenceRow row;
        row.loss = s.loss;
        row.transform = t.name();
        row.alpha = alpha;
        row.result = run_equivalence(loss, t, StepsizeSchedule::constant(alpha), x0, cfg);
        // The L-run must shadow the whole f-run; exact landings on the
        // minimizer may end a run before the 12-step budget.
        row.qualifies = row.result.common_iterations == row.result.trace_f.iterations &&
                        row.result.common_iterations > 0 && !row.result.truncated_by_range &&
                        row.result.min_abs_scaling > 1e-6;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

NewtonConfig polytope_config() {
  NewtonConfig cfg;
  cfg.max_iters = 500;
  cfg.gtol = 1e-10;
  cfg.xtol = 0.0;
  return cfg;
}

std::vector<PolytopeRow> polytope_sweep(const std::vector<double>& alphas, std::uint64_t seed) {
  std::vector<PolytopeRow> rows;
  for (double p : {2.0, 3.0, 4.0, 5.0}) {
    const SmoothLoss loss = make_polytope(random_polytope(10, 20, p, seed));
    PolytopeRow row;
    row.p = p;
    row.sweep = scan::best_fixed_stepsize(loss, Vector::Constant(10, 10.0), alphas, polytope_config());
    rows.push_back(std::move(row));
  }
  return rows;
}

Outcome run(std::string_view name, const Options& opts) {
  if (name == "fig1") return fig1(opts);
  if (name == "fig2") {
    return sign_flip_family(opts, "beale", {"poly:r=0.1", "poly:r=0.25", "poly:r=0.5", "poly:r=2"}, "poly:r=0.25");
  }
  if (name == "fig3") return fig3(opts);
  if (name == "fig5") return sign_flip_family(opts, "beale", {"log:a=0.5", "log:a=1", "log:a=2"}, "log:a=1");
  if (name == "table1_check") return table1_check(opts);
  if (name == "table3") return table3(opts);
  if (name == "polytope_sweep") return polytope(opts);
  if (name == "lemma3_demo") return lemma3(opts);
  throw InputError("unknown recipe '" + std::string(name) + "'");
}

}  // namespace tnewton::recipes
