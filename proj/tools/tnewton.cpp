// Command-line front end: single runs, convexification reports, radii,
// star-convexity checks, grid scans, stepsize sweeps and named recipes.

#include "tnewton/convexify.hpp"
#include "tnewton/csv.hpp"
#include "tnewton/errors.hpp"
#include "tnewton/recipes.hpp"
#include "tnewton/starconvex.hpp"
#include "tnewton/zoo.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using namespace tnewton;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

fs::path default_out_dir() {
  const char* env = std::getenv("TNEWTON_OUT_DIR");
  return env && *env ? fs::path(env) : fs::path(".");
}

fs::path resolve(const std::string& out) {
  const fs::path p(out);
  return p.is_absolute() ? p : default_out_dir() / p;
}

// Writes through `writer` to --out, or to stdout when --out is empty.
template <typename Writer>
void emit(const std::string& out, Writer&& writer) {
  if (out.empty() || out == "-") {
    writer(std::cout);
    return;
  }
  const fs::path path = resolve(out);
  auto os = csv::open_output(path);
  writer(os);
  os.flush();
  if (!os) throw IoError("failed writing '" + path.string() + "'");
}

std::string join(const std::vector<std::string>& items) {
  std::string s;
  for (const auto& i : items) s += "\n    " + i;
  return s;
}

struct Common {
  std::string loss = "rosenbrock";
  std::string transform = "none";
  std::string out;
  std::uint64_t seed = 0;
  int max_iters = 100;
  double gtol = 1e-10;
  double xtol = 1e-10;

  NewtonConfig config() const {
    NewtonConfig cfg;
    cfg.max_iters = max_iters;
    cfg.gtol = gtol;
    cfg.xtol = xtol;
    cfg.validate();
    return cfg;
  }
};

void add_newton_options(CLI::App* sub, Common& c) {
  sub->add_option("--max-iters", c.max_iters, "iteration cap")->capture_default_str();
  sub->add_option("--gtol", c.gtol, "gradient-norm tolerance")->capture_default_str();
  sub->add_option("--xtol", c.xtol, "distance-to-minimizer tolerance")->capture_default_str();
}

int cmd_run(const Common& c, const std::string& schedule_spec, const std::string& x0_spec) {
  const SmoothLoss base = zoo::parse_loss(c.loss);
  const auto t = zoo::parse_transform(c.transform);
  const SmoothLoss driven = t ? compose(base, *t).as_loss() : base;
  const SchedulePtr schedule = zoo::parse_schedule(schedule_spec, base);
  const Vector x0 = zoo::parse_point(x0_spec);
  if (x0.size() != base.dimension()) {
    throw InputError("--x0 '" + x0_spec + "' has " + std::to_string(x0.size()) + " coordinates, loss needs " +
                     std::to_string(base.dimension()));
  }
  const IterateTrace trace = run_newton(driven, *schedule, x0, c.config());
  emit(c.out, [&](std::ostream& os) { csv::write_trace(os, trace); });
  std::cerr << "termination=" << to_string(trace.termination) << " iterations=" << trace.iterations << '\n';
  return 0;
}

int cmd_convexify(const Common& c, const std::string& x0_spec, const std::string& grid_spec,
                  const std::string& mode_spec) {
  const SmoothLoss loss = zoo::parse_loss(c.loss);
  if (loss.dimension() > 2) throw InputError("convexify supports 1D and 2D losses, got '" + c.loss + "'");
  const Vector x0 = zoo::parse_point(x0_spec);
  if (x0.size() != loss.dimension()) throw InputError("--x0 '" + x0_spec + "' does not match the loss dimension");
  const auto range = zoo::parse_range(grid_spec);
  const auto grid = convexify::box_grid(range.front(), range.back(), range.size() > 1 ? range[1] - range[0] : 1.0,
                                        loss.dimension());
  convexify::RMode mode;
  if (mode_spec == "general") {
    mode = convexify::RMode::General;
  } else if (mode_spec == "strict") {
    mode = convexify::RMode::Strict;
  } else {
    throw InputError("unknown --mode '" + mode_spec + "'");
  }
  const double cval = convexify::compact_constant(loss, x0, grid, mode);
  const auto rows = convexify::convexify_report(loss, grid, cval, mode);
  emit(c.out, [&](std::ostream& os) { csv::write_convexify_report(os, rows, cval); });
  return 0;
}

int cmd_radius(const Common& c, bool transformed, double bracket) {
  SmoothLoss loss = zoo::parse_loss(c.loss);
  if (transformed) {
    const std::string name = loss.name();
    if (name.size() < 3 || name.substr(name.size() - 2) != "1d") {
      throw InputError("--transformed needs a radial 1D loss, got '" + c.loss + "'");
    }
    loss = zoo::parse_loss("star_" + name);
  }
  const star::RadiusResult r = star::convergence_radius(loss, bracket, c.config());
  emit(c.out, [&](std::ostream& os) {
    os << csv::fmt(r.radius) << '\n';
    if (!r.monotone) os << "# non-monotone convergence predicate\n";
  });
  return 0;
}

int cmd_starcheck(const Common& c, int points) {
  const SmoothLoss base = zoo::parse_loss(c.loss);
  const std::string name = base.name();
  if (base.dimension() != 1 || name.size() < 3 || name.substr(name.size() - 2) != "1d" ||
      name.rfind("star_", 0) == 0) {
    throw InputError("starcheck needs one of cauchy1d, welsh1d, geman_mcclure1d; got '" + c.loss + "'");
  }
  if (points < 1) throw InputError("--points must be positive");
  const RadialLoss radial = make_radial(name.substr(0, name.size() - 2), Vector::Zero(1));
  const star::RadialStar rs = star::radial_star_loss(radial);
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unit(-3.0, 3.0);

  double worst_slack = INFINITY;
  double worst_gap = 0.0;
  emit(c.out, [&](std::ostream& os) {
    os << "x,lambda,lhs,rhs,slack,star_value,closed_form,abs_diff\n";
    for (int i = 0; i < points; ++i) {
      const double x = unit(rng);
      const double lx = rs.loss.value(Vector::Constant(1, x));
      const double sv = star::star_value(base, Vector::Constant(1, x));
      for (int j = 1; j <= 9; ++j) {
        const double lambda = j / 10.0;
        const double lhs = rs.loss.value(Vector::Constant(1, lambda * x));
        const double rhs = lambda * lx;
        worst_slack = std::min(worst_slack, rhs - lhs);
        worst_gap = std::max(worst_gap, std::abs(sv - lx));
        os << csv::fmt(x) << ',' << csv::fmt(lambda) << ',' << csv::fmt(lhs) << ',' << csv::fmt(rhs) << ','
           << csv::fmt(rhs - lhs) << ',' << csv::fmt(sv) << ',' << csv::fmt(lx) << ',' << csv::fmt(std::abs(sv - lx))
           << '\n';
      }
    }
  });
  std::cerr << "min_slack=" << csv::fmt(worst_slack) << " max_closed_form_gap=" << csv::fmt(worst_gap) << '\n';
  return worst_slack >= -1e-10 && worst_gap <= 1e-6 ? 0 : kExitNumerical;
}

int cmd_scan(const Common& c, const std::string& grid_spec, bool flip) {
  const SmoothLoss loss = zoo::parse_loss(c.loss);
  const scan::Grid2D grid = zoo::parse_grid(grid_spec);
  const auto t = zoo::parse_transform(c.transform);
  scan::GridScan s;
  if (flip) {
    if (!t) throw InputError("scan-flip needs --transform");
    s = scan::scan_sign_flip(loss, *t, grid, c.seed);
  } else {
    s = scan::scan_convergence(loss, t, grid, c.config());
  }
  emit(c.out, [&](std::ostream& os) {
    csv::write_scan(os, s, flip ? csv::ScanKind::SignFlip : csv::ScanKind::Convergence);
  });
  if (flip) {
    std::cerr << "plus=" << s.count_sign(1) << " minus=" << s.count_sign(-1) << " zero=" << s.count_sign(0)
              << " errors=" << s.count_errors() << " cross_checked=" << s.cross_checked
              << " cross_mismatches=" << s.cross_mismatches << '\n';
    return s.cross_mismatches == 0 ? 0 : kExitNumerical;
  }
  std::cerr << "converged=" << s.count_converged() << " errors=" << s.count_errors() << '\n';
  return 0;
}

int cmd_sweep(const Common& c, const std::string& alphas_spec, const std::string& x0_spec) {
  const SmoothLoss loss = zoo::parse_loss(c.loss);
  const auto alphas = zoo::parse_range(alphas_spec);
  const Vector x0 =
      x0_spec.empty() ? Vector::Constant(loss.dimension(), 10.0) : zoo::parse_point(x0_spec);
  if (x0.size() != loss.dimension()) throw InputError("--x0 '" + x0_spec + "' does not match the loss dimension");
  const scan::SweepResult r = scan::best_fixed_stepsize(loss, x0, alphas, c.config());
  emit(c.out, [&](std::ostream& os) { csv::write_sweep(os, r); });
  std::cerr << "best_alpha=" << csv::fmt(r.best_alpha) << " iterations=" << r.iterations << '\n';
  return 0;
}

int cmd_recipe(const std::string& name, const std::string& out_dir, std::uint64_t seed,
               const std::string& grid_spec) {
  recipes::Options opts;
  opts.out_dir = out_dir.empty() ? default_out_dir() : fs::path(out_dir);
  opts.seed = seed;
  if (!grid_spec.empty()) opts.grid = zoo::parse_grid(grid_spec);
  const recipes::Outcome outcome = recipes::run(name, opts);
  for (const auto& line : outcome.lines) std::cout << line << '\n';
  for (const auto& f : outcome.files) std::cout << "wrote " << f.string() << '\n';
  if (!outcome.ok) {
    std::cerr << "error: kind=assertion recipe=" << name << '\n';
    return kExitNumerical;
  }
  std::cout << "recipe " << name << ": ok\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Damped Newton under monotone loss transformations"};
  app.require_subcommand(1);
  app.footer("losses:" + join(zoo::loss_names()) + "\ntransforms:" + join(zoo::transform_names()) +
             "\nschedules:" + join(zoo::schedule_names()) + "\nrecipes:" + join(zoo::recipe_names()) +
             "\n\nRelative --out paths resolve against $TNEWTON_OUT_DIR when set." +
             "\nExit codes: 0 ok, 2 usage, 3 numerical failure, 4 I/O.");

  Common c;
  std::string schedule = "const:1";
  std::string x0 = "0.8";
  std::string grid = "-4:4:200x-4:4:200";
  std::string range = "-2:2:0.01";
  std::string mode = "general";
  std::string alphas = "0.1:4.0:0.05";
  std::string sweep_x0;
  std::string recipe_name;
  std::string out_dir;
  std::string recipe_grid;
  bool transformed = false;
  double bracket = 0.5;
  int points = 50;

  auto common = [&c](CLI::App* sub, bool with_transform) {
    sub->add_option("--loss", c.loss, "loss spec")->capture_default_str();
    if (with_transform) sub->add_option("--transform", c.transform, "transform spec")->capture_default_str();
    sub->add_option("--out", c.out, "output file (stdout when omitted)");
    sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
  };

  auto* run = app.add_subcommand("run", "run damped Newton and write the iterate trace");
  common(run, true);
  add_newton_options(run, c);
  run->add_option("--schedule", schedule, "stepsize schedule spec")->capture_default_str();
  run->add_option("--x0", x0, "start point, comma separated")->capture_default_str();

  auto* cvx = app.add_subcommand("convexify", "per-point Schaible coefficient and convexified curvature");
  common(cvx, false);
  cvx->add_option("--x0", x0, "point defining the sublevel set")->capture_default_str();
  cvx->add_option("--grid", range, "lo:hi:step box grid")->capture_default_str();
  cvx->add_option("--mode", mode, "general|strict")->capture_default_str();

  auto* rad = app.add_subcommand("radius", "unit-step Newton convergence radius of a 1D loss");
  common(rad, false);
  add_newton_options(rad, c);
  rad->add_flag("--transformed", transformed, "use the star-convexified loss");
  rad->add_option("--bracket", bracket, "initial bisection bracket")->capture_default_str();

  auto* sc = app.add_subcommand("starcheck", "star-convexity and closed-form checks for a radial 1D loss");
  common(sc, false);
  sc->add_option("--points", points, "sampled points")->capture_default_str();

  auto* flip = app.add_subcommand("scan-flip", "sign of the scaling factor over a grid");
  common(flip, true);
  flip->add_option("--grid", grid, "lo:hi:n[xlo:hi:n]")->capture_default_str();

  auto* conv = app.add_subcommand("scan-conv", "unit-step Newton convergence over a grid");
  common(conv, true);
  add_newton_options(conv, c);
  conv->add_option("--grid", grid, "lo:hi:n[xlo:hi:n]")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep-alpha", "best fixed stepsize over a range");
  common(sweep, false);
  add_newton_options(sweep, c);
  sweep->add_option("--alphas", alphas, "lo:hi:step")->capture_default_str();
  sweep->add_option("--x0", sweep_x0, "start point (default 10 * ones)");

  auto* rec = app.add_subcommand("recipe", "reproduce a named experiment");
  rec->add_option("name", recipe_name, "recipe name")->required();
  rec->add_option("--out-dir", out_dir, "output directory (default $TNEWTON_OUT_DIR or .)");
  rec->add_option("--seed", c.seed, "random seed")->capture_default_str();
  rec->add_option("--grid", recipe_grid, "grid override for scan recipes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run) return cmd_run(c, schedule, x0);
    if (*cvx) return cmd_convexify(c, x0, range, mode);
    if (*rad) return cmd_radius(c, transformed, bracket);
    if (*sc) return cmd_starcheck(c, points);
    if (*flip) return cmd_scan(c, grid, true);
    if (*conv) return cmd_scan(c, grid, false);
    if (*sweep) return cmd_sweep(c, alphas, sweep_x0);
    if (*rec) return cmd_recipe(recipe_name, out_dir, c.seed, recipe_grid);
  } catch (const InputError& e) {
    std::cerr << "error: kind=usage message=" << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: kind=io message=" << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: kind=numerical message=" << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
