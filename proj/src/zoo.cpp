#include "tnewton/zoo.hpp"

#include "tnewton/convexify.hpp"
#include "tnewton/errors.hpp"
#include "tnewton/starconvex.hpp"

#include <charconv>
#include <random>

namespace tnewton::zoo {

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(std::string_view token) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || token.empty()) {
    throw InputError("not a number: '" + std::string(token) + "'");
  }
  return v;
}

int to_int(std::string_view token) {
  const double v = to_double(token);
  if (v != static_cast<double>(static_cast<long long>(v))) {
    throw InputError("not an integer: '" + std::string(token) + "'");
  }
  return static_cast<int>(v);
}

}  // namespace

double SpecTokens::number(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : to_double(it->second);
}

double SpecTokens::required_number(const std::string& key) const {
  const auto it = params.find(key);
  if (it == params.end()) throw InputError("'" + name + "' needs parameter '" + key + "'");
  return to_double(it->second);
}

SpecTokens tokenize(std::string_view spec) {
  if (spec.empty()) throw InputError("empty spec");
  const auto parts = split(spec, ':');
  SpecTokens out;
  out.name = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string::npos) {
      out.positional.push_back(parts[i]);
    } else {
      out.params[parts[i].substr(0, eq)] = parts[i].substr(eq + 1);
    }
  }
  return out;
}

Matrix random_spd(int dimension, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix q(dimension, dimension);
  for (int i = 0; i < dimension; ++i) {
    for (int j = 0; j < dimension; ++j) q(i, j) = normal(rng);
  }
  Matrix a = q.transpose() * q / dimension + Matrix::Identity(dimension, dimension);
  return 0.5 * (a + a.transpose());
}

SmoothLoss parse_loss(std::string_view spec) {
  const SpecTokens t = tokenize(spec);
  const std::string& n = t.name;
  if (n == "rosenbrock" || n == "beale" || n == "goldstein_price" || n == "goldstein-price") {
    return make_benchmark(n);
  }
  for (const char* radial : {"cauchy", "welsh", "geman_mcclure"}) {
    const std::string base(radial);
    if (n == base + "1d") return as_1d_loss(make_radial(base, Vector::Zero(1)));
    if (n == "star_" + base + "1d") return star::radial_star_loss(make_radial(base, Vector::Zero(1))).loss;
  }
  if (n == "counterexample") return make_counterexample();
  if (n == "saddle") return make_saddle();
  if (n == "quadratic") {
    const int d = to_int(t.params.count("d") ? t.params.at("d") : "2");
    if (d < 1) throw InputError("quadratic: d must be >= 1");
    return make_quadratic(Matrix::Identity(d, d));
  }
  if (n == "polynorm") {
    const double p = t.required_number("p");
    const int d = to_int(t.params.count("d") ? t.params.at("d") : "2");
    if (d < 1) throw InputError("polynorm: d must be >= 1");
    const Matrix a = t.params.count("seed")
                         ? random_spd(d, static_cast<std::uint64_t>(to_int(t.params.at("seed"))))
                         : Matrix::Identity(d, d);
    return make_polynorm(a, p);
  }
  if (n == "polytope") {
    const double p = t.number("p", 2.0);
    const int seed = to_int(t.params.count("seed") ? t.params.at("seed") : "7");
    const int d = to_int(t.params.count("d") ? t.params.at("d") : "10");
    const int count = to_int(t.params.count("n") ? t.params.at("n") : "20");
    return make_polytope(random_polytope(d, count, p, static_cast<std::uint64_t>(seed)));
  }
  throw InputError("unknown loss '" + std::string(spec) + "'");
}

std::optional<ScalarTransform> parse_transform(std::string_view spec) {
  const SpecTokens t = tokenize(spec);
  const std::string& n = t.name;
  if (n == "none") return std::nullopt;
  if (n == "linear") return linear_transform(t.number("a", 1.0), t.number("b", 0.0));
  if (n == "poly") return polynomial_transform(t.required_number("r"));
  if (n == "exp") return exponential_transform(t.required_number("a"));
  if (n == "log") return logarithmic_transform(t.required_number("a"));
  if (n == "sigmoid") return sigmoid_transform();
  if (n == "star") {
    if (t.positional.size() != 1) throw InputError("star transform needs a loss name: '" + std::string(spec) + "'");
    return star::star_transform(make_radial(t.positional.front(), Vector::Zero(1)));
  }
  if (n == "expconv") return convexify::exp_convexifier(t.required_number("c"), t.number("fstar", 0.0));
  throw InputError("unknown transform '" + std::string(spec) + "'");
}

SchedulePtr parse_schedule(std::string_view spec, const std::optional<SmoothLoss>& base_loss) {
  const auto colon = spec.find(':');
  const std::string_view head = spec.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);

  if (head == "const") {
    if (rest.empty()) throw InputError("const schedule needs a stepsize: '" + std::string(spec) + "'");
    return StepsizeSchedule::constant(to_double(rest));
  }
  if (head == "armijo") {
    const SpecTokens t = tokenize(spec);
    return StepsizeSchedule::backtracking(t.number("beta", 0.5), t.number("c1", 1e-4),
                                          t.number("alpha0", 1.0));
  }
  if (head == "induced" || head == "forwarded") {
    const auto second = rest.find(':');
    if (second == std::string_view::npos) {
      throw InputError("'" + std::string(spec) + "' must look like " + std::string(head) + ":ALPHA:TRANSFORM");
    }
    const double alpha = to_double(rest.substr(0, second));
    auto transform = parse_transform(rest.substr(second + 1));
    if (!transform) throw InputError("'" + std::string(spec) + "' needs a real transform");
    const SchedulePtr base = StepsizeSchedule::constant(alpha);
    if (head == "induced") return StepsizeSchedule::induced(base, *transform);
    if (!base_loss) throw InputError("forwarded schedule needs the base loss");
    return StepsizeSchedule::forwarded(base, *transform, *base_loss);
  }
  throw InputError("unknown schedule '" + std::string(spec) + "'");
}

scan::Grid2D parse_grid(std::string_view spec) {
  auto axis = [&spec](std::string_view s) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw InputError("bad grid axis '" + std::string(s) + "' in '" + std::string(spec) + "'");
    scan::Axis a{to_double(parts[0]), to_double(parts[1]), to_int(parts[2])};
    if (a.n < 1 || !(a.hi > a.lo)) throw InputError("bad grid axis '" + std::string(s) + "'");
    return a;
  };
  // The separator 'x' sits between the two axis specs.
  const auto pos = spec.find('x');
  scan::Grid2D g;
  if (pos == std::string_view::npos) {
    g.x = axis(spec);
    g.y = scan::Axis{0.0, 0.0, 1};
  } else {
    g.x = axis(spec.substr(0, pos));
    g.y = axis(spec.substr(pos + 1));
  }
  return g;
}

Vector parse_point(std::string_view spec) {
  const auto parts = split(spec, ',');
  Vector v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) v(static_cast<Eigen::Index>(i)) = to_double(parts[i]);
  return v;
}

std::vector<double> parse_range(std::string_view spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw InputError("range must be lo:hi:step, got '" + std::string(spec) + "'");
  return convexify::arange(to_double(parts[0]), to_double(parts[1]), to_double(parts[2]));
}

std::vector<std::string> loss_names() {
  return {"rosenbrock",   "beale",       "goldstein_price",    "cauchy1d",
          "welsh1d",      "geman_mcclure1d", "star_cauchy1d",  "star_welsh1d",
          "star_geman_mcclure1d", "counterexample", "saddle", "quadratic[:d=N]",
          "polynorm:p=P[:d=N][:seed=S]", "polytope:p=P[:seed=S][:d=N][:n=M]"};
}

std::vector<std::string> transform_names() {
  return {"none", "linear:a=A:b=B", "poly:r=R", "exp:a=A", "log:a=A", "sigmoid",
          "star:cauchy", "star:welsh", "star:geman_mcclure", "expconv:c=C[:fstar=F]"};
}

std::vector<std::string> schedule_names() {
  return {"const:ALPHA", "armijo[:beta=B:c1=C]", "induced:ALPHA:TRANSFORM", "forwarded:ALPHA:TRANSFORM"};
}

std::vector<std::string> recipe_names() {
  return {"fig1", "fig2", "fig3", "fig5", "table1_check", "table3", "polytope_sweep", "lemma3_demo"};
}

}  // namespace tnewton::zoo
