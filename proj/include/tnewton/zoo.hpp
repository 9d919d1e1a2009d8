#pragma once

#include "tnewton/losses.hpp"
#include "tnewton/newton.hpp"
#include "tnewton/scans.hpp"
#include "tnewton/transforms.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tnewton::zoo {

/// "name:key=value:key=value" split into a name and its parameters.
struct SpecTokens {
  std::string name;
  std::map<std::string, std::string> params;
  std::vector<std::string> positional;  ///< tokens without '='

  double number(const std::string& key, double fallback) const;
  double required_number(const std::string& key) const;
};

SpecTokens tokenize(std::string_view spec);

/// Losses by name:
///   rosenbrock | beale | goldstein_price
///   cauchy1d | welsh1d | geman_mcclure1d          robust 1D losses, center 0
///   star_cauchy1d | star_welsh1d | star_geman_mcclure1d   closed-form transformed
///   counterexample | saddle | quadratic[:d=2]
///   polynorm:p=3[:d=2][:seed=1]                    A = I, or random SPD from seed
///   polytope:p=2[:seed=7][:d=10][:n=20]
/// Throws InputError naming the offending token.
SmoothLoss parse_loss(std::string_view spec);

/// Transforms: none | linear:a=..:b=.. | poly:r=.. | exp:a=.. | log:a=.. |
/// sigmoid | star:cauchy|welsh|geman_mcclure | expconv:c=..[:fstar=..].
/// "none" yields nullopt.
std::optional<ScalarTransform> parse_transform(std::string_view spec);

/// Schedules: const:ALPHA | armijo[:beta=..:c1=..] | induced:ALPHA:TRANSFORM |
/// forwarded:ALPHA:TRANSFORM (forwarded needs the base loss).
SchedulePtr parse_schedule(std::string_view spec, const std::optional<SmoothLoss>& base_loss = {});

/// "lo:hi:n" for one axis, "lo:hi:nxlo:hi:n" for two.
scan::Grid2D parse_grid(std::string_view spec);

/// "0.8" or "1,2" or "-0.5,0.5".
Vector parse_point(std::string_view spec);

/// "lo:hi:step" inclusive range.
std::vector<double> parse_range(std::string_view spec);

/// Random symmetric positive definite matrix Q^T Q / d + I (seeded).
Matrix random_spd(int dimension, std::uint64_t seed);

std::vector<std::string> loss_names();
std::vector<std::string> transform_names();
std::vector<std::string> schedule_names();
std::vector<std::string> recipe_names();

}  // namespace tnewton::zoo
