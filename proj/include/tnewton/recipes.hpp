#pragma once

#include "tnewton/newton.hpp"
#include "tnewton/scans.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tnewton::recipes {

/// Seed of the polytope instance used by the stepsize sweep.
inline constexpr std::uint64_t kPolytopeSeed = 7;

struct Options {
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 0;
  std::optional<scan::Grid2D> grid;  ///< overrides the [-4,4]^2 200x200 default
};

struct Outcome {
  bool ok = true;                       ///< every recipe assertion held
  std::vector<std::string> lines;       ///< human-readable summary
  std::vector<std::filesystem::path> files;
};

/// Runs a named recipe; throws InputError for unknown names and IoError when
/// output cannot be written.
Outcome run(std::string_view name, const Options& opts);

struct EquivalenceRow {
  std::string loss;
  std::string transform;
  double alpha = 0.0;
  EquivalenceResult result;
  bool qualifies = false;  ///< L-run shadows the full f-run with |scaling| > 1e-6
};

/// Benchmarks x five transform families x alpha in {0.25, 0.5, 1}, run
/// without stopping tolerances with a 12-iteration budget.
std::vector<EquivalenceRow> equivalence_suite();

struct PolytopeRow {
  double p = 0.0;
  scan::SweepResult sweep;
};

/// Best fixed stepsize for p = 2..5 on the seeded polytope instance,
/// started from 10 * ones.
std::vector<PolytopeRow> polytope_sweep(const std::vector<double>& alphas, std::uint64_t seed = kPolytopeSeed);

/// Newton config used by the polytope sweep.
NewtonConfig polytope_config();

}  // namespace tnewton::recipes
