#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tnewton/csv.hpp"
#include "tnewton/errors.hpp"
#include "tnewton/recipes.hpp"
#include "tnewton/zoo.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace tnewton;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("tnewton_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run_cli(const std::string& args, const fs::path& out_dir = fs::temp_directory_path()) {
  const std::string cmd = "TNEWTON_OUT_DIR='" + out_dir.string() + "' '" TNEWTON_BIN "' " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("loss specs") {
  CHECK(zoo::parse_loss("beale").name() == "beale");
  CHECK(zoo::parse_loss("polynorm:p=3:d=4:seed=2").dimension() == 4);
  CHECK(zoo::parse_loss("polytope:p=3:seed=7").dimension() == 10);
  CHECK(zoo::parse_loss("star_cauchy1d").dimension() == 1);
  CHECK_THROWS_WITH_AS(zoo::parse_loss("himmelblau"), doctest::Contains("himmelblau"), InputError);
  CHECK_THROWS_WITH_AS(zoo::parse_loss("polynorm:p=abc"), doctest::Contains("abc"), InputError);
  CHECK_THROWS_AS(zoo::parse_loss("polynorm"), InputError);
}

TEST_CASE("transform and schedule specs") {
  CHECK_FALSE(zoo::parse_transform("none"));
  CHECK(zoo::parse_transform("poly:r=0.5")->phi(4.0) == doctest::Approx(2.0));
  CHECK(zoo::parse_transform("star:cauchy")->name() == "star:cauchy");
  CHECK_THROWS_WITH_AS(zoo::parse_transform("cubic:r=2"), doctest::Contains("cubic"), InputError);
  CHECK_THROWS_AS(zoo::parse_transform("star"), InputError);
  CHECK(zoo::parse_schedule("const:0.5")->describe().find("0.5") != std::string::npos);
  CHECK(zoo::parse_schedule("induced:1:star:cauchy")->transform_aware());
  CHECK(zoo::parse_schedule("forwarded:1:exp:a=2", make_benchmark("beale"))->transform_aware());
  CHECK_THROWS_AS(zoo::parse_schedule("forwarded:1:exp:a=2"), InputError);
  CHECK_THROWS_WITH_AS(zoo::parse_schedule("wolfe"), doctest::Contains("wolfe"), InputError);
}

TEST_CASE("grid, point and range specs") {
  const auto g = zoo::parse_grid("-4:4:200x-3:3:100");
  CHECK(g.x.n == 200);
  CHECK(g.y.lo == -3.0);
  CHECK(zoo::parse_grid("-3:3:61").y.n == 1);
  CHECK(zoo::parse_point("1,-2.5").size() == 2);
  CHECK(zoo::parse_range("0.1:4.0:0.05").size() == 79);
  CHECK_THROWS_WITH_AS(zoo::parse_grid("-4:4"), doctest::Contains("-4:4"), InputError);
  CHECK_THROWS_AS(zoo::parse_point("1,,2"), InputError);
}

TEST_CASE("csv number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.844444444444447, 1e-300, 6.02214076e23}) {
    CHECK(std::stod(csv::fmt(v)) == v);
  }
  CHECK(csv::fmt(INFINITY) == "inf");
  CHECK(csv::fmt(-INFINITY) == "-inf");
  CHECK(csv::fmt(NAN) == "nan");
  CHECK(csv::sanitize("a,b\nc") == "a;b;c");
}

TEST_CASE("fig1 recipe writes three traces and reruns byte-identically") {
  const fs::path a = scratch("fig1_a");
  const fs::path b = scratch("fig1_b");
  const auto ra = recipes::run("fig1", {a, 0, std::nullopt});
  const auto rb = recipes::run("fig1", {b, 0, std::nullopt});
  CHECK(ra.ok);
  REQUIRE(ra.files.size() == 3);
  for (const char* f : {"trace_f_diverges.csv", "trace_L.csv", "trace_induced.csv"}) {
    CHECK(slurp(a / f) == slurp(b / f));
  }
  const std::string diverges = slurp(a / "trace_f_diverges.csv");
  CHECK(diverges.rfind("k,x_0,f,grad_norm,alpha,scaling,dual_sq,termination\n", 0) == 0);
  CHECK(diverges.find(",diverged\n") != std::string::npos);
  CHECK(slurp(a / "trace_induced.csv").find(",converged\n") != std::string::npos);
}

TEST_CASE("seeded scan recipe is deterministic") {
  const scan::Grid2D g{scan::Axis{-4, 4, 40}, scan::Axis{-4, 4, 40}};
  const fs::path a = scratch("fig5_a");
  const fs::path b = scratch("fig5_b");
  const auto ra = recipes::run("fig5", {a, 5, g});
  recipes::run("fig5", {b, 5, g});
  REQUIRE_FALSE(ra.files.empty());
  for (const auto& f : ra.files) CHECK(slurp(f) == slurp(b / f.filename()));
  CHECK_THROWS_AS(recipes::run("fig4", {a, 0, std::nullopt}), InputError);
}

TEST_CASE("command-line exit codes") {
  const fs::path dir = scratch("cli");
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("run --loss cauchy1d --x0 0.8 --out t.csv", dir) == 0);
  CHECK(fs::exists(dir / "t.csv"));
  CHECK(run_cli("run --loss nope --x0 0.8", dir) == 2);
  CHECK(run_cli("run --loss beale --x0 0.8", dir) == 2);
  CHECK(run_cli("frobnicate", dir) == 2);
  CHECK(run_cli("run --loss cauchy1d --x0 0.8 --out /proc/forbidden/t.csv", dir) == 4);
  CHECK(run_cli("recipe fig1", dir) == 0);
  CHECK(fs::exists(dir / "trace_L.csv"));
  CHECK(run_cli("recipe table3", dir) == 3);
  CHECK(run_cli("radius --loss cauchy1d --out r.txt", dir) == 0);
  CHECK(slurp(dir / "r.txt").rfind("0.577", 0) == 0);
  CHECK(run_cli("starcheck --loss welsh1d --points 10 --out s.csv", dir) == 0);
  CHECK(run_cli("scan-flip --loss beale --transform poly:r=0.25 --grid -4:4:20x-4:4:20 --out f.csv", dir) == 0);
  CHECK(run_cli("scan-conv --loss beale --grid -4:4:10x-4:4:10 --out c.csv", dir) == 0);
  CHECK(run_cli("sweep-alpha --loss polynorm:p=3:d=2 --alphas 1:3:0.5 --x0 1,1 --out w.csv", dir) == 0);
  CHECK(run_cli("convexify --loss cauchy1d --x0 2 --grid -2:2:0.01 --out x.csv", dir) == 0);
}
