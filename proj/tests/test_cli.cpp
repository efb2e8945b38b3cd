#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "sphereot/classification.hpp"
#include "sphereot/cli.hpp"
#include "sphereot/diagnostics.hpp"
#include "sphereot/grid_density.hpp"
#include "sphereot/harmonic_transforms.hpp"
#include "sphereot/sliced_distances.hpp"
#include "sphereot/vmf.hpp"
#include "test_support.hpp"

using namespace sphereot;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sphereot_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    prev_ = set_warning_handler([](const std::string&) {});
  }
  void TearDown() override {
    set_warning_handler(prev_);
    fs::remove_all(dir_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static int run(std::vector<std::string> args) {
    args.insert(args.begin(), "sphereot");
    return cli::run(args);
  }
  // Runs and returns stdout; the exit code goes to `code`.
  static std::string run_capture(std::vector<std::string> args, int& code) {
    ::testing::internal::CaptureStdout();
    code = run(std::move(args));
    return ::testing::internal::GetCapturedStdout();
  }
  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
  WarningHandler prev_;
};

double sphere_mass(const GridDensity& d) {
  const SphereGrid g(d.grid.band_limit);
  return weighted_sum(d.values, g.weights());
}

}  // namespace

TEST_F(Cli, GenVmfWritesUnitMassDensity) {
  ASSERT_EQ(run({"gen-vmf", "-N", "8", "--kappa", "20", "--mean", "0.3,1.0", path("a.csv")}), 0);
  const auto d = read_grid_density_file(path("a.csv"));
  EXPECT_EQ(d.grid.kind, GridKind::sphere);
  EXPECT_EQ(d.grid.band_limit, 8);
  EXPECT_NEAR(sphere_mass(d), 1.0, 1e-12);
  const auto ref = vmf_density(VmfSpec::single(20, sph(0.3, 1.0)), SphereGrid(8));
  EXPECT_EQ(d.values, ref);
}

TEST_F(Cli, GenVmfMixtureAndSymmetrize) {
  ASSERT_EQ(run({"gen-vmf", "-N", "6", "--kappa", "10", "--mean", "0,1", "--mix", "0.25,5,1,2", "--symmetrize",
                 path("m.csv")}),
            0);
  VmfSpec s;
  s.components = {{0.75, 10, sph(0, 1)}, {0.25, 5, sph(1, 2)}};
  s.symmetrize = true;
  EXPECT_EQ(read_grid_density_file(path("m.csv")).values, vmf_density(s, SphereGrid(6)));
  EXPECT_EQ(run({"gen-vmf", "--mix", "1.5,5,1,2", path("x.csv")}), 2);
}

TEST_F(Cli, TransformPreservesMass) {
  ASSERT_EQ(run({"gen-vmf", "-N", "8", "--kappa", "20", "--mean", "0.3,1.0", path("a.csv")}), 0);
  ASSERT_EQ(run({"transform", "--op", "w", path("a.csv"), path("w.csv")}), 0);
  const auto w = read_grid_density_file(path("w.csv"));
  ASSERT_EQ(w.grid.kind, GridKind::so3);
  const SO3Grid so3(8, w.grid.gamma_count);
  EXPECT_NEAR(weighted_sum(w.values, so3.weights()), 1.0, 1e-9);
  ASSERT_EQ(run({"transform", "--op", "v", path("a.csv"), path("v.csv")}), 0);
  const auto v = read_grid_density_file(path("v.csv"));
  ASSERT_EQ(v.grid.kind, GridKind::cylinder);
  EXPECT_NEAR(weighted_sum(v.values, CylinderGrid(8).weights()), 1.0, 1e-9);
}

TEST_F(Cli, InvertRoundTrip) {
  ASSERT_EQ(run({"gen-vmf", "-N", "8", "--kappa", "5", "--mean", "0.3,1.0", path("a.csv")}), 0);
  ASSERT_EQ(run({"transform", "--op", "w", path("a.csv"), path("w.csv")}), 0);
  ASSERT_EQ(run({"invert", "--op", "w", "--mode", "pinv", path("w.csv"), path("f.csv")}), 0);
  const auto a = read_grid_density_file(path("a.csv")), f = read_grid_density_file(path("f.csv"));
  EXPECT_EQ(f.grid, a.grid);
  EXPECT_LE(sphereot::testing::relative_error(f.values, a.values, SphereGrid(8).weights(), 2), 0.05);
  ASSERT_EQ(run({"invert", "--transform", "w", "--mode", "reg", "--iters", "20", "--trace", path("t.csv"), path("w.csv"),
                 path("r.csv")}),
            0);
  const auto r = read_grid_density_file(path("r.csv"));
  EXPECT_NEAR(sphere_mass(r), 1.0, 1e-12);
  for (double x : r.values) EXPECT_GE(x, 0.0);
  std::ifstream trace(path("t.csv"));
  std::string line;
  int rows = 0;
  std::getline(trace, line);
  EXPECT_EQ(line, "iteration,objective");
  while (std::getline(trace, line)) ++rows;
  EXPECT_EQ(rows, 20);
}

TEST_F(Cli, InvertRejectsMismatchedGrid) {
  ASSERT_EQ(run({"gen-vmf", "-N", "6", path("a.csv")}), 0);
  ASSERT_EQ(run({"transform", "--op", "v", path("a.csv"), path("v.csv")}), 0);
  EXPECT_EQ(run({"invert", "--op", "w", path("v.csv"), path("f.csv")}), 2);
}

TEST_F(Cli, DistanceOfIdenticalInputsIsZero) {
  ASSERT_EQ(run({"gen-vmf", "-N", "8", "--kappa", "20", "--mean", "0.3,1.0", path("a.csv")}), 0);
  ASSERT_EQ(run({"gen-vmf", "-N", "8", "--kappa", "20", "--mean", "2.0,2.0", path("b.csv")}), 0);
  for (const std::string metric : {"vsw", "ssw"}) {
    int code = -1;
    EXPECT_EQ(std::stod(run_capture({"distance", "--metric", metric, path("a.csv"), path("a.csv")}, code)), 0.0);
    EXPECT_EQ(code, 0);
    const double ab = std::stod(run_capture({"distance", "--metric", metric, path("a.csv"), path("b.csv")}, code));
    const double ba = std::stod(run_capture({"distance", "--metric", metric, path("b.csv"), path("a.csv")}, code));
    EXPECT_GT(ab, 0.0);
    EXPECT_EQ(ab, ba);
  }
}

TEST_F(Cli, DistanceOnAtoms) {
  {
    std::ofstream a(path("a.txt")), b(path("b.txt"));
    a << "# atoms\nx,y,z,mass\n1,0,0,0.5\n0,0,1,0.5\n";
    b << "# atoms\n-1,0,0,1\n";
  }
  DiscreteMeasureS2 mu, nu;
  mu.points = {UnitVector(1, 0, 0), UnitVector(0, 0, 1)};
  mu.masses = {0.5, 0.5};
  nu.points = {UnitVector(-1, 0, 0)};
  nu.masses = {1.0};
  SlicedConfig cfg;
  cfg.slices = 128;
  cfg.zenith_band_limit = 4;
  int code = -1;
  const double dv = std::stod(run_capture(
      {"distance", "--atoms", "--metric", "vsw", "--slices", "128", "-N", "4", path("a.txt"), path("b.txt")}, code));
  EXPECT_EQ(code, 0);
  EXPECT_EQ(dv, vsw(mu, nu, cfg));
  EXPECT_GT(dv, 0.0);
  const double ds = std::stod(
      run_capture({"distance", "--atoms", "--metric", "ssw", "-N", "4", path("a.txt"), path("b.txt")}, code));
  EXPECT_EQ(code, 0);
  EXPECT_EQ(ds, ssw(mu, nu, cfg));
  std::ofstream(path("bad.txt")) << "0,0,1\n";
  EXPECT_EQ(run({"distance", "--atoms", "--metric", "vsw", path("a.txt"), path("bad.txt")}), 2);
}

TEST_F(Cli, InterpolateEndpoint) {
  ASSERT_EQ(run({"gen-vmf", "-N", "12", "--kappa", "20", "--mean", "0.5,0.8", "--symmetrize", path("a.csv")}), 0);
  ASSERT_EQ(run({"gen-vmf", "-N", "12", "--kappa", "20", "--mean", "2.0,1.2", "--symmetrize", path("b.csv")}), 0);
  ASSERT_EQ(run({"interpolate", "--op", "v", "--delta", "0", path("a.csv"), path("b.csv"), path("i.csv")}), 0);
  const auto a = read_grid_density_file(path("a.csv")), i = read_grid_density_file(path("i.csv"));
  EXPECT_LE(sphereot::testing::relative_error(i.values, a.values, SphereGrid(12).weights(), 2), 0.05);
  EXPECT_EQ(run({"interpolate", "--op", "v", "--delta", "2", path("a.csv"), path("b.csv"), path("i.csv")}), 2);
}

TEST_F(Cli, DatasetAndClassifyAreDeterministic) {
  ASSERT_EQ(run({"gen-dataset", "-N", "6", "--id", "4", "--seed", "3", "--per-class", "10", "--config", path("c.json"),
                 path("d1.csv")}),
            0);
  ASSERT_EQ(run({"gen-dataset", "-N", "6", "--id", "4", "--seed", "3", "--per-class", "10", path("d2.csv")}), 0);
  const std::string d1 = slurp(path("d1.csv"));
  EXPECT_FALSE(d1.empty());
  EXPECT_EQ(d1, slurp(path("d2.csv")));
  const auto cfg = nlohmann::json::parse(slurp(path("c.json")));
  EXPECT_EQ(cfg["samples"].size(), 20u);

  int code = -1;
  const auto out1 = run_capture({"classify", "--features", "v", "--folds", "5", "--pca", "10", "--features-out",
                                 path("f1.csv"), "--results", path("r.csv"), path("d1.csv")},
                                code);
  ASSERT_EQ(code, 0);
  const auto out2 = run_capture({"classify", "--features", "v", "--folds", "5", "--pca", "10", "--features-out",
                                 path("f2.csv"), "--results", path("r.csv"), path("d1.csv")},
                                code);
  EXPECT_EQ(out1, out2);
  EXPECT_EQ(slurp(path("f1.csv")), slurp(path("f2.csv")));
  std::ifstream res(path("r.csv"));
  std::string line;
  int rows = 0;
  while (std::getline(res, line)) ++rows;
  EXPECT_EQ(rows, 3);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({"bogus"}), 2);
  EXPECT_EQ(run({"transform", "--op", "v", path("missing.csv"), path("o.csv")}), 2);
  ASSERT_EQ(run({"gen-vmf", "-N", "4", path("a.csv")}), 0);
  EXPECT_EQ(run({"transform", "--op", "q", path("a.csv"), path("o.csv")}), 2);
  EXPECT_EQ(run({"distance", "--metric", "vsw", "--p", "0.5", path("a.csv"), path("a.csv")}), 2);
  EXPECT_EQ(run({"gen-dataset", "--id", "9", path("d.csv")}), 2);
  EXPECT_EQ(run({"gen-vmf", "--kappa", "-1", path("b.csv")}), 2);
  std::ofstream(path("nan.csv")) << "# grid=sphere N=1\n1\nnan\n0\n0\n";
  EXPECT_NE(run({"transform", "--op", "v", path("nan.csv"), path("o.csv")}), 0);
  ::testing::internal::CaptureStdout();
  EXPECT_EQ(run({"--help"}), 0);
  EXPECT_NE(::testing::internal::GetCapturedStdout().find("transform"), std::string::npos);
}
