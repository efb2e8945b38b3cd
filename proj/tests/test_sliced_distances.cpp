#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sphereot/diagnostics.hpp"
#include "sphereot/sliced_distances.hpp"
#include "sphereot/vmf.hpp"
#include "test_support.hpp"

using namespace sphereot;
namespace st = sphereot::testing;

namespace {

constexpr double kPi = std::numbers::pi;

UnitVector random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return sph(2 * kPi * u(rng), std::acos(1 - 2 * u(rng)));
}

DiscreteMeasureS2 random_measure(std::mt19937_64& rng, int n, bool symmetric = false) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  DiscreteMeasureS2 mu;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const UnitVector p = random_point(rng);
    const double m = u(rng);
    mu.points.push_back(p);
    mu.masses.push_back(m);
    s += m;
    if (symmetric) {
      mu.points.push_back(UnitVector(p.x(), p.y(), -p.z()));
      mu.masses.push_back(m);
      s += m;
    }
  }
  for (double& m : mu.masses) m /= s;
  return mu;
}

Rotation random_rotation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return euler_matrix({2 * kPi * u(rng), std::acos(1 - 2 * u(rng)), 2 * kPi * u(rng)});
}

UnitVector vec3(const nlohmann::json& j) { return UnitVector(j[0].get<double>(), j[1].get<double>(), j[2].get<double>()); }

}  // namespace

TEST(VerticalSliced, AntipodalAtoms) {
  const auto& ref = st::oracle()["vsw_antipodal"];
  const DiscreteMeasureS2 mu{{UnitVector(1, 0, 0)}, {1.0}}, nu{{UnitVector(-1, 0, 0)}, {1.0}};
  const SlicedConfig cfg{1.0, ref["slices"].get<int>(), 4};
  EXPECT_NEAR(vsw(mu, nu, cfg), ref["vsw1"].get<double>(), 1e-12);
  EXPECT_NEAR(vsw(mu, nu, {1.0, 4096, 4}), ref["continuum"].get<double>(), 1e-5);
  EXPECT_EQ(vsw(mu, mu, cfg), 0.0);
}

TEST(SemicircleSliced, SingleAtomsMatchDirectEvaluation) {
  const auto& ref = st::oracle()["ssw_single_atoms"];
  const DiscreteMeasureS2 mu{{vec3(ref["a"])}, {1.0}}, nu{{vec3(ref["b"])}, {1.0}};
  const SlicedConfig cfg{ref["p"].get<double>(), 8, 1};
  EXPECT_NEAR(ssw(mu, nu, cfg), ref["ssw"].get<double>(), 1e-9);
  EXPECT_EQ(ssw(mu, mu, cfg), 0.0);
}

TEST(SlicedDistances, MetricAxiomsOnAtoms) {
  std::mt19937_64 rng(1);
  const SlicedConfig cfg{2.0, 32, 6};
  for (int t = 0; t < 20; ++t) {
    const auto a = random_measure(rng, 3), b = random_measure(rng, 4), c = random_measure(rng, 2);
    for (auto d : {+[](const DiscreteMeasureS2& x, const DiscreteMeasureS2& y, const SlicedConfig& k) { return vsw(x, y, k); },
                   +[](const DiscreteMeasureS2& x, const DiscreteMeasureS2& y, const SlicedConfig& k) { return ssw(x, y, k); }}) {
      const double ab = d(a, b, cfg);
      EXPECT_GT(ab, 0.0);
      EXPECT_NEAR(ab, d(b, a, cfg), 1e-10);
      EXPECT_GE(d(a, c, cfg) + d(c, b, cfg) - ab, -1e-10);
    }
    EXPECT_EQ(vsw(a, b, cfg), vsw(b, a, cfg));
  }
}

TEST(VerticalSliced, AxisInvariance) {
  std::mt19937_64 rng(2);
  const SlicedConfig cfg{2.0, 24, 4};
  const auto a = random_measure(rng, 5), b = random_measure(rng, 3);
  EXPECT_TRUE(vsw_axis_invariance_check(a, b, 0, cfg));
  EXPECT_TRUE(vsw_axis_invariance_check(a, b, 1, cfg));
  EXPECT_TRUE(vsw_axis_invariance_check(a, b, 7, cfg));
  // Half a grid step: agreement only up to the trapezoid error.
  const double base = vsw(a, b, cfg);
  const Rotation half = r3(kPi / cfg.slices);
  const double turned = vsw(a.rotated(half), b.rotated(half), cfg);
  EXPECT_NEAR(turned, base, 0.05 * base);
}

TEST(SemicircleSliced, RotationDriftIsSmall) {
  std::mt19937_64 rng(3);
  const SlicedConfig cfg{2.0, 64, 16};
  double worst = 0.0;
  for (int t = 0; t < 6; ++t) {
    const auto a = random_measure(rng, 4), b = random_measure(rng, 4);
    const Rotation q = random_rotation(rng);
    const double d0 = ssw(a, b, cfg), d1 = ssw(a.rotated(q), b.rotated(q), cfg);
    worst = std::max(worst, std::abs(d1 - d0) / d0);
  }
  EXPECT_LE(worst, 0.05);
}

TEST(VerticalSliced, SeparatesSymmetrizedMeasures) {
  std::mt19937_64 rng(4);
  const SlicedConfig cfg{2.0, 64, 4};
  for (int t = 0; t < 50; ++t) {
    const auto a = random_measure(rng, 1 + t % 3, true), b = random_measure(rng, 1 + t % 4, true);
    EXPECT_GT(vsw(a, b, cfg), 1e-6);
  }
}

TEST(SlicedDistances, PowerMeanOrdering) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    const auto a = random_measure(rng, 3), b = random_measure(rng, 3);
    const SlicedConfig c1{1.0, 48, 6}, c2{2.0, 48, 6};
    // Normalized by the slice-space volume: 2 pi for psi, 4 pi for zeniths.
    EXPECT_LE(vsw(a, b, c1) / (2 * kPi), vsw(a, b, c2) / std::sqrt(2 * kPi) + 1e-12);
    EXPECT_LE(ssw(a, b, c1) / (4 * kPi), ssw(a, b, c2) / std::sqrt(4 * kPi) + 1e-12);
  }
}

TEST(SlicedDistances, ConfigValidation) {
  const DiscreteMeasureS2 mu{{UnitVector(1, 0, 0)}, {1.0}};
  EXPECT_THROW(vsw(mu, mu, {2.0, 0, 4}), ValidationError);
  EXPECT_THROW(ssw(mu, mu, {0.5, 8, 4}), ValidationError);
  EXPECT_THROW(ssw(mu, mu, {2.0, 8, -1}), ValidationError);
  const DiscreteMeasureS2 bad{{UnitVector(1, 0, 0)}, {0.5}};
  EXPECT_THROW(vsw(bad, mu, {}), ValidationError);
}

TEST(SliceValues, CarryUnitMass) {
  const int N = 10;
  const VerticalSliceTransform V(N);
  const SemicircleTransform W(N);
  const auto f = vmf_density(VmfSpec::single(8.0, sph(1.0, 0.7)), V.sphere());
  const auto gv = V.apply(f);
  for (int i = 0; i < V.cylinder().psi_count(); i += 5) {
    const auto row = vertical_slice_values(gv, V.cylinder(), i);
    double m = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) m += row[j] * V.cylinder().t_weights()[j];
    EXPECT_NEAR(m, 1.0, 1e-10);
  }
  const auto gw = W.apply(f);
  for (std::size_t z = 0; z < W.sphere().size(); z += 37) {
    const auto row = semicircle_slice_values(gw, W.so3(), z);
    double m = 0.0;
    for (double x : row) m += x * 2 * kPi / W.so3().gamma_count();
    EXPECT_NEAR(m, 1.0, 1e-10);
  }
  EXPECT_EQ(vertical_slice_measures(gv, V.cylinder()).size(), static_cast<std::size_t>(V.cylinder().psi_count()));
  EXPECT_EQ(semicircle_slice_measures(gw, W.so3()).size(), W.sphere().size());
}

TEST(SliceValues, ClippingWarnsOnce) {
  const int N = 8;
  const VerticalSliceTransform V(N);
  const auto f = vmf_density(VmfSpec::single(60.0, sph(0.3, 1.2)), V.sphere());
  std::vector<std::string> msgs;
  const auto prev = set_warning_handler([&](const std::string& m) { msgs.push_back(m); });
  const auto slices = vertical_slice_measures(V.apply(f), V.cylinder(), {1e-12});
  set_warning_handler(prev);
  EXPECT_EQ(msgs.size(), 1u);
  for (const auto& s : slices)
    for (double v : s.values()) EXPECT_GE(v, 0.0);
}

TEST(DensityDistances, GridAlignedRotationAndSymmetry) {
  const int N = 10;
  const VerticalSliceTransform V(N);
  const SemicircleTransform W(N);
  const auto& g = V.sphere();
  const auto f = vmf_density(VmfSpec::single(10.0, sph(0.4, 1.0)), g);
  const auto h = vmf_density(VmfSpec::mixture(10.0, {sph(2.0, 0.5), sph(4.0, 2.0)}), g);
  EXPECT_EQ(vsw(f, f, V, 2.0), 0.0);
  EXPECT_NEAR(ssw(f, f, W, 2.0), 0.0, 1e-9);
  const double d = vsw(f, h, V, 2.0);
  EXPECT_GT(d, 0.0);
  EXPECT_EQ(d, vsw(h, f, V, 2.0));
  EXPECT_NEAR(ssw(f, h, W, 2.0), ssw(h, f, W, 2.0), 1e-9);

  // Rotating by one azimuth step permutes sphere and cylinder grids alike.
  auto turn = [&](const std::vector<double>& x) {
    std::vector<double> y(x.size());
    for (int j = 0; j < g.ring_count(); ++j)
      for (int i = 0; i < g.azimuth_count(); ++i) y[g.index((i + 1) % g.azimuth_count(), j)] = x[g.index(i, j)];
    return y;
  };
  EXPECT_NEAR(vsw(turn(f), turn(h), V, 2.0), d, 1e-12 * d);
  EXPECT_THROW(vsw(f, std::vector<double>(3, 0.0), V, 2.0), ValidationError);
}
