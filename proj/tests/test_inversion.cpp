#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "sphereot/diagnostics.hpp"
#include "sphereot/inversion.hpp"
#include "sphereot/special_functions.hpp"
#include "sphereot/vmf.hpp"
#include "test_support.hpp"

using namespace sphereot;
namespace st = sphereot::testing;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> vec(const nlohmann::json& j) { return j.get<std::vector<double>>(); }

// Diagonal operator between weighted spaces with equal weights.
class DiagonalOp final : public LinearOperator {
 public:
  DiagonalOp(std::vector<double> d, std::vector<double> w) : d_(std::move(d)), w_(std::move(w)) {}
  std::span<const double> domain_weights() const override { return w_; }
  std::span<const double> codomain_weights() const override { return w_; }
  std::vector<double> apply(std::span<const double> x) const override {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = d_[i] * x[i];
    return y;
  }
  std::vector<double> apply_adjoint(std::span<const double> y) const override { return apply(y); }

 private:
  std::vector<double> d_, w_;
};

bool in_simplex(std::span<const double> f, std::span<const double> w, double tol) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] < 0.0) return false;
    s += w[i] * f[i];
  }
  return std::abs(s - 1.0) <= tol;
}

// Silences expected warnings for the lifetime of the guard.
struct QuietWarnings {
  std::vector<std::string> seen;
  WarningHandler prev;
  QuietWarnings() : prev(set_warning_handler([this](const std::string& m) { seen.push_back(m); })) {}
  ~QuietWarnings() { set_warning_handler(prev); }
};

}  // namespace

TEST(SimplexProjection, MatchesActiveSetOracle) {
  for (const auto& c : st::oracle()["simplex_projection"]) {
    const auto x = vec(c["x"]), w = vec(c["w"]), f = vec(c["f"]);
    const auto p = project_simplex(x, w);
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(p[i], f[i], 1e-9);
  }
}

TEST(SimplexProjection, ExamplesFeasibilityAndIdempotence) {
  const std::vector<double> one{1.0, 1.0};
  const auto p = project_simplex(std::vector<double>{2.0, 0.0}, one);
  EXPECT_NEAR(p[0], 1.0, 1e-15);
  EXPECT_EQ(p[1], 0.0);
  const std::vector<double> in{0.25, 0.75};
  EXPECT_EQ(project_simplex(in, one), in);

  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int t = 0; t < 200; ++t) {
    const std::size_t M = 1 + static_cast<std::size_t>(t % 40);
    std::vector<double> x(M), w(M);
    for (std::size_t i = 0; i < M; ++i) {
      x[i] = 3 * nd(rng);
      w[i] = u(rng);
    }
    const auto f = project_simplex(x, w);
    EXPECT_TRUE(in_simplex(f, w, 1e-14));
    const auto g = project_simplex(f, w);
    for (std::size_t i = 0; i < M; ++i) EXPECT_NEAR(g[i], f[i], 1e-14);
  }
}

TEST(KlDivergence, Examples) {
  const std::vector<double> w{1.0, 1.0};
  EXPECT_NEAR(kl_divergence(std::vector<double>{1.0, 0.0}, std::vector<double>{0.5, 0.5}, w), std::log(2.0), 1e-15);
  const std::vector<double> f{0.3, 0.7};
  EXPECT_EQ(kl_divergence(f, f, w), 0.0);
  const std::vector<double> ones{1.0, 1.0};
  const double negent = 0.3 * std::log(0.3) + 0.7 * std::log(0.7);
  EXPECT_NEAR(kl_divergence(f, ones, w), negent - 1.0 + 2.0, 1e-15);
  EXPECT_EQ(kl_divergence(f, std::vector<double>{1.0, 0.0}, w), INFINITY);
  EXPECT_THROW(kl_divergence(std::vector<double>{-0.1, 1.0}, f, w), ValidationError);
}

TEST(ProxKl, MatchesRootOracle) {
  for (const auto& c : st::oracle()["prox"]) {
    const double x = c["x"], sigma = c["sigma"], a = c["a"], b = c["b"], y = c["y"];
    EXPECT_NEAR(prox_kl_conjugate(x, sigma, a, b), y, 1e-9 * std::max(1.0, std::abs(y)));
  }
}

TEST(ProxKl, ExamplesAndOptimality) {
  EXPECT_EQ(prox_kl_conjugate(0.7, 2.0, 0.3, 0.0), 0.7);
  EXPECT_NEAR(prox_kl_conjugate(1.0, 1.0, 1.0, 1.0), 0.0, 1e-15);
  // Optimality of prox_{sigma F*} with F* (y) = a b (e^{y/a} - 1): y - x + sigma b e^{y/a} = 0.
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-5.0, 5.0), pos(0.01, 3.0);
  for (int t = 0; t < 500; ++t) {
    const double x = u(rng), s = pos(rng), a = pos(rng), b = pos(rng);
    const double y = prox_kl_conjugate(x, s, a, b);
    EXPECT_NEAR(y - x + s * b * std::exp(y / a), 0.0, 1e-9 * std::max(1.0, std::abs(x)));
    // Independent Newton solve of the same scalar equation.
    double z = std::min(x, a * std::log(std::max(1e-300, std::abs(x) + 1.0) / (s * b)));
    for (int it = 0; it < 200; ++it) z -= (z - x + s * b * std::exp(z / a)) / (1 + s * b / a * std::exp(z / a));
    EXPECT_NEAR(y, z, 1e-9 * std::max(1.0, std::abs(z)));
  }
}

TEST(ProxKl, NonexpansiveAndOverflowSafe) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-50.0, 50.0), pos(0.01, 3.0);
  for (int t = 0; t < 1000; ++t) {
    const double s = pos(rng), a = pos(rng), b = pos(rng);
    const double x1 = u(rng), x2 = u(rng);
    EXPECT_LE(std::abs(prox_kl_conjugate(x1, s, a, b) - prox_kl_conjugate(x2, s, a, b)), std::abs(x1 - x2) * (1 + 1e-12));
  }
  const double y = prox_kl_conjugate(1e4, 1.0, 0.1, 1.0);
  EXPECT_TRUE(std::isfinite(y));
  double z = 1.0;
  for (int it = 0; it < 100; ++it) z -= (z + std::exp(z / 0.1) - 1e4) / (1 + 10 * std::exp(z / 0.1));
  EXPECT_NEAR(y, z, 1e-12 * 1e4);
}

TEST(OperatorNorm, KnownOperators) {
  const std::vector<double> w(12, 0.5);
  EXPECT_NEAR(operator_norm(DiagonalOp(std::vector<double>(12, 1.0), w)), 1.0, 1e-12);
  std::vector<double> d(12);
  for (std::size_t i = 0; i < 12; ++i) d[i] = 0.1 * static_cast<double>(i) - 0.5;
  EXPECT_NEAR(operator_norm(DiagonalOp(d, w), 200), 0.6, 1e-6);
  const VerticalSliceTransform V(8);
  EXPECT_NEAR(operator_norm(V), 1.0, 1e-6);
  const SemicircleTransform W(8);
  EXPECT_NEAR(operator_norm(W), sv_semicircle(0), 1e-6);
}

TEST(PrimalDual, UniformDataGivesUniform) {
  const SemicircleTransform W(6);
  const std::vector<double> u(W.domain_size(), 1 / (4 * kPi));
  const auto r = pd_invert(W, W.apply(u), PdParams{});
  EXPECT_EQ(r.iterations, 200);
  for (double x : r.density) EXPECT_NEAR(x, 1 / (4 * kPi), 1e-3);
  EXPECT_TRUE(in_simplex(r.density, W.domain_weights(), 1e-12));
}

TEST(PrimalDual, ConvergesToIndependentOptimum) {
  const auto& fx = st::oracle()["pd_fixture"];
  const int N = fx["band_limit"];
  const SemicircleTransform W(N, 2 * N + 1);
  const auto g = vec(fx["data"]);
  ASSERT_EQ(g.size(), W.codomain_size());
  PdParams prm;
  prm.rho = fx["rho"];
  prm.iterations = 4000;
  const auto r = pd_invert(W, g, prm);
  EXPECT_NEAR(r.objective.back(), fx["objective"].get<double>(), 1e-6);
  const auto ref = vec(fx["density"]);
  EXPECT_LT(st::max_abs_diff(r.density, ref), 1e-4);
}

TEST(PrimalDual, BudgetRunNearLongRunAndWindowMonotone) {
  const auto& fx = st::oracle()["pd_fixture"];
  const int N = fx["band_limit"];
  const SemicircleTransform W(N, 2 * N + 1);
  const auto g = vec(fx["data"]);
  PdParams prm;
  prm.rho = fx["rho"];
  const auto short_run = pd_invert(W, g, prm);
  prm.iterations = 1000;
  const auto long_run = pd_invert(W, g, prm);
  const double best = *std::min_element(long_run.objective.begin(), long_run.objective.end());
  EXPECT_LE(short_run.objective.back(), best * 1.01);
  const auto& obj = long_run.objective;
  for (std::size_t k = 20; k < obj.size(); k += 20) EXPECT_LE(obj[k], obj[k - 20] + 1e-12) << k;
  EXPECT_TRUE(in_simplex(short_run.density, W.domain_weights(), 1e-12));
}

TEST(PrimalDual, LargeRegularizationGivesUniform) {
  const SemicircleTransform W(6);
  // Strictly positive data; clipped zeros would make the data term infeasible.
  const auto f = vmf_density(VmfSpec::single(2.0, sph(0.2, 0.9)), W.sphere());
  PdParams prm;
  prm.rho = 1e4;
  prm.tau = 0.0;
  prm.iterations = 1000;
  const auto r = pd_invert(W, W.apply(f), prm);
  for (double x : r.density) EXPECT_NEAR(x, 1 / (4 * kPi), 1e-3);
}

TEST(PrimalDual, StepConditionAndValidation) {
  const SemicircleTransform W(4);
  const std::vector<double> u(W.codomain_size(), 1 / (8 * kPi * kPi));
  PdParams bad;
  bad.tau = 2.0;
  EXPECT_THROW(pd_invert(W, u, bad), ValidationError);
  bad.check_step = false;
  bad.iterations = 3;
  EXPECT_NO_THROW(pd_invert(W, u, bad));
  PdParams zero_rho;
  zero_rho.rho = 0.0;
  EXPECT_THROW(pd_invert(W, u, zero_rho), ValidationError);
  EXPECT_THROW(pd_invert(W, std::vector<double>(5, 1.0), PdParams{}), ValidationError);
  PdParams autostep;
  autostep.tau = 0.0;
  const auto r = pd_invert(W, u, autostep);
  EXPECT_NEAR(r.tau, 0.9 / (1 + r.operator_norm * r.operator_norm), 1e-15);
}

TEST(PrimalDual, NegativeAndUnnormalizedDataWarn) {
  const SemicircleTransform W(4);
  const auto f = vmf_density(VmfSpec::single(4.0, sph(1.0, 1.0)), W.sphere());
  auto g = W.apply(f);
  g[0] = -1e-3;
  for (double& x : g) x *= 1.5;
  QuietWarnings q;
  PdParams prm;
  prm.iterations = 20;
  const auto r = pd_invert(W, g, prm);
  EXPECT_EQ(q.seen.size(), 2u);
  EXPECT_TRUE(in_simplex(r.density, W.domain_weights(), 1e-12));
}

TEST(PrimalDual, VerticalOperatorFeasibleOutput) {
  const VerticalSliceTransform V(6);
  const auto f = vmf_density(VmfSpec::single(5.0, sph(0.5, 1.3), true), V.sphere());
  const auto r = pd_invert(V, V.apply(f), PdParams{});
  EXPECT_TRUE(in_simplex(r.density, V.domain_weights(), 1e-12));
  EXPECT_LT(st::relative_error(r.density, f, V.domain_weights(), 1.0), 0.5);
}
