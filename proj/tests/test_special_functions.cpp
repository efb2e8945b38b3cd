#include <gtest/gtest.h>

#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/lambert_w.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <boost/math/special_functions/spherical_harmonic.hpp>
#include <cmath>
#include <numbers>

#include "sphereot/diagnostics.hpp"
#include "sphereot/geometry.hpp"
#include "sphereot/special_functions.hpp"
#include "test_support.hpp"

using namespace sphereot;
namespace st = sphereot::testing;

namespace {

constexpr double kPi = std::numbers::pi;

// Explicit finite-sum formula for d^n_{k,j}(beta).
long double wigner_d_sum(int n, int k, int j, long double beta) {
  auto fact = [](int m) { return std::tgamma(static_cast<long double>(m) + 1.0L); };
  const long double c = std::cos(beta / 2), s = std::sin(beta / 2);
  const long double pre = std::sqrt(fact(n + k) * fact(n - k) * fact(n + j) * fact(n - j));
  long double sum = 0.0L;
  for (int q = std::max(0, j - k); q <= std::min(n + j, n - k); ++q) {
    const long double den = fact(n + j - q) * fact(q) * fact(k - j + q) * fact(n - k - q);
    const long double term = std::pow(c, 2 * n + j - k - 2 * q) * std::pow(s, k - j + 2 * q) / den;
    sum += ((k - j + q) % 2 ? -1.0L : 1.0L) * term;
  }
  return pre * sum;
}

}  // namespace

TEST(Legendre, MatchesBoost) {
  for (int n = 0; n <= 30; ++n)
    for (double t : {-1.0, -0.93, -0.2, 0.0, 0.41, 0.999, 1.0})
      EXPECT_NEAR(legendre_p(n, t), boost::math::legendre_p(n, t), 1e-13) << n << ' ' << t;
}

TEST(Legendre, AssociatedMatchesBoostWithPhase) {
  for (int n = 0; n <= 12; ++n)
    for (int k = -n; k <= n; ++k)
      for (double t : {-0.8, -0.1, 0.35, 0.77}) {
        const double ref = boost::math::legendre_p(n, k, t);
        EXPECT_NEAR(assoc_legendre(n, k, t), ref, 1e-11 * std::max(1.0, std::abs(ref))) << n << ' ' << k;
      }
}

TEST(Legendre, NormalizedTableAgreesAndStaysBounded) {
  const int N = 200;
  std::vector<double> table(static_cast<std::size_t>((N + 1) * (N + 2) / 2));
  normalized_assoc_legendre_all(N, 0.3, table);
  for (int n = 0; n <= 15; ++n)
    for (int k = 0; k <= n; ++k) {
      const double ref = std::sqrt((2 * n + 1) / (4 * kPi) * boost::math::factorial<double>(n - k) /
                                   boost::math::factorial<double>(n + k)) *
                         boost::math::legendre_p(n, k, 0.3);
      EXPECT_NEAR(table[static_cast<std::size_t>(n * (n + 1) / 2 + k)], ref, 1e-13);
    }
  for (int n = 0; n <= N; ++n)
    for (int k = 0; k <= n; ++k) {
      const double v = table[static_cast<std::size_t>(n * (n + 1) / 2 + k)];
      ASSERT_TRUE(std::isfinite(v));
      ASSERT_LE(std::abs(v), std::sqrt((2 * n + 1) / (4 * kPi)) + 1e-12);
    }
}

TEST(SphericalHarmonics, MatchesBoost) {
  for (int n = 0; n <= 8; ++n)
    for (int k = -n; k <= n; ++k) {
      const auto ours = sph_harmonic(n, k, 0.7, 1.3);
      const auto ref = boost::math::spherical_harmonic(n, k, 1.3, 0.7);
      EXPECT_NEAR(std::abs(ours - ref), 0.0, 1e-13) << n << ' ' << k;
    }
}

TEST(WignerD, MatchesExplicitSum) {
  for (int n = 0; n <= 12; ++n)
    for (int k = -n; k <= n; ++k)
      for (int j = -n; j <= n; ++j)
        for (double beta : {0.0, 0.3, 1.2, 2.5, kPi}) {
          const double ref = static_cast<double>(wigner_d_sum(n, k, j, beta));
          ASSERT_NEAR(wigner_d(n, k, j, std::cos(beta)), ref, 1e-12) << n << ' ' << k << ' ' << j << ' ' << beta;
        }
}

TEST(WignerD, RowsAreOrthonormalAtHighDegree) {
  const int n = 40;
  const double t = std::cos(1.1);
  std::vector<double> col(n + 1);
  std::vector<std::vector<double>> d(2 * n + 1, std::vector<double>(2 * n + 1));
  for (int k = -n; k <= n; ++k)
    for (int j = -n; j <= n; ++j) {
      wigner_d_column(n, k, j, t, col);
      d[k + n][j + n] = col[n];
    }
  for (int k = -n; k <= n; k += 7)
    for (int kp = -n; kp <= n; kp += 5) {
      double s = 0.0;
      for (int j = 0; j <= 2 * n; ++j) s += d[k + n][j] * d[kp + n][j];
      EXPECT_NEAR(s, k == kp ? 1.0 : 0.0, 1e-11);
    }
}

TEST(WignerD, RotatesSphericalHarmonics) {
  // Y_n^k(Q^T xi) = sum_j D_n^{j,k}(Q) Y_n^j(xi)
  const EulerAngles e{0.4, 1.1, 2.3};
  const Rotation q = euler_matrix(e);
  const UnitVector xi = sph(2.0, 0.9);
  const UnitVector rx = q.transpose() * xi;
  for (int n = 0; n <= 6; ++n)
    for (int k = -n; k <= n; ++k) {
      std::complex<double> s = 0.0;
      for (int j = -n; j <= n; ++j) s += wigner_D(n, j, k, e.alpha, e.beta, e.gamma) * sph_harmonic(n, j, azi(xi), zen(xi));
      EXPECT_NEAR(std::abs(s - sph_harmonic(n, k, azi(rx), zen(rx))), 0.0, 1e-12);
    }
}

TEST(LambertW, MatchesFrozenValuesAndBoost) {
  for (const auto& r : st::oracle()["lambert_w"]) {
    const double z = r["z"];
    const double w = r["w"];
    EXPECT_NEAR(lambert_w(z), w, 1e-14 * std::max(1.0, std::abs(w))) << z;
    EXPECT_NEAR(lambert_w(z), boost::math::lambert_w0(z), 1e-14 * std::max(1.0, std::abs(w))) << z;
  }
}

TEST(LambertW, ResidualAcrossRange) {
  for (int i = 0; i <= 4000; ++i) {
    const double z = i == 0 ? 0.0 : std::pow(10.0, -12.0 + 18.0 * i / 4000.0);
    const double w = lambert_w(z);
    ASSERT_LE(std::abs(w * std::exp(w) - z), 1e-13 * std::max(1.0, z)) << z;
  }
}

TEST(LambertW, ExponentialArgumentAvoidsOverflow) {
  for (double u : {-50.0, 0.0, 10.0, 699.0, 701.0, 1e4, 1e8}) {
    const double w = lambert_w_exp(u);
    ASSERT_TRUE(std::isfinite(w));
    EXPECT_NEAR(w + std::log(w), u, 1e-12 * std::max(1.0, std::abs(u))) << u;
  }
  EXPECT_NEAR(lambert_w_exp(1.0), 1.0, 1e-15);
}

TEST(LambertW, RejectsNegativeInput) {
  EXPECT_THROW(lambert_w(-0.1), std::domain_error);
  EXPECT_THROW(lambert_w_exp(std::nan("")), std::domain_error);
}

TEST(DoubleFactorial, SmallValuesAndLogForm) {
  EXPECT_EQ(double_factorial(-1), 1.0);
  EXPECT_EQ(double_factorial(0), 1.0);
  EXPECT_EQ(double_factorial(7), 105.0);
  EXPECT_EQ(double_factorial(8), 384.0);
  for (int m = -1; m <= 60; ++m)
    EXPECT_NEAR(log_double_factorial(m), std::log(double_factorial(m)), 1e-12 * std::max(1.0, std::log(double_factorial(m))));
}

TEST(SpecialFunctions, InvalidIndicesThrow) {
  EXPECT_THROW(assoc_legendre(2, 3, 0.1), ValidationError);
  EXPECT_THROW(wigner_d(1, 0, 2, 0.1), ValidationError);
  EXPECT_THROW(legendre_p(2, 1.5), std::domain_error);
}
