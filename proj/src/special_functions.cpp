#include "sphereot/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sphereot/diagnostics.hpp"

namespace sphereot {
namespace {

constexpr double kPi = std::numbers::pi;

double checked_argument(double t) {
  if (!(std::abs(t) <= 1.0 + 1e-12)) {
    throw std::domain_error("argument t=" + std::to_string(t) + " outside [-1,1]");
  }
  return std::clamp(t, -1.0, 1.0);
}

void check_order(int n, int k, const char* name) {
  if (n < 0) throw ValidationError("degree n must be nonnegative");
  if (std::abs(k) > n) {
    throw ValidationError(std::string("order ") + name + "=" + std::to_string(k) + " exceeds degree n=" +
                          std::to_string(n));
  }
}

double log_factorial(int m) { return std::lgamma(static_cast<double>(m) + 1.0); }

// P_s^{(a,b)}(x) for s = 0..smax written to out.
void jacobi_column(int smax, int a, int b, double x, std::span<double> out) {
  out[0] = 1.0;
  if (smax == 0) return;
  out[1] = 0.5 * (2.0 * (a + 1) + (a + b + 2) * (x - 1.0));
  for (int s = 2; s <= smax; ++s) {
    const double ab = a + b;
    const double c = 2.0 * s + ab;
    const double denom = 2.0 * s * (s + ab) * (c - 2.0);
    const double p = (c - 1.0) * (c * (c - 2.0) * x + static_cast<double>(a * a - b * b));
    const double q = 2.0 * (s + a - 1.0) * (s + b - 1.0) * c;
    out[s] = (p * out[s - 1] - q * out[s - 2]) / denom;
  }
}

}  // namespace

double legendre_p(int n, double t) {
  if (n < 0) throw ValidationError("degree n must be nonnegative");
  t = checked_argument(t);
  if (n == 0) return 1.0;
  double p0 = 1.0;
  double p1 = t;
  for (int m = 1; m < n; ++m) {
    const double p2 = ((2.0 * m + 1.0) * t * p1 - m * p0) / (m + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double assoc_legendre(int n, int k, double t) {
  check_order(n, k, "k");
  t = checked_argument(t);
  if (k < 0) {
    const int kk = -k;
    const double ratio = std::exp(log_factorial(n - kk) - log_factorial(n + kk));
    return ((kk % 2) ? -1.0 : 1.0) * ratio * assoc_legendre(n, kk, t);
  }
  // P_k^k = (-1)^k (2k-1)!! (1-t^2)^{k/2}
  const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
  double pkk = 1.0;
  for (int m = 1; m <= k; ++m) pkk *= -(2.0 * m - 1.0) * s;
  if (n == k) return pkk;
  double p0 = pkk;
  double p1 = t * (2.0 * k + 1.0) * pkk;
  for (int m = k + 2; m <= n; ++m) {
    const double p2 = ((2.0 * m - 1.0) * t * p1 - (m + k - 1.0) * p0) / (m - k);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

void normalized_assoc_legendre_all(int N, double t, std::span<double> out) {
  if (N < 0) throw ValidationError("band-limit must be nonnegative");
  if (out.size() < static_cast<std::size_t>((N + 1) * (N + 2) / 2)) {
    throw ValidationError("output span too small for normalized Legendre table");
  }
  t = checked_argument(t);
  const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
  auto at = [&](int n, int k) -> double& { return out[static_cast<std::size_t>(n * (n + 1) / 2 + k)]; };
  double diag = 1.0 / std::sqrt(4.0 * kPi);
  for (int k = 0; k <= N; ++k) {
    if (k > 0) diag *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s;
    at(k, k) = diag;
    if (k + 1 <= N) at(k + 1, k) = std::sqrt(2.0 * k + 3.0) * t * diag;
    for (int n = k + 2; n <= N; ++n) {
      const double a = std::sqrt((4.0 * n * n - 1.0) / (static_cast<double>(n) * n - static_cast<double>(k) * k));
      const double b = std::sqrt((static_cast<double>(n - 1) * (n - 1) - static_cast<double>(k) * k) /
                                 (4.0 * (n - 1.0) * (n - 1.0) - 1.0));
      at(n, k) = a * (t * at(n - 1, k) - b * at(n - 2, k));
    }
  }
}

double normalized_assoc_legendre(int n, int k, double t) {
  check_order(n, k, "k");
  const int kk = std::abs(k);
  std::vector<double> table(static_cast<std::size_t>((n + 1) * (n + 2) / 2));
  normalized_assoc_legendre_all(n, t, table);
  const double v = table[static_cast<std::size_t>(n * (n + 1) / 2 + kk)];
  return (k < 0 && (kk % 2)) ? -v : v;
}

std::complex<double> sph_harmonic(int n, int k, double phi, double theta) {
  check_order(n, k, "k");
  const double p = normalized_assoc_legendre(n, k, std::cos(theta));
  return std::polar(1.0, k * phi) * p;
}

void wigner_d_column(int N, int k, int j, double t, std::span<double> out) {
  const int l0 = std::max(std::abs(k), std::abs(j));
  if (N < l0) throw ValidationError("band-limit below the orders of the Wigner column");
  if (out.size() < static_cast<std::size_t>(N + 1)) throw ValidationError("output span too small for Wigner column");
  t = checked_argument(t);
  // Case analysis of the Jacobi representation; s = smallest of n±k, n±j.
  // a, b are the Jacobi parameters, sign_exp the exponent of (-1).
  int a = 0;
  int sign_exp = 0;
  const int m = std::min({-j, j, -k, k});
  if (m == j) {
    a = k - j;
    sign_exp = k - j;
  } else if (m == -j) {
    a = j - k;
  } else if (m == k) {
    a = j - k;
  } else {
    a = k - j;
    sign_exp = k - j;
  }
  const int b = -2 * m - a;  // 2n - 2s - a with s = n + m
  const double sign = (std::abs(sign_exp) % 2) ? -1.0 : 1.0;
  const int smax = N - l0;
  std::vector<double> jac(static_cast<std::size_t>(smax + 1));
  jacobi_column(smax, a, b, t, jac);
  const double half_sin2 = 0.5 * (1.0 - t);  // sin^2(beta/2)
  const double half_cos2 = 0.5 * (1.0 + t);  // cos^2(beta/2)
  double log_trig = 0.0;
  bool trig_zero = false;
  if (a > 0) {
    if (half_sin2 <= 0.0) trig_zero = true; else log_trig += 0.5 * a * std::log(half_sin2);
  }
  if (b > 0) {
    if (half_cos2 <= 0.0) trig_zero = true; else log_trig += 0.5 * b * std::log(half_cos2);
  }
  for (int s = 0; s <= smax; ++s) {
    double value = 0.0;
    if (!trig_zero) {
      const double log_norm = 0.5 * (log_factorial(s) + log_factorial(s + a + b) - log_factorial(s + a) -
                                     log_factorial(s + b));
      value = sign * std::exp(log_norm + log_trig) * jac[static_cast<std::size_t>(s)];
    }
    out[static_cast<std::size_t>(l0 + s)] = value;
  }
}

double wigner_d(int n, int k, int j, double t) {
  check_order(n, k, "k");
  check_order(n, j, "j");
  std::vector<double> col(static_cast<std::size_t>(n + 1));
  wigner_d_column(n, k, j, t, col);
  return col[static_cast<std::size_t>(n)];
}

std::complex<double> wigner_D(int n, int k, int j, double alpha, double beta, double gamma) {
  const double d = wigner_d(n, k, j, std::cos(beta));
  return std::polar(d, -(k * alpha + j * gamma));
}

double lambert_w(double z) {
  if (std::isnan(z) || z < 0.0) throw std::domain_error("lambert_w requires z >= 0");
  if (z == 0.0) return 0.0;
  if (std::isinf(z)) return z;
  double y;
  if (z < 1.0) {
    y = z;
  } else if (z < std::numbers::e) {
    y = std::log1p(z);
  } else {
    const double lz = std::log(z);
    y = lz - std::log(lz);
  }
  for (int it = 0; it < 100; ++it) {
    const double ey = std::exp(y);
    const double f = y * ey - z;
    const double fp = ey * (y + 1.0);
    const double step = f / (fp - (y + 2.0) * f / (2.0 * y + 2.0));
    y -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(y))) break;
  }
  return y;
}

double lambert_w_exp(double u) {
  if (std::isnan(u)) throw std::domain_error("lambert_w_exp of NaN");
  if (u < 700.0) return lambert_w(std::exp(u));
  // Solve w + log w = u by Newton from the asymptotic guess.
  double w = u - std::log(u);
  for (int it = 0; it < 50; ++it) {
    const double step = (w + std::log(w) - u) / (1.0 + 1.0 / w);
    w -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * w) break;
  }
  return w;
}

double double_factorial(int m) {
  if (m < -1) throw std::domain_error("double factorial requires m >= -1");
  double r = 1.0;
  for (int i = m; i > 1; i -= 2) r *= i;
  return r;
}

double log_double_factorial(int m) {
  if (m < -1) throw std::domain_error("double factorial requires m >= -1");
  if (m <= 1) return 0.0;
  if (m % 2 == 0) {
    const int h = m / 2;
    return h * std::log(2.0) + log_factorial(h);
  }
  const int h = (m + 1) / 2;  // m = 2h - 1, m!! = (2h)! / (2^h h!)
  return log_factorial(2 * h) - h * std::log(2.0) - log_factorial(h);
}

}  // namespace sphereot
