#include "sphereot/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "json.hpp"
#include "sphereot/diagnostics.hpp"
#include "sphereot/summation.hpp"

namespace sphereot {
namespace {

constexpr double kPi = std::numbers::pi;

// P_n(t) and P_n'(t).
std::pair<double, double> legendre_with_derivative(int n, double t) {
  double p0 = 1.0, p1 = t;
  for (int m = 1; m < n; ++m) {
    const double p2 = ((2.0 * m + 1.0) * t * p1 - m * p0) / (m + 1.0);
    p0 = p1;
    p1 = p2;
  }
  const double dp = n * (t * p1 - p0) / (t * t - 1.0);
  return {p1, dp};
}

void check_lengths(std::size_t a, std::size_t b, std::size_t w) {
  if (a != b || a != w) {
    throw ValidationError("weighted_dot length mismatch: " + std::to_string(a) + ", " + std::to_string(b) + ", " +
                          std::to_string(w));
  }
}

}  // namespace

GaussLegendreRule gauss_legendre(int N) {
  if (N < 0) throw ValidationError("band-limit N must be nonnegative");
  const int n = N + 1;
  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  if (n == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 2.0;
    return rule;
  }
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre_with_derivative(n, t);
      const double step = p / dp;
      t -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const auto [p, dp] = legendre_with_derivative(n, t);
    (void)p;
    const double w = 2.0 / ((1.0 - t * t) * dp * dp);
    // t is the i-th largest root; store ascending and mirror.
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = t;
    rule.nodes[static_cast<std::size_t>(i)] = -t;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    rule.weights[static_cast<std::size_t>(i)] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

SphereGrid::SphereGrid(int N) : N_(N), rule_(gauss_legendre(N)) {
  if (N < 0) throw ValidationError("band-limit N must be nonnegative");
  const int A = azimuth_count();
  phi_.resize(static_cast<std::size_t>(A));
  for (int i = 0; i < A; ++i) phi_[static_cast<std::size_t>(i)] = i * kPi / (N + 1);
  theta_.resize(rule_.nodes.size());
  ring_weights_.resize(rule_.nodes.size());
  for (std::size_t j = 0; j < rule_.nodes.size(); ++j) {
    theta_[j] = std::acos(rule_.nodes[j]);
    ring_weights_[j] = 2.0 * kPi * rule_.weights[j] / A;
  }
  nodes_.reserve(static_cast<std::size_t>(A) * theta_.size());
  weights_.reserve(nodes_.capacity());
  for (std::size_t j = 0; j < theta_.size(); ++j) {
    // From t directly, so mirrored rings are exact negatives in xi_3.
    const double t = rule_.nodes[j], st = std::sqrt((1.0 - t) * (1.0 + t));
    for (int i = 0; i < A; ++i) {
      const double ph = phi_[static_cast<std::size_t>(i)];
      nodes_.emplace_back(std::cos(ph) * st, std::sin(ph) * st, t);
      weights_.push_back(ring_weights_[j]);
    }
  }
}

CylinderGrid::CylinderGrid(int N) : N_(N), rule_(gauss_legendre(N)) {
  const int P = psi_count();
  psi_.resize(static_cast<std::size_t>(P));
  for (int i = 0; i < P; ++i) psi_[static_cast<std::size_t>(i)] = i * kPi / (N + 1);
  weights_.reserve(static_cast<std::size_t>(P) * rule_.weights.size());
  for (double r : rule_.weights)
    for (int i = 0; i < P; ++i) weights_.push_back(kPi * r / (N + 1));
}

SO3Grid::SO3Grid(int N, int G) : sphere_(N), G_(G) {
  if (G < 2 * N + 1) {
    throw ValidationError("SO(3) grid needs G >= 2N+1 gamma nodes (G=" + std::to_string(G) +
                          ", N=" + std::to_string(N) + ")");
  }
  gamma_.resize(static_cast<std::size_t>(G));
  for (int g = 0; g < G; ++g) gamma_[static_cast<std::size_t>(g)] = 2.0 * kPi * g / G;
  weights_.reserve(size());
  for (double w : sphere_.weights())
    for (int g = 0; g < G; ++g) weights_.push_back(w * 2.0 * kPi / G);
}

EulerAngles SO3Grid::angles(std::size_t l) const {
  const std::size_t m = l / static_cast<std::size_t>(G_);
  const int g = static_cast<int>(l % static_cast<std::size_t>(G_));
  const int A = sphere_.azimuth_count();
  const int i = static_cast<int>(m % static_cast<std::size_t>(A));
  const int j = static_cast<int>(m / static_cast<std::size_t>(A));
  return {sphere_.phi()[static_cast<std::size_t>(i)], sphere_.theta()[static_cast<std::size_t>(j)],
          gamma_[static_cast<std::size_t>(g)]};
}

double weighted_dot(std::span<const double> a, std::span<const double> b, std::span<const double> w) {
  check_lengths(a.size(), b.size(), w.size());
  CompensatedSum<double> s;
  for (std::size_t m = 0; m < a.size(); ++m) s.add(w[m] * a[m] * b[m]);
  return s.value();
}

std::complex<double> weighted_dot(std::span<const std::complex<double>> a, std::span<const std::complex<double>> b,
                                  std::span<const double> w) {
  check_lengths(a.size(), b.size(), w.size());
  CompensatedSum<std::complex<double>> s;
  for (std::size_t m = 0; m < a.size(); ++m) s.add(w[m] * a[m] * std::conj(b[m]));
  return s.value();
}

double weighted_sum(std::span<const double> a, std::span<const double> w) {
  if (a.size() != w.size()) throw ValidationError("weighted_sum length mismatch");
  CompensatedSum<double> s;
  for (std::size_t m = 0; m < a.size(); ++m) s.add(w[m] * a[m]);
  return s.value();
}

nlohmann::json to_json(const SphereGrid& grid) {
  return {{"grid", "sphere"},
          {"N", grid.band_limit()},
          {"index", "m = j*(2N+2) + i"},
          {"phi", grid.phi()},
          {"theta", grid.theta()},
          {"ring_weights", grid.ring_weights()}};
}

nlohmann::json to_json(const CylinderGrid& grid) {
  return {{"grid", "cylinder"},
          {"N", grid.band_limit()},
          {"index", "l = j*(2N+2) + i"},
          {"psi", grid.psi()},
          {"t", grid.t()},
          {"t_weights", grid.t_weights()}};
}

nlohmann::json to_json(const SO3Grid& grid) {
  nlohmann::json j = to_json(grid.zeniths());
  j["grid"] = "so3";
  j["G"] = grid.gamma_count();
  j["index"] = "l = m*G + g, m = j*(2N+2) + i";
  j["gamma"] = grid.gamma();
  return j;
}

}  // namespace sphereot
