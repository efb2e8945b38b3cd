#include "sphereot/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "sphereot/diagnostics.hpp"
#include "sphereot/special_functions.hpp"
#include "sphereot/summation.hpp"

namespace sphereot {
namespace {

double wnorm(std::span<const double> x, std::span<const double> w) {
  return std::sqrt(std::max(0.0, weighted_dot(x, x, w)));
}

}  // namespace

std::vector<double> project_simplex(std::span<const double> x, std::span<const double> w) {
  if (x.size() != w.size() || x.empty()) throw ValidationError("project_simplex: size mismatch");
  for (double wi : w)
    if (!(wi > 0.0)) throw ValidationError("project_simplex: weights must be positive");
  // f_i = max(x_i - lambda, 0) with sum w_i f_i = 1; breakpoints at lambda = x_i.
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] > x[b]; });
  double sw = 0.0, swx = 0.0, lambda = 0.0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    sw += w[order[r]];
    swx += w[order[r]] * x[order[r]];
    const double cand = (swx - 1.0) / sw;
    const double next = r + 1 < order.size() ? x[order[r + 1]] : -std::numeric_limits<double>::infinity();
    lambda = cand;
    if (cand >= next) break;
  }
  std::vector<double> f(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) f[i] = std::max(x[i] - lambda, 0.0);
  return f;
}

double kl_divergence(std::span<const double> f, std::span<const double> g, std::span<const double> w) {
  if (f.size() != g.size() || f.size() != w.size()) throw ValidationError("kl_divergence: size mismatch");
  CompensatedSum<double> s;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] < 0.0 || g[i] < 0.0) throw ValidationError("kl_divergence: negative entry");
    double term = g[i];
    if (f[i] > 0.0) {
      if (g[i] == 0.0) return std::numeric_limits<double>::infinity();
      term = f[i] * std::log(f[i] / g[i]) - f[i] + g[i];
    }
    s.add(w[i] * term);
  }
  return s.value();
}

double prox_kl_conjugate(double x, double sigma, double a, double b) {
  if (b == 0.0) return x;
  return x - a * lambert_w_exp(std::log(sigma * b / a) + x / a);
}

double operator_norm(const LinearOperator& op, int iterations) {
  const auto dw = op.domain_weights();
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  std::vector<double> x(op.domain_size());
  for (double& v : x) v = dist(rng);
  double n = wnorm(x, dw);
  for (double& v : x) v /= n;
  double est = 0.0;
  for (int it = 0; it < iterations; ++it) {
    auto z = op.apply_adjoint(op.apply(x));
    n = wnorm(z, dw);
    if (n == 0.0) return 0.0;
    est = std::sqrt(n);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = z[i] / n;
  }
  return est;
}

PdResult pd_invert(const LinearOperator& T, std::span<const double> g_in, const PdParams& prm) {
  if (g_in.size() != T.codomain_size()) throw ValidationError("pd_invert: data size does not match the operator");
  if (!(prm.rho > 0.0) || !(prm.sigma > 0.0) || prm.iterations < 1 || prm.theta < 0.0 || prm.theta > 1.0)
    throw ValidationError("pd_invert: need rho > 0, sigma > 0, theta in [0, 1], iterations >= 1");
  const auto w = T.domain_weights();
  const auto wt = T.codomain_weights();

  std::vector<double> g(g_in.begin(), g_in.end());
  CompensatedSum<double> neg, pos;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(g[i])) throw ValidationError("pd_invert: non-finite data");
    if (g[i] < 0.0) {
      neg.add(-wt[i] * g[i]);
      g[i] = 0.0;
    } else {
      pos.add(wt[i] * g[i]);
    }
  }
  if (neg.value() > 0.0) {
    std::ostringstream msg;
    msg << "pd_invert: clipped negative data mass " << neg.value() << " (positive mass " << pos.value() << ")";
    warn(msg.str());
  }
  if (!(pos.value() > 0.0)) throw ValidationError("pd_invert: data has no positive mass");
  if (std::abs(pos.value() - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "pd_invert: data mass " << pos.value() << " renormalized to 1";
    warn(msg.str());
    for (double& v : g) v /= pos.value();
  }

  PdResult res;
  res.operator_norm = operator_norm(T);
  const double L2 = res.operator_norm * res.operator_norm;
  res.tau = prm.tau > 0.0 ? prm.tau : 0.9 / (prm.sigma * (1.0 + L2));
  if (prm.check_step && !(1.0 / (res.tau * prm.sigma) > 1.0 + 1.05 * 1.05 * L2)) {
    std::ostringstream msg;
    msg << "pd_invert: step sizes violate 1/(tau sigma) > 1 + ||T||^2 (||T|| ~ " << res.operator_norm << ")";
    throw ValidationError(msg.str());
  }
  const double tau = res.tau, sigma = prm.sigma, rho = prm.rho, theta = prm.theta;

  const std::size_t n = T.domain_size(), m = T.codomain_size();
  const double area = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<double> f(n, 1.0 / area), y1(m, 0.0), y2(n, 0.0), ft(n), fnext(n), step(n);
  std::vector<double> Tf = T.apply(f);
  const std::vector<double> ones(n, 1.0);
  std::vector<double> clipped(m);

  res.objective.reserve(static_cast<std::size_t>(prm.iterations));
  for (int k = 0; k < prm.iterations; ++k) {
    const auto Ty1 = T.apply_adjoint(y1);
    for (std::size_t i = 0; i < n; ++i) step[i] = f[i] - tau * Ty1[i] - tau * y2[i];
    fnext = project_simplex(step, w);
    for (std::size_t i = 0; i < n; ++i) ft[i] = fnext[i] + theta * (fnext[i] - f[i]);
    const auto Tft = T.apply(ft);
    for (std::size_t i = 0; i < m; ++i) y1[i] = prox_kl_conjugate(y1[i] + sigma * Tft[i], sigma, 1.0, g[i]);
    for (std::size_t i = 0; i < n; ++i) y2[i] = prox_kl_conjugate(y2[i] + sigma * ft[i], sigma, rho, 1.0);

    // T f^{k+1} from T f~ and T f^k by linearity.
    for (std::size_t i = 0; i < m; ++i) {
      Tf[i] = (Tft[i] + theta * Tf[i]) / (1.0 + theta);
      clipped[i] = std::max(Tf[i], 0.0);
    }
    res.objective.push_back(kl_divergence(clipped, g, wt) + rho * kl_divergence(fnext, ones, w));

    double change = 0.0;
    if (prm.tolerance > 0.0) {
      for (std::size_t i = 0; i < n; ++i) step[i] = fnext[i] - f[i];
      change = wnorm(step, w) / std::max(wnorm(f, w), 1e-300);
    }
    f.swap(fnext);
    res.iterations = k + 1;
    if (prm.tolerance > 0.0 && change <= prm.tolerance) break;
  }
  res.density = std::move(f);
  return res;
}

}  // namespace sphereot
