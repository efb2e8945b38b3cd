#include "sphereot/sliced_distances.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "sphereot/diagnostics.hpp"
#include "sphereot/parallel.hpp"
#include "sphereot/summation.hpp"

namespace sphereot {
namespace {

constexpr double kPi = std::numbers::pi;

void check_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw ValidationError("sliced distance: p must be finite and >= 1");
}

void report_clipping(double worst, std::size_t count, const char* what, const SliceOptions& opt) {
  if (worst > opt.warn_clipped_mass) {
    std::ostringstream msg;
    msg << what << ": clipped negative mass up to " << worst << " in " << count << " slices";
    warn(msg.str());
  }
}

}  // namespace

std::vector<double> vertical_slice_values(std::span<const double> g, const CylinderGrid& grid, int psi_index) {
  if (g.size() != grid.size()) throw ValidationError("vertical slices: sample count does not match the cylinder grid");
  std::vector<double> v(static_cast<std::size_t>(grid.t_count()));
  for (int j = 0; j < grid.t_count(); ++j) v[static_cast<std::size_t>(j)] = 2.0 * kPi * g[grid.index(psi_index, j)];
  return v;
}

std::vector<Measure1D> vertical_slice_measures(std::span<const double> g, const CylinderGrid& grid,
                                               const SliceOptions& opt) {
  std::vector<Measure1D> out;
  out.reserve(static_cast<std::size_t>(grid.psi_count()));
  double worst = 0.0;
  std::size_t count = 0;
  for (int i = 0; i < grid.psi_count(); ++i) {
    auto v = vertical_slice_values(g, grid, i);
    const double clipped = clip_and_normalize(v, grid.t_weights());
    if (clipped > opt.warn_clipped_mass) ++count;
    worst = std::max(worst, clipped);
    out.push_back(Measure1D::density(Domain1D::interval, grid.t(), grid.t_weights(), std::move(v)));
  }
  report_clipping(worst, count, "vertical slices", opt);
  return out;
}

std::vector<double> semicircle_slice_values(std::span<const double> g, const SO3Grid& grid, std::size_t zenith) {
  if (g.size() != grid.size()) throw ValidationError("semicircle slices: sample count does not match the SO(3) grid");
  std::vector<double> v(static_cast<std::size_t>(grid.gamma_count()));
  for (int c = 0; c < grid.gamma_count(); ++c) v[static_cast<std::size_t>(c)] = 4.0 * kPi * g[grid.index(zenith, c)];
  return v;
}

std::vector<Measure1D> semicircle_slice_measures(std::span<const double> g, const SO3Grid& grid,
                                                 const SliceOptions& opt) {
  const std::size_t M = grid.zeniths().size();
  const std::vector<double> w(static_cast<std::size_t>(grid.gamma_count()), 2.0 * kPi / grid.gamma_count());
  std::vector<Measure1D> out;
  out.reserve(M);
  double worst = 0.0;
  std::size_t count = 0;
  for (std::size_t m = 0; m < M; ++m) {
    auto v = semicircle_slice_values(g, grid, m);
    const double clipped = clip_and_normalize(v, w);
    if (clipped > opt.warn_clipped_mass) ++count;
    worst = std::max(worst, clipped);
    out.push_back(Measure1D::density(Domain1D::circle, grid.gamma(), w, std::move(v)));
  }
  report_clipping(worst, count, "semicircle slices", opt);
  return out;
}

double vsw(const DiscreteMeasureS2& mu, const DiscreteMeasureS2& nu, const SlicedConfig& cfg) {
  check_p(cfg.p);
  if (cfg.slices < 1) throw ValidationError("vsw: need at least one slice");
  mu.validate_probability();
  nu.validate_probability();
  const auto K = static_cast<std::size_t>(cfg.slices);
  std::vector<double> cost(K);
  parallel_for(K, [&](std::size_t i) {
    const double psi = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(K);
    cost[i] = std::pow(wasserstein_interval(pushforward_vslice(mu, psi), pushforward_vslice(nu, psi), cfg.p), cfg.p);
  });
  CompensatedSum<double> s;
  for (double c : cost) s.add(c);
  return std::pow(2.0 * kPi / static_cast<double>(K) * s.value(), 1.0 / cfg.p);
}

double ssw(const DiscreteMeasureS2& mu, const DiscreteMeasureS2& nu, const SlicedConfig& cfg) {
  check_p(cfg.p);
  mu.validate_probability();
  nu.validate_probability();
  const SphereGrid zeniths(cfg.zenith_band_limit);
  const std::size_t M = zeniths.size();
  std::vector<double> cost(M);
  parallel_for(M, [&](std::size_t m) {
    const double alpha = azi(zeniths.nodes()[m]);
    const double beta = zen(zeniths.nodes()[m]);
    const double w = wasserstein_circle(pushforward_semicircle(mu, alpha, beta), pushforward_semicircle(nu, alpha, beta), cfg.p);
    cost[m] = zeniths.weights()[m] * std::pow(w, cfg.p);
  });
  CompensatedSum<double> s;
  for (double c : cost) s.add(c);
  return std::pow(std::max(0.0, s.value()), 1.0 / cfg.p);
}

double vsw(std::span<const double> f, std::span<const double> g, const VerticalSliceTransform& V, double p,
           const SliceOptions& opt) {
  check_p(p);
  const auto a = vertical_slice_measures(V.apply(f), V.cylinder(), opt);
  const auto b = vertical_slice_measures(V.apply(g), V.cylinder(), opt);
  std::vector<double> cost(a.size());
  parallel_for(a.size(), [&](std::size_t i) { cost[i] = std::pow(wasserstein_interval(a[i], b[i], p), p); });
  CompensatedSum<double> s;
  for (double c : cost) s.add(c);
  return std::pow(2.0 * kPi / static_cast<double>(a.size()) * s.value(), 1.0 / p);
}

double ssw(std::span<const double> f, std::span<const double> g, const SemicircleTransform& W, double p,
           const SliceOptions& opt) {
  check_p(p);
  const auto a = semicircle_slice_measures(W.apply(f), W.so3(), opt);
  const auto b = semicircle_slice_measures(W.apply(g), W.so3(), opt);
  const auto& w = W.so3().zeniths().weights();
  std::vector<double> cost(a.size());
  parallel_for(a.size(), [&](std::size_t m) { cost[m] = w[m] * std::pow(wasserstein_circle(a[m], b[m], p), p); });
  CompensatedSum<double> s;
  for (double c : cost) s.add(c);
  return std::pow(std::max(0.0, s.value()), 1.0 / p);
}

bool vsw_axis_invariance_check(const DiscreteMeasureS2& mu, const DiscreteMeasureS2& nu, int grid_steps,
                               const SlicedConfig& cfg) {
  const Rotation q = r3(2.0 * kPi * grid_steps / cfg.slices);
  const double before = vsw(mu, nu, cfg);
  const double after = vsw(mu.rotated(q), nu.rotated(q), cfg);
  return std::abs(before - after) <= 1e-12 * std::max(1.0, before);
}

}  // namespace sphereot
