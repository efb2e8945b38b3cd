#include "sphereot/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sphereot/diagnostics.hpp"
#include "sphereot/parallel.hpp"
#include "sphereot/sliced_distances.hpp"

namespace sphereot {
namespace {

constexpr double kPi = std::numbers::pi;

void check_inputs(std::span<const double> mu, std::span<const double> nu, double delta, std::size_t n) {
  if (mu.size() != n || nu.size() != n) throw ValidationError("interpolate: density size does not match the sphere grid");
  if (!(delta >= 0.0 && delta <= 1.0)) throw ValidationError("interpolate: delta must lie in [0, 1]");
}

struct SliceStats {
  double worst = 0.0;
  std::size_t count = 0;
  void merge(double c, double threshold) {
    worst = std::max(worst, c);
    if (c > threshold) ++count;
  }
};

void report(const SliceStats& s, const char* what, double threshold) {
  if (s.worst > threshold) {
    std::ostringstream msg;
    msg << what << ": clipped negative slice mass up to " << s.worst << " in " << s.count << " slices";
    warn(msg.str());
  }
}

InterpolationResult finish(const SphericalTransform& T, std::vector<double> h, const InterpolationOptions& opt) {
  InterpolationResult res;
  if (opt.mode == InversionMode::pinv) {
    res.density = T.pinv(h);
  } else {
    auto pd = pd_invert(T, h, opt.pd);
    res.density = std::move(pd.density);
    res.objective = std::move(pd.objective);
  }
  res.slices = std::move(h);
  return res;
}

}  // namespace

std::string to_string(InversionMode m) { return m == InversionMode::pinv ? "pinv" : "reg"; }

InversionMode inversion_mode_from_string(const std::string& s) {
  if (s == "pinv") return InversionMode::pinv;
  if (s == "reg" || s == "regularized") return InversionMode::regularized;
  throw ValidationError("mode: expected pinv or reg, got '" + s + "'");
}

double make_reference_slice(std::vector<double>& values, std::span<const double> weights,
                            const InterpolationOptions& opt) {
  const double clipped = clip_and_normalize(values, weights);
  if (clipped > opt.max_reference_clip) {
    std::ostringstream msg;
    msg << "reference slice is not positive: clipped mass fraction " << clipped;
    throw ValidationError(msg.str());
  }
  const double top = *std::max_element(values.begin(), values.end());
  double mass = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = std::max(values[i], opt.reference_floor * top);
    mass += weights[i] * values[i];
  }
  for (double& v : values) v /= mass;
  return clipped;
}

InterpolationResult vcdt_interpolate(std::span<const double> mu, std::span<const double> nu, double delta,
                                     const VerticalSliceTransform& V, const InterpolationOptions& opt) {
  check_inputs(mu, nu, delta, V.domain_size());
  const auto& cyl = V.cylinder();
  const auto gm = V.apply(mu);
  const auto gn = V.apply(nu);
  const auto K = static_cast<std::size_t>(cyl.psi_count());
  std::vector<double> h(cyl.size());
  std::vector<double> clip_mu(K), clip_nu(K);
  parallel_for(K, [&](std::size_t i) {
    const int ii = static_cast<int>(i);
    auto a = vertical_slice_values(gm, cyl, ii);
    auto b = vertical_slice_values(gn, cyl, ii);
    clip_mu[i] = make_reference_slice(a, cyl.t_weights(), opt);
    clip_nu[i] = clip_and_normalize(b, cyl.t_weights());
    const auto ref = Measure1D::density(Domain1D::interval, cyl.t(), cyl.t_weights(), std::move(a));
    const auto tgt = Measure1D::density(Domain1D::interval, cyl.t(), cyl.t_weights(), std::move(b));
    const auto mid = interpolate_interval(ref, tgt, delta);
    const auto cells = rebin(mid, cyl.t(), cyl.t_weights());
    for (int j = 0; j < cyl.t_count(); ++j) h[cyl.index(ii, j)] = cells[static_cast<std::size_t>(j)] / (2.0 * kPi);
  });
  SliceStats s;
  for (std::size_t i = 0; i < K; ++i) {
    s.merge(clip_mu[i], opt.warn_clipped_mass);
    s.merge(clip_nu[i], opt.warn_clipped_mass);
  }
  report(s, "vcdt_interpolate", opt.warn_clipped_mass);
  return finish(V, std::move(h), opt);
}

InterpolationResult wcdt_interpolate(std::span<const double> mu, std::span<const double> nu, double delta,
                                     const SemicircleTransform& W, const InterpolationOptions& opt) {
  check_inputs(mu, nu, delta, W.domain_size());
  const auto& so3 = W.so3();
  const auto gm = W.apply(mu);
  const auto gn = W.apply(nu);
  const std::size_t M = so3.zeniths().size();
  const int G = so3.gamma_count();
  const std::vector<double> w(static_cast<std::size_t>(G), 2.0 * kPi / G);
  std::vector<double> h(so3.size());
  std::vector<double> clip_mu(M), clip_nu(M);
  parallel_for(M, [&](std::size_t m) {
    auto a = semicircle_slice_values(gm, so3, m);
    auto b = semicircle_slice_values(gn, so3, m);
    clip_mu[m] = make_reference_slice(a, w, opt);
    clip_nu[m] = clip_and_normalize(b, w);
    const auto ref = Measure1D::density(Domain1D::circle, so3.gamma(), w, std::move(a));
    const auto tgt = Measure1D::density(Domain1D::circle, so3.gamma(), w, std::move(b));
    const auto mid = interpolate_circle(ref, tgt, delta);
    const auto cells = rebin(mid, so3.gamma(), w);
    for (int g = 0; g < G; ++g) h[so3.index(m, g)] = cells[static_cast<std::size_t>(g)] / (4.0 * kPi);
  });
  SliceStats s;
  for (std::size_t m = 0; m < M; ++m) {
    s.merge(clip_mu[m], opt.warn_clipped_mass);
    s.merge(clip_nu[m], opt.warn_clipped_mass);
  }
  report(s, "wcdt_interpolate", opt.warn_clipped_mass);
  return finish(W, std::move(h), opt);
}

}  // namespace sphereot
