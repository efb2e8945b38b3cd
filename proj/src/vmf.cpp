#include "sphereot/vmf.hpp"

#include <cmath>
#include <numbers>

#include "sphereot/diagnostics.hpp"

namespace sphereot {

VmfSpec VmfSpec::single(double kappa, const UnitVector& mean, bool symmetrize) {
  return VmfSpec{{VmfComponent{1.0, kappa, mean}}, symmetrize};
}

VmfSpec VmfSpec::mixture(double kappa, const std::vector<UnitVector>& means) {
  VmfSpec s;
  for (const auto& m : means) s.components.push_back({1.0 / static_cast<double>(means.size()), kappa, m});
  return s;
}

void VmfSpec::validate() const {
  if (components.empty()) throw ValidationError("vmf: no components");
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.kappa > 0.0) || !std::isfinite(c.kappa)) throw ValidationError("vmf: kappa must be positive");
    if (!(c.weight >= 0.0)) throw ValidationError("vmf: mixture weights must be nonnegative");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("vmf: mixture weights must sum to 1");
}

namespace {

double vmf_at_cos(double kappa, double cos_angle) {
  const double c = kappa / (2.0 * std::numbers::pi * -std::expm1(-2.0 * kappa));
  return c * std::exp(kappa * (cos_angle - 1.0));
}

}  // namespace

double vmf_value(double kappa, const UnitVector& mean, const UnitVector& xi) {
  return vmf_at_cos(kappa, dot(mean, xi));
}

double vmf_value(const VmfSpec& spec, const UnitVector& xi) {
  // sign = -1 evaluates at the equatorial mirror image without renormalizing it.
  auto eval = [&](double sign) {
    double s = 0.0;
    for (const auto& c : spec.components) {
      const auto& m = c.mean;
      s += c.weight * vmf_at_cos(c.kappa, m.x() * xi.x() + m.y() * xi.y() + sign * (m.z() * xi.z()));
    }
    return s;
  };
  if (!spec.symmetrize) return eval(1.0);
  return 0.5 * (eval(1.0) + eval(-1.0));
}

std::vector<double> vmf_density(const VmfSpec& spec, const SphereGrid& grid, bool renormalize) {
  spec.validate();
  std::vector<double> f(grid.size());
  for (std::size_t m = 0; m < f.size(); ++m) f[m] = vmf_value(spec, grid.nodes()[m]);
  if (renormalize) {
    const double mass = weighted_sum(f, grid.weights());
    for (double& v : f) v /= mass;
  }
  return f;
}

}  // namespace sphereot
