#pragma once

#include <vector>

#include "sphereot/geometry.hpp"
#include "sphereot/quadrature.hpp"

namespace sphereot {

struct VmfComponent {
  double weight = 1.0;
  double kappa = 50.0;
  UnitVector mean;
};

// Convex combination of vMF components, optionally averaged with its
// reflection at the equatorial plane.
struct VmfSpec {
  std::vector<VmfComponent> components;
  bool symmetrize = false;

  static VmfSpec single(double kappa, const UnitVector& mean, bool symmetrize = false);
  static VmfSpec mixture(double kappa, const std::vector<UnitVector>& means);  // equal weights
  // Throws ValidationError unless nonempty, kappa > 0, weights >= 0 summing to 1 within 1e-12.
  void validate() const;
};

// c_kappa e^{kappa <eta, xi>} with the stable normalization.
double vmf_value(double kappa, const UnitVector& mean, const UnitVector& xi);
double vmf_value(const VmfSpec& spec, const UnitVector& xi);

// Samples on the grid nodes. With renormalize the quadrature mass is made exactly 1.
std::vector<double> vmf_density(const VmfSpec& spec, const SphereGrid& grid, bool renormalize = true);

}  // namespace sphereot
