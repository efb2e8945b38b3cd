#pragma once

#include <span>
#include <string>
#include <vector>

#include "sphereot/harmonic_transforms.hpp"
#include "sphereot/inversion.hpp"

namespace sphereot {

enum class InversionMode { pinv, regularized };
std::string to_string(InversionMode m);
InversionMode inversion_mode_from_string(const std::string& s);  // "pinv" | "reg" | "regularized"

struct InterpolationOptions {
  InversionMode mode = InversionMode::pinv;
  PdParams pd;
  // Reference slices are clipped, then floored at this fraction of their maximum.
  double reference_floor = 1e-10;
  // Clipped negative mass (relative) above which a reference slice is rejected.
  double max_reference_clip = 0.05;
  double warn_clipped_mass = 1e-4;
};

struct InterpolationResult {
  std::vector<double> density;    // on the sphere grid
  std::vector<double> slices;     // interpolated transform samples on the codomain grid
  std::vector<double> objective;  // regularized mode only
};

// Slice-wise displacement interpolation between the transforms of mu and nu
// (mu is the reference), followed by inversion.
InterpolationResult vcdt_interpolate(std::span<const double> mu, std::span<const double> nu, double delta,
                                     const VerticalSliceTransform& V, const InterpolationOptions& opt = {});
InterpolationResult wcdt_interpolate(std::span<const double> mu, std::span<const double> nu, double delta,
                                     const SemicircleTransform& W, const InterpolationOptions& opt = {});

// Turns raw slice values into a strictly positive unit-mass density for use as
// a CDT reference. Throws ValidationError when the clipped mass exceeds
// max_reference_clip. Returns the clipped fraction.
double make_reference_slice(std::vector<double>& values, std::span<const double> weights,
                            const InterpolationOptions& opt);

}  // namespace sphereot
