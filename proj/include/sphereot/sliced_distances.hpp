#pragma once

#include <span>
#include <vector>

#include "sphereot/harmonic_transforms.hpp"
#include "sphereot/ot1d.hpp"

namespace sphereot {

struct SlicedConfig {
  double p = 2.0;
  int slices = 64;             // psi directions for VSW of atoms
  int zenith_band_limit = 16;  // SSW zeniths: SphereGrid of this band-limit
};

// Options for turning transform rows into per-slice probability measures.
struct SliceOptions {
  double warn_clipped_mass = 1e-4;  // warn when a slice loses more than this
};

// Per-psi interval densities 2 pi Vf(psi_i, .) on the Gauss nodes, clipped
// and renormalized. Returns one measure per psi index.
std::vector<Measure1D> vertical_slice_measures(std::span<const double> g, const CylinderGrid& grid,
                                               const SliceOptions& opt = {});
// Raw (unclipped) slice values 2 pi Vf(psi_i, t_j), j-major per slice.
std::vector<double> vertical_slice_values(std::span<const double> g, const CylinderGrid& grid, int psi_index);

// Per-zenith circle densities 4 pi Wf(alpha_m, beta_m, .) on the gamma grid.
std::vector<Measure1D> semicircle_slice_measures(std::span<const double> g, const SO3Grid& grid,
                                                 const SliceOptions& opt = {});
std::vector<double> semicircle_slice_values(std::span<const double> g, const SO3Grid& grid, std::size_t zenith);

// VSW_p for atomic measures with psi_i = 2 pi i / K.
double vsw(const DiscreteMeasureS2& mu, const DiscreteMeasureS2& nu, const SlicedConfig& cfg);
// SSW_p for atomic measures over the zenith grid.
double ssw(const DiscreteMeasureS2& mu, const DiscreteMeasureS2& nu, const SlicedConfig& cfg);

// Grid-density versions using the transform rows.
double vsw(std::span<const double> f, std::span<const double> g, const VerticalSliceTransform& V, double p,
           const SliceOptions& opt = {});
double ssw(std::span<const double> f, std::span<const double> g, const SemicircleTransform& W, double p,
           const SliceOptions& opt = {});

// Compares vsw before and after rotating both measures by R3(2 pi s / K),
// s = grid_steps, within 1e-12 relative.
bool vsw_axis_invariance_check(const DiscreteMeasureS2& mu, const DiscreteMeasureS2& nu, int grid_steps,
                               const SlicedConfig& cfg);

}  // namespace sphereot
