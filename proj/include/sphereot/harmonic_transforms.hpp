#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "sphereot/geometry.hpp"
#include "sphereot/grid_density.hpp"
#include "sphereot/ot1d.hpp"
#include "sphereot/quadrature.hpp"

namespace sphereot {

// c_n^k for 0 <= n <= N, |k| <= n, stored at n^2 + n + k.
class HarmonicCoeffs {
 public:
  explicit HarmonicCoeffs(int N);

  int band_limit() const { return N_; }
  static std::size_t index(int n, int k) { return static_cast<std::size_t>(n * n + n + k); }
  std::complex<double>& operator()(int n, int k) { return c_[index(n, k)]; }
  const std::complex<double>& operator()(int n, int k) const { return c_[index(n, k)]; }
  std::vector<std::complex<double>>& data() { return c_; }
  const std::vector<std::complex<double>>& data() const { return c_; }

  // c_n^{-k} == (-1)^k conj(c_n^k) within tol, i.e. the coefficients of a real field.
  bool has_real_symmetry(double tol) const;

 private:
  int N_;
  std::vector<std::complex<double>> c_;
};

// Analysis/synthesis on a SphereGrid with a cached normalized Legendre table.
class SphereHarmonics {
 public:
  explicit SphereHarmonics(int N);

  const SphereGrid& grid() const { return grid_; }
  int band_limit() const { return grid_.band_limit(); }

  HarmonicCoeffs analyze(std::span<const double> f) const;
  HarmonicCoeffs analyze(std::span<const std::complex<double>> f) const;
  // Coefficients of degree above the grid band-limit are rejected.
  std::vector<std::complex<double>> synthesize_complex(const HarmonicCoeffs& c) const;
  // Real part of the synthesis.
  std::vector<double> synthesize(const HarmonicCoeffs& c) const;

  // Normalized P_n^k(t_j), k >= 0.
  double legendre(int j, int n, int k) const {
    return legendre_[static_cast<std::size_t>(j) * tri_ + static_cast<std::size_t>(n * (n + 1) / 2 + k)];
  }

 private:
  std::vector<std::complex<double>> ring_fourier(std::span<const std::complex<double>> f) const;

  SphereGrid grid_;
  std::size_t tri_;
  std::vector<double> legendre_;
  std::vector<std::complex<double>> expo_;  // e^{i k phi_i}, k = -N..N
};

HarmonicCoeffs analyze_s2(std::span<const double> f, const SphereGrid& grid);
std::vector<double> synthesize_s2(const HarmonicCoeffs& c, const SphereGrid& grid);

// Singular values.
double sv_vertical(int n, int k);        // requires n+k even
double lambda_semicircle(int n, int j);  // zero where undefined
double sv_semicircle(int n);

// Real linear map between weighted spaces R^domain -> R^codomain.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual std::span<const double> domain_weights() const = 0;
  virtual std::span<const double> codomain_weights() const = 0;
  virtual std::vector<double> apply(std::span<const double> x) const = 0;
  // Adjoint with respect to the weighted inner products.
  virtual std::vector<double> apply_adjoint(std::span<const double> y) const = 0;
  std::size_t domain_size() const { return domain_weights().size(); }
  std::size_t codomain_size() const { return codomain_weights().size(); }
};

// A transform from sphere-grid samples to a codomain grid.
class SphericalTransform : public LinearOperator {
 public:
  virtual std::vector<double> pinv(std::span<const double> g) const = 0;
  virtual GridDescriptor codomain_grid() const = 0;
  virtual const SphereGrid& sphere() const = 0;
  GridDescriptor domain_grid() const { return {GridKind::sphere, sphere().band_limit(), 0}; }
};

// Discrete vertical slice transform onto the cylinder grid.
class VerticalSliceTransform final : public SphericalTransform {
 public:
  explicit VerticalSliceTransform(int N);

  std::span<const double> domain_weights() const override { return harmonics_.grid().weights(); }
  std::span<const double> codomain_weights() const override { return cylinder_.weights(); }
  std::vector<double> apply(std::span<const double> f) const override;
  std::vector<double> apply_adjoint(std::span<const double> g) const override;
  std::vector<double> pinv(std::span<const double> g) const override;
  GridDescriptor codomain_grid() const override { return {GridKind::cylinder, cylinder_.band_limit(), 0}; }
  const SphereGrid& sphere() const override { return harmonics_.grid(); }

  const CylinderGrid& cylinder() const { return cylinder_; }
  const SphereHarmonics& harmonics() const { return harmonics_; }
  // Coefficient-space forward map: Sum v c B sampled on the cylinder.
  std::vector<double> forward_coeffs(const HarmonicCoeffs& c) const;

 private:
  enum class Scaling { adjoint, inverse };
  std::vector<double> backward(std::span<const double> g, Scaling s) const;

  int N_;
  SphereHarmonics harmonics_;
  CylinderGrid cylinder_;
  std::vector<double> basis_;  // sqrt((2n+1)/4pi) P_n(t_j) at j*(N+1) + n
  std::vector<double> sv_;     // v_n^k at n^2+n+k, zero when n+k odd
};

// Discrete normalized semicircle transform onto the SO(3) product grid.
class SemicircleTransform final : public SphericalTransform {
 public:
  // G defaults to 2N+1.
  explicit SemicircleTransform(int N, int G = 0);

  std::span<const double> domain_weights() const override { return harmonics_.grid().weights(); }
  std::span<const double> codomain_weights() const override { return so3_.weights(); }
  std::vector<double> apply(std::span<const double> f) const override;
  std::vector<double> apply_adjoint(std::span<const double> g) const override;
  std::vector<double> pinv(std::span<const double> g) const override;
  GridDescriptor codomain_grid() const override {
    return {GridKind::so3, so3_.band_limit(), so3_.gamma_count()};
  }
  const SphereGrid& sphere() const override { return harmonics_.grid(); }

  const SO3Grid& so3() const { return so3_; }
  const SphereHarmonics& harmonics() const { return harmonics_; }
  std::vector<double> forward_coeffs(const HarmonicCoeffs& c) const;

 private:
  enum class Scaling { adjoint, inverse };
  std::vector<double> backward(std::span<const double> g, Scaling s) const;
  std::size_t dcol(int ring, int k, int jp) const;

  int N_;
  SphereHarmonics harmonics_;
  SO3Grid so3_;
  std::vector<std::size_t> col_offset_;  // per (k, j'), into a ring block
  std::size_t ring_block_ = 0;
  std::vector<double> dtable_;  // lambda_n^{j'} d_n^{k,j'}(t_ring), n from max(|k|,|j'|)
  std::vector<double> w2_;      // w_n^2
};

// Atoms on the sphere.
struct DiscreteMeasureS2 {
  std::vector<UnitVector> points;
  std::vector<double> masses;

  // Throws ValidationError unless sizes match, masses >= 0 and sum to 1 within 1e-12.
  void validate_probability() const;
  DiscreteMeasureS2 rotated(const Rotation& q) const;
};

Measure1D pushforward_vslice(const DiscreteMeasureS2& mu, double psi);
Measure1D pushforward_semicircle(const DiscreteMeasureS2& mu, double alpha, double beta);

}  // namespace sphereot
