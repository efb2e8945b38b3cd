#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "json.hpp"

#include "sphereot/geometry.hpp"

namespace sphereot {

struct GaussLegendreRule {
  std::vector<double> nodes;    // strictly increasing in (-1, 1)
  std::vector<double> weights;  // positive, sum 2
};

// N+1 point rule, exact up to degree 2N+1.
GaussLegendreRule gauss_legendre(int N);

// Gauss nodes in cos(theta) times 2N+2 equispaced azimuths phi_i = i pi/(N+1).
// Node index m = j*(2N+2) + i with j the Gauss index and i the azimuth index.
class SphereGrid {
 public:
  explicit SphereGrid(int N);

  int band_limit() const { return N_; }
  std::size_t size() const { return nodes_.size(); }
  int azimuth_count() const { return 2 * N_ + 2; }
  int ring_count() const { return N_ + 1; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j * azimuth_count() + i); }

  const std::vector<double>& phi() const { return phi_; }            // per azimuth index
  const std::vector<double>& theta() const { return theta_; }        // per ring
  const std::vector<double>& cos_theta() const { return rule_.nodes; }
  const std::vector<double>& ring_weights() const { return ring_weights_; }  // 2 pi r_j/(2N+2)
  const std::vector<UnitVector>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  const GaussLegendreRule& rule() const { return rule_; }

 private:
  int N_;
  GaussLegendreRule rule_;
  std::vector<double> phi_, theta_, ring_weights_;
  std::vector<UnitVector> nodes_;
  std::vector<double> weights_;
};

// (psi_i, t_j) on T x I with weights pi r_j/(N+1); index l = j*(2N+2) + i.
class CylinderGrid {
 public:
  explicit CylinderGrid(int N);

  int band_limit() const { return N_; }
  std::size_t size() const { return weights_.size(); }
  int psi_count() const { return 2 * N_ + 2; }
  int t_count() const { return N_ + 1; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j * psi_count() + i); }

  const std::vector<double>& psi() const { return psi_; }
  const std::vector<double>& t() const { return rule_.nodes; }
  const std::vector<double>& t_weights() const { return rule_.weights; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  int N_;
  GaussLegendreRule rule_;
  std::vector<double> psi_;
  std::vector<double> weights_;
};

// Product of a SphereGrid in (alpha, beta) and G equispaced gamma_g = 2 pi g/G.
// Index l = m*G + g, m the sphere index; weights w_m 2 pi/G.
class SO3Grid {
 public:
  // Throws ValidationError if G < 2N+1.
  SO3Grid(int N, int G);

  int band_limit() const { return sphere_.band_limit(); }
  int gamma_count() const { return G_; }
  std::size_t size() const { return sphere_.size() * static_cast<std::size_t>(G_); }
  std::size_t index(std::size_t m, int g) const { return m * static_cast<std::size_t>(G_) + static_cast<std::size_t>(g); }

  const SphereGrid& zeniths() const { return sphere_; }
  const std::vector<double>& gamma() const { return gamma_; }
  const std::vector<double>& weights() const { return weights_; }
  EulerAngles angles(std::size_t l) const;

 private:
  SphereGrid sphere_;
  int G_;
  std::vector<double> gamma_;
  std::vector<double> weights_;
};

// Sum_m w_m a_m conj(b_m), compensated.
double weighted_dot(std::span<const double> a, std::span<const double> b, std::span<const double> w);
std::complex<double> weighted_dot(std::span<const std::complex<double>> a, std::span<const std::complex<double>> b,
                                  std::span<const double> w);
// Sum_m w_m a_m.
double weighted_sum(std::span<const double> a, std::span<const double> w);

nlohmann::json to_json(const SphereGrid& grid);
nlohmann::json to_json(const CylinderGrid& grid);
nlohmann::json to_json(const SO3Grid& grid);

}  // namespace sphereot
