#pragma once

#include <span>
#include <vector>

#include "sphereot/harmonic_transforms.hpp"

namespace sphereot {

// Weighted-simplex projection: argmin ||f - x||_w over f >= 0, <f, 1>_w = 1.
std::vector<double> project_simplex(std::span<const double> x, std::span<const double> w);

// sum_i w_i (f_i log(f_i/g_i) - f_i + g_i). +inf when f_i > 0 with g_i = 0.
// Throws ValidationError for negative entries.
double kl_divergence(std::span<const double> f, std::span<const double> g, std::span<const double> w);

// prox_{sigma F*}(x) for F = a KL(., b), applied entrywise:
// x - a W((sigma b / a) e^{x/a}); returns x where b = 0.
double prox_kl_conjugate(double x, double sigma, double a, double b);

// Largest singular value between the weighted spaces, by power iteration.
double operator_norm(const LinearOperator& op, int iterations = 50);

struct PdParams {
  double rho = 0.1;
  double sigma = 1.0;
  double tau = 0.25;  // <= 0 selects 0.9 / (sigma (1 + ||T||^2))
  double theta = 1.0;
  int iterations = 200;
  double tolerance = 0.0;  // relative primal change; 0 runs all iterations
  bool check_step = true;  // require 1/(tau sigma) > 1 + (1.05 ||T||)^2
};

struct PdResult {
  std::vector<double> density;
  std::vector<double> objective;  // one entry per iteration
  int iterations = 0;
  double operator_norm = 0.0;
  double tau = 0.0;
};

// Primal-dual solver for argmin_f KL(Tf, g) + rho KL(f, 1) over the weighted simplex.
// Negative entries of g are clipped; a mass off 1 by more than 1e-6 is renormalized. Both warn.
PdResult pd_invert(const LinearOperator& T, std::span<const double> g, const PdParams& params = {});

}  // namespace sphereot
