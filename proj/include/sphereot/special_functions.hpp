#pragma once

#include <complex>
#include <span>
#include <vector>

namespace sphereot {

// Legendre polynomial P_n(t), |t| <= 1.
double legendre_p(int n, double t);

// Associated Legendre function P_n^k(t) including the Condon-Shortley
// factor (-1)^k. Negative k: P_n^{-k} = (-1)^k (n-k)!/(n+k)! P_n^k.
double assoc_legendre(int n, int k, double t);

// sqrt((2n+1)/(4 pi) (n-k)!/(n+k)!) P_n^k(t), evaluated by a normalized
// recurrence that stays finite for large n.
double normalized_assoc_legendre(int n, int k, double t);

// Fills out[n*(n+1)/2 + k] = normalized_assoc_legendre(n, k, t) for
// 0 <= k <= n <= N. out must have (N+1)(N+2)/2 entries.
void normalized_assoc_legendre_all(int N, double t, std::span<double> out);

// Y_n^k at spherical coordinates (phi, theta).
std::complex<double> sph_harmonic(int n, int k, double phi, double theta);

// Wigner small-d function d_n^{k,j}(t), t = cos(beta).
double wigner_d(int n, int k, int j, double t);

// d_n^{k,j}(t) for all n in [max(|k|,|j|), N]; out[n] is written for those n
// and left untouched below. out must have N+1 entries.
void wigner_d_column(int N, int k, int j, double t, std::span<double> out);

// e^{-ik alpha} d_n^{k,j}(cos beta) e^{-ij gamma}.
std::complex<double> wigner_D(int n, int k, int j, double alpha, double beta, double gamma);

// Principal branch of Lambert W on z >= 0.
double lambert_w(double z);

// W(e^u) for any real u without forming e^u when it would overflow.
double lambert_w_exp(double u);

// m!! for m >= -1, with (-1)!! = 0!! = 1. Exact in double up to m = 40ish,
// afterwards rounded.
double double_factorial(int m);
double log_double_factorial(int m);

}  // namespace sphereot
