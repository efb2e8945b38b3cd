#include "sphereot/harmonic_transforms.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sphereot/diagnostics.hpp"
#include "sphereot/special_functions.hpp"
#include "sphereot/summation.hpp"

namespace sphereot {
namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

void check_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw ValidationError(std::string(what) + ": expected " + std::to_string(want) + " samples, got " +
                          std::to_string(got));
  }
}

double log_factorial(int m) { return std::lgamma(m + 1.0); }

// e^{i k x_i} for k = -N..N at (k + N) * count + i.
std::vector<cplx> exp_table(int N, const std::vector<double>& x) {
  std::vector<cplx> t(static_cast<std::size_t>(2 * N + 1) * x.size());
  for (int k = -N; k <= N; ++k)
    for (std::size_t i = 0; i < x.size(); ++i) t[static_cast<std::size_t>(k + N) * x.size() + i] = std::polar(1.0, k * x[i]);
  return t;
}

}  // namespace

// ------------------------------------------------------ HarmonicCoeffs

HarmonicCoeffs::HarmonicCoeffs(int N) : N_(N), c_(static_cast<std::size_t>((N + 1) * (N + 1))) {
  if (N < 0) throw ValidationError("band-limit N must be nonnegative");
}

bool HarmonicCoeffs::has_real_symmetry(double tol) const {
  for (int n = 0; n <= N_; ++n)
    for (int k = 1; k <= n; ++k) {
      const cplx expect = ((k % 2) ? -1.0 : 1.0) * std::conj((*this)(n, k));
      if (std::abs((*this)(n, -k) - expect) > tol) return false;
    }
  for (int n = 0; n <= N_; ++n)
    if (std::abs((*this)(n, 0).imag()) > tol) return false;
  return true;
}

// ----------------------------------------------------- SphereHarmonics

SphereHarmonics::SphereHarmonics(int N)
    : grid_(N), tri_(static_cast<std::size_t>((N + 1) * (N + 2) / 2)), expo_(exp_table(N, grid_.phi())) {
  legendre_.resize(tri_ * static_cast<std::size_t>(N + 1));
  for (int j = 0; j <= N; ++j) {
    normalized_assoc_legendre_all(
        N, grid_.cos_theta()[static_cast<std::size_t>(j)],
        std::span<double>(legendre_.data() + static_cast<std::size_t>(j) * tri_, tri_));
  }
}

// F_j(k) = sum_i f_ij e^{-ik phi_i} at j * (2N+1) + (k+N).
std::vector<cplx> SphereHarmonics::ring_fourier(std::span<const cplx> f) const {
  const int N = band_limit();
  const std::size_t A = static_cast<std::size_t>(grid_.azimuth_count());
  const std::size_t K = static_cast<std::size_t>(2 * N + 1);
  std::vector<cplx> F(static_cast<std::size_t>(N + 1) * K);
  for (int j = 0; j <= N; ++j) {
    const cplx* row = f.data() + static_cast<std::size_t>(j) * A;
    for (std::size_t kk = 0; kk < K; ++kk) {
      const cplx* e = expo_.data() + kk * A;
      cplx s = 0.0;
      for (std::size_t i = 0; i < A; ++i) s += row[i] * std::conj(e[i]);
      F[static_cast<std::size_t>(j) * K + kk] = s;
    }
  }
  return F;
}

HarmonicCoeffs SphereHarmonics::analyze(std::span<const cplx> f) const {
  check_size(f.size(), grid_.size(), "analyze_s2");
  const int N = band_limit();
  const std::size_t K = static_cast<std::size_t>(2 * N + 1);
  const auto F = ring_fourier(f);
  HarmonicCoeffs c(N);
  for (int n = 0; n <= N; ++n) {
    for (int k = -n; k <= n; ++k) {
      const int ak = std::abs(k);
      const double sign = (k < 0 && (ak % 2)) ? -1.0 : 1.0;
      cplx s = 0.0;
      for (int j = 0; j <= N; ++j) {
        s += grid_.ring_weights()[static_cast<std::size_t>(j)] * legendre(j, n, ak) *
             F[static_cast<std::size_t>(j) * K + static_cast<std::size_t>(k + N)];
      }
      c(n, k) = sign * s;
    }
  }
  return c;
}

HarmonicCoeffs SphereHarmonics::analyze(std::span<const double> f) const {
  std::vector<cplx> z(f.begin(), f.end());
  return analyze(z);
}

std::vector<cplx> SphereHarmonics::synthesize_complex(const HarmonicCoeffs& c) const {
  const int N = band_limit();
  const int Nc = c.band_limit();
  if (Nc > N) throw ValidationError("synthesis: coefficient band-limit exceeds the grid band-limit");
  const std::size_t A = static_cast<std::size_t>(grid_.azimuth_count());
  std::vector<cplx> out(grid_.size());
  std::vector<cplx> G(static_cast<std::size_t>(2 * Nc + 1));
  for (int j = 0; j <= N; ++j) {
    for (int k = -Nc; k <= Nc; ++k) {
      const int ak = std::abs(k);
      const double sign = (k < 0 && (ak % 2)) ? -1.0 : 1.0;
      cplx s = 0.0;
      for (int n = ak; n <= Nc; ++n) s += c(n, k) * legendre(j, n, ak);
      G[static_cast<std::size_t>(k + Nc)] = sign * s;
    }
    for (std::size_t i = 0; i < A; ++i) {
      cplx s = 0.0;
      for (int k = -Nc; k <= Nc; ++k) s += G[static_cast<std::size_t>(k + Nc)] * expo_[static_cast<std::size_t>(k + N) * A + i];
      out[static_cast<std::size_t>(j) * A + i] = s;
    }
  }
  return out;
}

std::vector<double> SphereHarmonics::synthesize(const HarmonicCoeffs& c) const {
  const auto z = synthesize_complex(c);
  std::vector<double> out(z.size());
  for (std::size_t m = 0; m < z.size(); ++m) out[m] = z[m].real();
  return out;
}

HarmonicCoeffs analyze_s2(std::span<const double> f, const SphereGrid& grid) {
  return SphereHarmonics(grid.band_limit()).analyze(f);
}

std::vector<double> synthesize_s2(const HarmonicCoeffs& c, const SphereGrid& grid) {
  return SphereHarmonics(grid.band_limit()).synthesize(c);
}

// ------------------------------------------------------ singular values

double sv_vertical(int n, int k) {
  if (n < 0 || std::abs(k) > n) throw ValidationError("sv_vertical: need |k| <= n");
  if ((n + k) % 2 != 0) throw ValidationError("sv_vertical: n+k must be even");
  const double sign = (((n + k) / 2) % 2) ? -1.0 : 1.0;
  if (n <= 20) {
    double ratio = 1.0;  // (n-k)!/(n+k)!
    for (int m = n - k + 1; m <= n + k; ++m) ratio /= m;
    for (int m = n + k + 1; m <= n - k; ++m) ratio *= m;
    return sign * std::sqrt(ratio) * double_factorial(n + k - 1) / double_factorial(n - k);
  }
  const double lv = 0.5 * (log_factorial(n - k) - log_factorial(n + k)) + log_double_factorial(n + k - 1) -
                    log_double_factorial(n - k);
  return sign * std::exp(lv);
}

double lambda_semicircle(int n, int j) {
  if (n < 0 || std::abs(j) > n) throw ValidationError("lambda_semicircle: need |j| <= n");
  if (n == 0) return 2.0 * std::pow(4.0 * kPi, -1.5);
  if (j < 0) return ((-j) % 2 ? -1.0 : 1.0) * lambda_semicircle(n, -j);
  if (j == 0 || (n + j) % 2 != 0) return 0.0;
  const double sign = (j % 2) ? -1.0 : 1.0;
  const double tail = (n % 2 == 0) ? 2.0 : kPi;
  const double log_mag = 0.5 * (std::log((2.0 * n + 1.0) / (4.0 * kPi)) + log_factorial(n - j) - log_factorial(n + j)) +
                         std::log(static_cast<double>(j)) + log_double_factorial(n - 2) +
                         log_double_factorial(n + j - 1) - log_double_factorial(n - j) -
                         log_double_factorial(n + 1);
  return sign / (4.0 * kPi) * std::exp(log_mag) * tail;
}

double sv_semicircle(int n) {
  if (n < 0) throw ValidationError("sv_semicircle: n must be nonnegative");
  CompensatedSum<double> s;
  for (int j = -n; j <= n; ++j) {
    const double l = lambda_semicircle(n, j);
    s.add(l * l);
  }
  return std::sqrt(s.value() * 8.0 * kPi * kPi / (2.0 * n + 1.0));
}

// ---------------------------------------------- VerticalSliceTransform

VerticalSliceTransform::VerticalSliceTransform(int N) : N_(N), harmonics_(N), cylinder_(N) {
  basis_.resize(static_cast<std::size_t>((N + 1) * (N + 1)));
  for (int j = 0; j <= N; ++j)
    for (int n = 0; n <= N; ++n)
      basis_[static_cast<std::size_t>(j * (N + 1) + n)] =
          std::sqrt((2.0 * n + 1.0) / (4.0 * kPi)) * legendre_p(n, cylinder_.t()[static_cast<std::size_t>(j)]);
  sv_.assign(static_cast<std::size_t>((N + 1) * (N + 1)), 0.0);
  for (int n = 0; n <= N; ++n)
    for (int k = -n; k <= n; ++k)
      if ((n + k) % 2 == 0) sv_[HarmonicCoeffs::index(n, k)] = sv_vertical(n, k);
}

std::vector<double> VerticalSliceTransform::forward_coeffs(const HarmonicCoeffs& c) const {
  if (c.band_limit() != N_) throw ValidationError("vertical slice transform: band-limit mismatch");
  const int P = cylinder_.psi_count();
  const auto& expo = harmonics_.grid().phi();  // psi_i equals phi_i
  std::vector<double> out(cylinder_.size());
  std::vector<cplx> H(static_cast<std::size_t>(2 * N_ + 1));
  std::vector<cplx> e(static_cast<std::size_t>(2 * N_ + 1) * static_cast<std::size_t>(P));
  for (int k = -N_; k <= N_; ++k)
    for (int i = 0; i < P; ++i)
      e[static_cast<std::size_t>(k + N_) * static_cast<std::size_t>(P) + static_cast<std::size_t>(i)] =
          std::polar(1.0, k * expo[static_cast<std::size_t>(i)]);
  for (int j = 0; j <= N_; ++j) {
    for (int k = -N_; k <= N_; ++k) {
      cplx s = 0.0;
      for (int n = std::abs(k); n <= N_; n += 2)
        s += sv_[HarmonicCoeffs::index(n, k)] * c(n, k) * basis_[static_cast<std::size_t>(j * (N_ + 1) + n)];
      H[static_cast<std::size_t>(k + N_)] = s;
    }
    for (int i = 0; i < P; ++i) {
      double s = 0.0;
      for (int k = -N_; k <= N_; ++k)
        s += (H[static_cast<std::size_t>(k + N_)] *
              e[static_cast<std::size_t>(k + N_) * static_cast<std::size_t>(P) + static_cast<std::size_t>(i)])
                 .real();
      out[cylinder_.index(i, j)] = s;
    }
  }
  return out;
}

std::vector<double> VerticalSliceTransform::apply(std::span<const double> f) const {
  check_size(f.size(), harmonics_.grid().size(), "vertical slice forward");
  return forward_coeffs(harmonics_.analyze(f));
}

std::vector<double> VerticalSliceTransform::backward(std::span<const double> g, Scaling scaling) const {
  check_size(g.size(), cylinder_.size(), "vertical slice backward");
  const int P = cylinder_.psi_count();
  const auto& psi = cylinder_.psi();
  HarmonicCoeffs a(N_);
  // G_j(k) = sum_i g_ij e^{-ik psi_i}
  std::vector<cplx> G(static_cast<std::size_t>((N_ + 1) * (2 * N_ + 1)));
  for (int j = 0; j <= N_; ++j)
    for (int k = -N_; k <= N_; ++k) {
      cplx s = 0.0;
      for (int i = 0; i < P; ++i) s += g[cylinder_.index(i, j)] * std::polar(1.0, -k * psi[static_cast<std::size_t>(i)]);
      G[static_cast<std::size_t>(j * (2 * N_ + 1) + k + N_)] = s;
    }
  for (int n = 0; n <= N_; ++n)
    for (int k = -n; k <= n; k += 2) {
      cplx s = 0.0;
      for (int j = 0; j <= N_; ++j)
        s += (kPi * cylinder_.t_weights()[static_cast<std::size_t>(j)] / (N_ + 1)) *
             basis_[static_cast<std::size_t>(j * (N_ + 1) + n)] * G[static_cast<std::size_t>(j * (2 * N_ + 1) + k + N_)];
      const double v = sv_[HarmonicCoeffs::index(n, k)];
      a(n, k) = scaling == Scaling::adjoint ? v * s : s / v;
    }
  return harmonics_.synthesize(a);
}

std::vector<double> VerticalSliceTransform::apply_adjoint(std::span<const double> g) const {
  return backward(g, Scaling::adjoint);
}

std::vector<double> VerticalSliceTransform::pinv(std::span<const double> g) const {
  return backward(g, Scaling::inverse);
}

// ------------------------------------------------ SemicircleTransform

SemicircleTransform::SemicircleTransform(int N, int G)
    : N_(N), harmonics_(N), so3_(N, G == 0 ? 2 * N + 1 : G) {
  const int K = 2 * N + 1;
  col_offset_.resize(static_cast<std::size_t>(K * K));
  std::size_t off = 0;
  for (int k = -N; k <= N; ++k)
    for (int jp = -N; jp <= N; ++jp) {
      col_offset_[static_cast<std::size_t>((k + N) * K + jp + N)] = off;
      off += static_cast<std::size_t>(N + 1 - std::max(std::abs(k), std::abs(jp)));
    }
  ring_block_ = off;
  dtable_.assign(ring_block_ * static_cast<std::size_t>(N + 1), 0.0);
  std::vector<double> lam(static_cast<std::size_t>((N + 1) * (N + 1)));
  for (int n = 0; n <= N; ++n)
    for (int jp = -n; jp <= n; ++jp) lam[HarmonicCoeffs::index(n, jp)] = lambda_semicircle(n, jp);
  std::vector<double> col(static_cast<std::size_t>(N + 1));
  for (int ring = 0; ring <= N; ++ring) {
    const double t = so3_.zeniths().cos_theta()[static_cast<std::size_t>(ring)];
    for (int k = -N; k <= N; ++k)
      for (int jp = -N; jp <= N; ++jp) {
        const int l0 = std::max(std::abs(k), std::abs(jp));
        wigner_d_column(N, k, jp, t, col);
        double* dst = dtable_.data() + dcol(ring, k, jp);
        for (int n = l0; n <= N; ++n) dst[n - l0] = lam[HarmonicCoeffs::index(n, jp)] * col[static_cast<std::size_t>(n)];
      }
  }
  w2_.resize(static_cast<std::size_t>(N + 1));
  for (int n = 0; n <= N; ++n) {
    const double w = sv_semicircle(n);
    w2_[static_cast<std::size_t>(n)] = w * w;
  }
}

std::size_t SemicircleTransform::dcol(int ring, int k, int jp) const {
  const int K = 2 * N_ + 1;
  return static_cast<std::size_t>(ring) * ring_block_ + col_offset_[static_cast<std::size_t>((k + N_) * K + jp + N_)];
}

std::vector<double> SemicircleTransform::forward_coeffs(const HarmonicCoeffs& c) const {
  if (c.band_limit() != N_) throw ValidationError("semicircle transform: band-limit mismatch");
  const int K = 2 * N_ + 1;
  const int A = so3_.zeniths().azimuth_count();
  const int G = so3_.gamma_count();
  const auto& alpha = so3_.zeniths().phi();
  const auto& gamma = so3_.gamma();
  std::vector<cplx> ea(static_cast<std::size_t>(K * A)), eg(static_cast<std::size_t>(K * G));
  for (int k = -N_; k <= N_; ++k) {
    for (int i = 0; i < A; ++i) ea[static_cast<std::size_t>((k + N_) * A + i)] = std::polar(1.0, k * alpha[static_cast<std::size_t>(i)]);
    for (int g = 0; g < G; ++g) eg[static_cast<std::size_t>((k + N_) * G + g)] = std::polar(1.0, k * gamma[static_cast<std::size_t>(g)]);
  }
  std::vector<double> out(so3_.size());
  std::vector<cplx> Acoef(static_cast<std::size_t>(K * K));
  std::vector<cplx> B(static_cast<std::size_t>(K));
  for (int ring = 0; ring <= N_; ++ring) {
    // A(k, j') = sum_n lambda_n^{j'} c_n^k d_n^{k,j'}
    for (int k = -N_; k <= N_; ++k)
      for (int jp = -N_; jp <= N_; ++jp) {
        const int l0 = std::max(std::abs(k), std::abs(jp));
        const double* d = dtable_.data() + dcol(ring, k, jp);
        cplx s = 0.0;
        for (int n = l0; n <= N_; ++n) s += c(n, k) * d[n - l0];
        Acoef[static_cast<std::size_t>((k + N_) * K + jp + N_)] = s;
      }
    for (int i = 0; i < A; ++i) {
      for (int jp = -N_; jp <= N_; ++jp) {
        cplx s = 0.0;
        for (int k = -N_; k <= N_; ++k)
          s += Acoef[static_cast<std::size_t>((k + N_) * K + jp + N_)] * ea[static_cast<std::size_t>((k + N_) * A + i)];
        B[static_cast<std::size_t>(jp + N_)] = s;
      }
      const std::size_t m = so3_.zeniths().index(i, ring);
      for (int g = 0; g < G; ++g) {
        double s = 0.0;
        for (int jp = -N_; jp <= N_; ++jp)
          s += (B[static_cast<std::size_t>(jp + N_)] * eg[static_cast<std::size_t>((jp + N_) * G + g)]).real();
        out[so3_.index(m, g)] = s;
      }
    }
  }
  return out;
}

std::vector<double> SemicircleTransform::apply(std::span<const double> f) const {
  check_size(f.size(), harmonics_.grid().size(), "semicircle forward");
  return forward_coeffs(harmonics_.analyze(f));
}

std::vector<double> SemicircleTransform::backward(std::span<const double> gvals, Scaling scaling) const {
  check_size(gvals.size(), so3_.size(), "semicircle backward");
  const int K = 2 * N_ + 1;
  const int A = so3_.zeniths().azimuth_count();
  const int G = so3_.gamma_count();
  const auto& alpha = so3_.zeniths().phi();
  const auto& gamma = so3_.gamma();
  std::vector<cplx> ea(static_cast<std::size_t>(K * A)), eg(static_cast<std::size_t>(K * G));
  for (int k = -N_; k <= N_; ++k) {
    for (int i = 0; i < A; ++i) ea[static_cast<std::size_t>((k + N_) * A + i)] = std::polar(1.0, -k * alpha[static_cast<std::size_t>(i)]);
    for (int g = 0; g < G; ++g) eg[static_cast<std::size_t>((k + N_) * G + g)] = std::polar(1.0, -k * gamma[static_cast<std::size_t>(g)]);
  }
  HarmonicCoeffs a(N_);
  std::vector<cplx> E(static_cast<std::size_t>(A * K));
  std::vector<cplx> F(static_cast<std::size_t>(K * K));
  for (int ring = 0; ring <= N_; ++ring) {
    // E_i(j') = sum_g g e^{-ij' gamma_g}
    for (int i = 0; i < A; ++i) {
      const std::size_t m = so3_.zeniths().index(i, ring);
      const double* row = gvals.data() + so3_.index(m, 0);
      for (int jp = -N_; jp <= N_; ++jp) {
        cplx s = 0.0;
        for (int g = 0; g < G; ++g) s += row[g] * eg[static_cast<std::size_t>((jp + N_) * G + g)];
        E[static_cast<std::size_t>(i * K + jp + N_)] = s;
      }
    }
    // F(k, j') = sum_i e^{-ik alpha_i} E_i(j')
    for (int k = -N_; k <= N_; ++k)
      for (int jp = -N_; jp <= N_; ++jp) {
        cplx s = 0.0;
        for (int i = 0; i < A; ++i)
          s += ea[static_cast<std::size_t>((k + N_) * A + i)] * E[static_cast<std::size_t>(i * K + jp + N_)];
        F[static_cast<std::size_t>((k + N_) * K + jp + N_)] = s;
      }
    const double wr = so3_.zeniths().ring_weights()[static_cast<std::size_t>(ring)] * 2.0 * kPi / G;
    for (int k = -N_; k <= N_; ++k)
      for (int jp = -N_; jp <= N_; ++jp) {
        const int l0 = std::max(std::abs(k), std::abs(jp));
        const double* d = dtable_.data() + dcol(ring, k, jp);
        const cplx f = wr * F[static_cast<std::size_t>((k + N_) * K + jp + N_)];
        for (int n = l0; n <= N_; ++n) a(n, k) += d[n - l0] * f;
      }
  }
  if (scaling == Scaling::inverse) {
    for (int n = 0; n <= N_; ++n)
      for (int k = -n; k <= n; ++k) a(n, k) /= w2_[static_cast<std::size_t>(n)];
  }
  return harmonics_.synthesize(a);
}

std::vector<double> SemicircleTransform::apply_adjoint(std::span<const double> g) const {
  return backward(g, Scaling::adjoint);
}

std::vector<double> SemicircleTransform::pinv(std::span<const double> g) const {
  return backward(g, Scaling::inverse);
}

// ------------------------------------------------------- push-forwards

void DiscreteMeasureS2::validate_probability() const {
  if (points.size() != masses.size() || points.empty()) throw ValidationError("measure on S2: points/masses mismatch");
  CompensatedSum<double> s;
  for (double m : masses) {
    if (!(m >= 0.0)) throw ValidationError("measure on S2: negative mass");
    s.add(m);
  }
  if (std::abs(s.value() - 1.0) > 1e-12) throw ValidationError("measure on S2: masses must sum to 1");
}

DiscreteMeasureS2 DiscreteMeasureS2::rotated(const Rotation& q) const {
  DiscreteMeasureS2 out;
  out.masses = masses;
  out.points.reserve(points.size());
  for (const auto& p : points) out.points.push_back(q * p);
  return out;
}

Measure1D pushforward_vslice(const DiscreteMeasureS2& mu, double psi) {
  std::vector<double> pos;
  pos.reserve(mu.points.size());
  for (const auto& p : mu.points) pos.push_back(slice_op(psi, p));
  return Measure1D::atoms(Domain1D::interval, std::move(pos), mu.masses);
}

Measure1D pushforward_semicircle(const DiscreteMeasureS2& mu, double alpha, double beta) {
  const Rotation qt = euler_matrix({alpha, beta, 0.0}).transpose();
  std::vector<double> pos;
  pos.reserve(mu.points.size());
  for (const auto& p : mu.points) pos.push_back(azi(qt * p));
  return Measure1D::atoms(Domain1D::circle, std::move(pos), mu.masses);
}

}  // namespace sphereot
