#include "sphereot/ot1d.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "sphereot/diagnostics.hpp"
#include "sphereot/summation.hpp"

namespace sphereot {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Affine piece of a quantile function: x(r) = x0 + slope (r - r0) on [r0, r1].
struct Piece {
  double r0, r1, x0, slope;
  double at(double r) const { return x0 + slope * (r - r0); }
};

void append_pieces(const Cdf1D& cdf, double lo, double hi, double r_shift, double x_shift,
                   std::vector<Piece>& out) {
  const auto& x = cdf.x();
  const auto& F = cdf.F();
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double fa = F[i - 1] + r_shift, fb = F[i] + r_shift;
    if (!(fb > fa)) continue;
    const double a = std::max(fa, lo), b = std::min(fb, hi);
    if (!(b > a)) continue;
    const double slope = (x[i] - x[i - 1]) / (F[i] - F[i - 1]);
    out.push_back({a, b, x[i - 1] + x_shift + slope * (a - fa), slope});
  }
}

// Quantile pieces covering [lo, hi] (extended periodically on the circle).
std::vector<Piece> quantile_pieces(const Cdf1D& cdf, double lo, double hi) {
  std::vector<Piece> out;
  if (cdf.domain() == Domain1D::interval) {
    append_pieces(cdf, lo, hi, 0.0, 0.0, out);
    return out;
  }
  const double F0 = cdf.F().front();
  const long k_lo = static_cast<long>(std::floor(lo - F0)) - 1;
  const long k_hi = static_cast<long>(std::ceil(hi - F0)) + 1;
  for (long k = k_lo; k <= k_hi; ++k) append_pieces(cdf, lo, hi, static_cast<double>(k), kTwoPi * k, out);
  return out;
}

// int_0^L |d0 + (d1 - d0) s / L|^p ds.
double integrate_abs_pow(double L, double d0, double d1, double p) {
  if (!(L > 0.0)) return 0.0;
  if (p == 2.0) return L * (d0 * d0 + d0 * d1 + d1 * d1) / 3.0;
  if ((d0 > 0.0 && d1 < 0.0) || (d0 < 0.0 && d1 > 0.0)) {
    const double a = std::abs(d0), b = std::abs(d1);
    const double L0 = L * a / (a + b);
    return (L0 * std::pow(a, p) + (L - L0) * std::pow(b, p)) / (p + 1.0);
  }
  const double a = std::abs(d0), b = std::abs(d1);
  const double m = 0.5 * (a + b), delta = b - a;
  if (m == 0.0) return 0.0;
  if (std::abs(delta) <= 1e-6 * m) {
    const double q = delta / m;
    return L * std::pow(m, p) * (1.0 + p * (p - 1.0) * q * q / 24.0);
  }
  return L * (std::pow(b, p + 1.0) - std::pow(a, p + 1.0)) / ((p + 1.0) * delta);
}

// int over [lo, hi] of |A(r) - B(r)|^p for two piece lists covering it.
double merged_cost(const std::vector<Piece>& A, const std::vector<Piece>& B, double lo, double p) {
  CompensatedSum<double> sum;
  std::size_t ia = 0, ib = 0;
  double cur = lo;
  while (ia < A.size() && ib < B.size()) {
    const double end = std::min(A[ia].r1, B[ib].r1);
    if (end > cur) {
      sum.add(integrate_abs_pow(end - cur, A[ia].at(cur) - B[ib].at(cur), A[ia].at(end) - B[ib].at(end), p));
      cur = end;
    }
    if (A[ia].r1 <= end) ++ia;
    if (B[ib].r1 <= end) ++ib;
  }
  return sum.value();
}

void check_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw ValidationError("transport exponent p must be finite and >= 1");
}

void require_domain(const Measure1D& m, Domain1D d, const char* what) {
  if (m.domain() != d) throw ValidationError(std::string(what) + ": expected " + to_string(d) + " measure");
}

void require_positive_reference(const Measure1D& omega, const char* what) {
  if (omega.kind() != Measure1D::Kind::density) {
    throw ValidationError(std::string(what) + ": reference must be a grid density, not atoms");
  }
  for (double v : omega.values()) {
    if (!(v > 0.0)) throw ValidationError(std::string(what) + ": reference density has zero cells");
  }
}

double normalize_masses(std::vector<double>& m, std::span<const double> w, const char* what) {
  CompensatedSum<double> total;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!(m[i] >= 0.0) || !std::isfinite(m[i])) throw ValidationError(std::string(what) + ": negative or non-finite entry");
    total.add(m[i] * (w.empty() ? 1.0 : w[i]));
  }
  const double t = total.value();
  if (std::abs(t - 1.0) > 1e-6) {
    throw ValidationError(std::string(what) + ": total mass " + std::to_string(t) + " is not 1");
  }
  for (double& v : m) v /= t;
  return t;
}

void cummax(std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) v[i] = std::max(v[i], v[i - 1]);
}

double density_on_cell(const Measure1D& omega, double x) {
  const auto& e = omega.edges();
  double y = x;
  if (omega.domain() == Domain1D::circle) {
    y = e.front() + std::fmod(x - e.front(), kTwoPi);
    if (y < e.front()) y += kTwoPi;
  }
  auto it = std::upper_bound(e.begin(), e.end(), y);
  std::size_t cell = it == e.begin() ? 0 : static_cast<std::size_t>(it - e.begin()) - 1;
  cell = std::min(cell, omega.values().size() - 1);
  return omega.values()[cell];
}

CdtFunction ccdt_with_shift(const Measure1D& mu, const Measure1D& omega, std::span<const double> positions,
                            double theta) {
  CdtFunction h;
  h.domain = Domain1D::circle;
  h.shift = theta;
  h.positions.assign(positions.begin(), positions.end());
  h.values.resize(positions.size());
  const Cdf1D& Fo = omega.cdf();
  const Cdf1D& Fm = mu.cdf();
  for (std::size_t s = 0; s < positions.size(); ++s) {
    h.values[s] = Fm.quantile(Fo(positions[s]) + theta) - positions[s];
  }
  return h;
}

}  // namespace

std::string to_string(Domain1D d) { return d == Domain1D::interval ? "interval" : "circle"; }

// ---------------------------------------------------------------- Cdf1D

Cdf1D::Cdf1D(Domain1D domain, std::vector<double> x, std::vector<double> F)
    : domain_(domain), x_(std::move(x)), F_(std::move(F)) {
  if (x_.size() != F_.size() || x_.size() < 2) throw ValidationError("Cdf1D needs matching breakpoints, at least two");
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(F_[i])) throw ValidationError("Cdf1D: non-finite breakpoint");
    if (i > 0) {
      if (x_[i] < x_[i - 1] - 1e-12 || F_[i] < F_[i - 1] - 1e-12) throw ValidationError("Cdf1D: breakpoints not monotone");
      x_[i] = std::max(x_[i], x_[i - 1]);
      F_[i] = std::max(F_[i], F_[i - 1]);
    }
  }
  if (domain_ == Domain1D::interval) {
    if (x_.front() < -1.0 - 1e-12 || x_.back() > 1.0 + 1e-12) throw ValidationError("Cdf1D: breakpoints outside [-1,1]");
    if (std::abs(F_.front()) > 1e-9 || std::abs(F_.back() - 1.0) > 1e-9) {
      throw ValidationError("Cdf1D: interval CDF must run from 0 to 1");
    }
    for (double& v : x_) v = std::clamp(v, -1.0, 1.0);
    for (double& v : F_) v = std::clamp(v, 0.0, 1.0);
    F_.front() = 0.0;
    F_.back() = 1.0;
  } else {
    if (std::abs(x_.back() - x_.front() - kTwoPi) > 1e-9) throw ValidationError("Cdf1D: circle polyline must span 2 pi");
    if (std::abs(F_.back() - F_.front() - 1.0) > 1e-9) throw ValidationError("Cdf1D: circle polyline must carry mass 1");
    x_.back() = x_.front() + kTwoPi;
    F_.back() = F_.front() + 1.0;
    const double anchor = left_limit(0.0);
    for (double& v : F_) v -= anchor;
  }
}

double Cdf1D::base_eval(double x, bool left) const {
  if (left) {
    const auto it = std::lower_bound(x_.begin(), x_.end(), x);
    if (it == x_.begin()) return F_.front();
    if (it == x_.end()) return F_.back();
    const std::size_t i = static_cast<std::size_t>(it - x_.begin());
    return F_[i - 1] + (x - x_[i - 1]) / (x_[i] - x_[i - 1]) * (F_[i] - F_[i - 1]);
  }
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  if (it == x_.begin()) return F_.front();
  if (it == x_.end()) return F_.back();
  const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  return F_[i] + (x - x_[i]) / (x_[i + 1] - x_[i]) * (F_[i + 1] - F_[i]);
}

double Cdf1D::operator()(double x) const {
  if (domain_ == Domain1D::interval) return base_eval(x, false);
  double k = std::floor((x - x_.front()) / kTwoPi);
  double xr = x - kTwoPi * k;
  if (xr >= x_.back()) {
    xr -= kTwoPi;
    k += 1.0;
  } else if (xr < x_.front()) {
    xr += kTwoPi;
    k -= 1.0;
  }
  return base_eval(xr, false) + k;
}

double Cdf1D::left_limit(double x) const {
  if (domain_ == Domain1D::interval) return base_eval(x, true);
  double k = std::ceil((x - x_.front()) / kTwoPi) - 1.0;
  double xr = x - kTwoPi * k;
  if (xr <= x_.front()) {
    xr += kTwoPi;
    k -= 1.0;
  } else if (xr > x_.back()) {
    xr -= kTwoPi;
    k += 1.0;
  }
  return base_eval(xr, true) + k;
}

double Cdf1D::base_quantile(double r) const {
  const auto it = std::lower_bound(F_.begin(), F_.end(), r);
  if (it == F_.begin()) return x_.front();
  if (it == F_.end()) return x_.back();
  const std::size_t i = static_cast<std::size_t>(it - F_.begin());
  return x_[i - 1] + (r - F_[i - 1]) / (F_[i] - F_[i - 1]) * (x_[i] - x_[i - 1]);
}

double Cdf1D::base_quantile_right(double r) const {
  const auto it = std::upper_bound(F_.begin(), F_.end(), r);
  if (it == F_.begin()) return x_.front();
  if (it == F_.end()) return x_.back();
  const std::size_t i = static_cast<std::size_t>(it - F_.begin());
  return x_[i - 1] + (r - F_[i - 1]) / (F_[i] - F_[i - 1]) * (x_[i] - x_[i - 1]);
}

double Cdf1D::quantile(double r) const {
  if (domain_ == Domain1D::interval) {
    if (!(r >= 0.0 && r <= 1.0)) throw std::domain_error("quantile level outside [0,1]");
    return base_quantile(r);
  }
  if (!std::isfinite(r)) throw std::domain_error("quantile level must be finite");
  const double k = std::ceil(r - F_.front() - 1.0);
  return base_quantile(r - k) + kTwoPi * k;
}

double Cdf1D::quantile_right(double r) const {
  if (domain_ == Domain1D::interval) {
    if (!(r >= 0.0 && r <= 1.0)) throw std::domain_error("quantile level outside [0,1]");
    return base_quantile_right(r);
  }
  if (!std::isfinite(r)) throw std::domain_error("quantile level must be finite");
  const double k = std::floor(r - F_.front());
  return base_quantile_right(r - k) + kTwoPi * k;
}

// ------------------------------------------------------------- Measure1D

std::vector<double> cell_edges(Domain1D domain, std::span<const double> nodes, std::span<const double> weights) {
  if (nodes.size() != weights.size() || nodes.empty()) throw ValidationError("density grid: nodes/weights mismatch");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw ValidationError("density grid: weights must be positive");
    total += w;
  }
  const double expected = domain == Domain1D::interval ? 2.0 : kTwoPi;
  if (std::abs(total - expected) > 1e-9) {
    throw ValidationError("density grid: weights sum to " + std::to_string(total) + ", expected " +
                          std::to_string(expected));
  }
  std::vector<double> e(nodes.size() + 1);
  e[0] = domain == Domain1D::interval ? -1.0 : nodes[0] - 0.5 * weights[0];
  CompensatedSum<double> acc;
  acc.add(e[0]);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc.add(weights[i]);
    e[i + 1] = acc.value();
  }
  e.back() = e.front() + expected;
  return e;
}

double clip_and_normalize(std::vector<double>& values, std::span<const double> weights) {
  if (values.size() != weights.size()) throw ValidationError("clip_and_normalize: size mismatch");
  CompensatedSum<double> neg, pos;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw NumericError("non-finite slice value");
    if (values[i] < 0.0) {
      neg.add(-values[i] * weights[i]);
      values[i] = 0.0;
    } else {
      pos.add(values[i] * weights[i]);
    }
  }
  const double p = pos.value();
  if (!(p > 0.0)) throw NumericError("slice has no positive mass");
  for (double& v : values) v /= p;
  return neg.value() / p;
}

Measure1D Measure1D::atoms(Domain1D domain, std::vector<double> positions, std::vector<double> masses) {
  if (positions.size() != masses.size() || positions.empty()) throw ValidationError("atoms: positions/masses mismatch");
  normalize_masses(masses, {}, "atoms");
  std::vector<std::pair<double, double>> at;
  at.reserve(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    double x = positions[i];
    if (!std::isfinite(x)) throw ValidationError("atoms: non-finite position");
    if (domain == Domain1D::interval) {
      if (x < -1.0 - 1e-12 || x > 1.0 + 1e-12) throw ValidationError("atoms: interval position outside [-1,1]");
      x = std::clamp(x, -1.0, 1.0);
    } else {
      x = std::fmod(x, kTwoPi);
      if (x < 0.0) x += kTwoPi;
      if (x >= kTwoPi) x = 0.0;
    }
    if (masses[i] > 0.0) at.emplace_back(x, masses[i]);
  }
  std::sort(at.begin(), at.end());
  std::vector<double> pos, mass;
  for (const auto& [x, m] : at) {
    if (!pos.empty() && pos.back() == x) {
      mass.back() += m;
    } else {
      pos.push_back(x);
      mass.push_back(m);
    }
  }
  const double lo = domain == Domain1D::interval ? -1.0 : 0.0;
  const double hi = domain == Domain1D::interval ? 1.0 : kTwoPi;
  std::vector<double> cx{lo}, cF{0.0};
  CompensatedSum<double> acc;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    cx.push_back(pos[i]);
    cF.push_back(acc.value());
    acc.add(mass[i]);
    cx.push_back(pos[i]);
    cF.push_back(i + 1 == pos.size() ? 1.0 : acc.value());
  }
  cx.push_back(hi);
  cF.push_back(1.0);
  Measure1D m(Kind::atoms, Cdf1D(domain, std::move(cx), std::move(cF)));
  m.a_ = std::move(pos);
  m.b_ = std::move(mass);
  return m;
}

Measure1D Measure1D::density(Domain1D domain, std::vector<double> nodes, std::vector<double> weights,
                             std::vector<double> values) {
  if (values.size() != nodes.size()) throw ValidationError("density: values/nodes mismatch");
  std::vector<double> e = cell_edges(domain, nodes, weights);
  normalize_masses(values, weights, "density");
  std::vector<double> F(e.size());
  CompensatedSum<double> acc;
  F[0] = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    acc.add(values[i] * weights[i]);
    F[i + 1] = acc.value();
  }
  F.back() = 1.0;
  Measure1D m(Kind::density, Cdf1D(domain, e, std::move(F)));
  m.a_ = std::move(nodes);
  m.b_ = std::move(weights);
  m.values_ = std::move(values);
  m.edges_ = std::move(e);
  return m;
}

Measure1D Measure1D::from_cdf(Cdf1D cdf) { return Measure1D(Kind::cdf, std::move(cdf)); }

const Cdf1D& cdf(const Measure1D& mu) { return mu.cdf(); }
double quantile(const Cdf1D& F, double r) { return F.quantile(r); }

// ------------------------------------------------------------- distances

double wasserstein_interval(const Measure1D& mu, const Measure1D& nu, double p) {
  check_p(p);
  require_domain(mu, Domain1D::interval, "wasserstein_interval");
  require_domain(nu, Domain1D::interval, "wasserstein_interval");
  const auto A = quantile_pieces(mu.cdf(), 0.0, 1.0);
  const auto B = quantile_pieces(nu.cdf(), 0.0, 1.0);
  return std::pow(std::max(0.0, merged_cost(A, B, 0.0, p)), 1.0 / p);
}

double circular_transport_cost(const Measure1D& mu, const Measure1D& nu, double theta, double p) {
  check_p(p);
  require_domain(mu, Domain1D::circle, "circular transport");
  require_domain(nu, Domain1D::circle, "circular transport");
  const auto A = quantile_pieces(mu.cdf(), 0.0, 1.0);
  auto B = quantile_pieces(nu.cdf(), theta, 1.0 + theta);
  for (auto& b : B) {
    b.r0 -= theta;
    b.r1 -= theta;
  }
  return merged_cost(A, B, 0.0, p);
}

double optimal_shift(const Measure1D& mu, const Measure1D& nu, double p) {
  check_p(p);
  // Golden-section search on the convex cost; the minimizer lies in [-1, 1].
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = -1.5, b = 1.5;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = circular_transport_cost(mu, nu, c, p), fd = circular_transport_cost(mu, nu, d, p);
  while (b - a > 1e-11) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = circular_transport_cost(mu, nu, c, p);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = circular_transport_cost(mu, nu, d, p);
    }
  }
  // The cost is piecewise smooth with kinks where level sets of the two CDFs
  // align; for atoms it is piecewise linear, so the minimum sits on a kink.
  double best = 0.5 * (a + b);
  double best_cost = circular_transport_cost(mu, nu, best, p);
  const double window = 1e-7;
  for (double fn : nu.cdf().F()) {
    for (double fm : mu.cdf().F()) {
      const double t = fn - fm;
      const double k = std::round(best - t);
      const double cand = t + k;
      if (std::abs(cand - best) > window || cand == best) continue;
      const double c = circular_transport_cost(mu, nu, cand, p);
      if (c < best_cost) {
        best_cost = c;
        best = cand;
      }
    }
  }
  return best;
}

double wasserstein_circle(const Measure1D& mu, const Measure1D& nu, double p) {
  // The shift search is not symmetric in rounding; fix an argument order.
  const auto key = [](const Measure1D& m) { return std::tie(m.cdf().x(), m.cdf().F()); };
  if (key(nu) < key(mu)) return wasserstein_circle(nu, mu, p);
  const double theta = optimal_shift(mu, nu, p);
  return std::pow(std::max(0.0, circular_transport_cost(mu, nu, theta, p)), 1.0 / p);
}

// ------------------------------------------------------------------- CDT

std::vector<double> reference_positions(const Measure1D& omega) {
  require_positive_reference(omega, "reference_positions");
  if (omega.domain() == Domain1D::interval) return omega.edges();
  std::vector<double> pos{0.0};
  for (double e : omega.edges()) {
    double y = std::fmod(e, kTwoPi);
    if (y < 0.0) y += kTwoPi;
    if (y > 0.0 && y < kTwoPi) pos.push_back(y);
  }
  pos.push_back(kTwoPi);
  std::sort(pos.begin(), pos.end());
  pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
  return pos;
}

std::vector<double> refined_positions(const Measure1D& omega, std::span<const Measure1D* const> others,
                                      std::span<const double> shifts) {
  std::vector<double> pos = reference_positions(omega);
  const Cdf1D& Fo = omega.cdf();
  for (std::size_t m = 0; m < others.size(); ++m) {
    const auto& F = others[m]->cdf().F();
    if (omega.domain() == Domain1D::interval) {
      for (double level : F) {
        if (level > 0.0 && level < 1.0) pos.push_back(Fo.quantile(level));
      }
    } else {
      const double theta = m < shifts.size() ? shifts[m] : 0.0;
      const double base = Fo(0.0);
      for (double level : F) {
        double l = level - theta;
        l -= std::floor(l - base);
        double x = Fo.quantile(l);
        x = std::fmod(x, kTwoPi);
        if (x < 0.0) x += kTwoPi;
        if (x > 0.0 && x < kTwoPi) pos.push_back(x);
      }
    }
  }
  std::sort(pos.begin(), pos.end());
  pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
  return pos;
}

CdtFunction cdt(const Measure1D& mu, const Measure1D& omega) { return cdt(mu, omega, reference_positions(omega)); }

CdtFunction cdt(const Measure1D& mu, const Measure1D& omega, std::span<const double> positions) {
  require_domain(mu, Domain1D::interval, "cdt");
  require_domain(omega, Domain1D::interval, "cdt");
  require_positive_reference(omega, "cdt");
  CdtFunction h;
  h.domain = Domain1D::interval;
  h.positions.assign(positions.begin(), positions.end());
  h.values.resize(positions.size());
  const Cdf1D& Fo = omega.cdf();
  const Cdf1D& Fm = mu.cdf();
  for (std::size_t s = 0; s < positions.size(); ++s) {
    const double r = std::clamp(Fo(positions[s]), 0.0, 1.0);
    const double T = r <= 0.0 ? Fm.quantile_right(0.0) : Fm.quantile(r);
    h.values[s] = T - positions[s];
  }
  return h;
}

Measure1D icdt(const CdtFunction& h, const Measure1D& omega) {
  require_domain(omega, Domain1D::interval, "icdt");
  if (h.domain != Domain1D::interval) throw ValidationError("icdt: displacement is not an interval CDT");
  if (h.positions.size() != h.values.size() || h.positions.size() < 2) throw ValidationError("icdt: malformed CDT samples");
  const Cdf1D& Fo = omega.cdf();
  std::vector<double> T(h.positions.size()), F(h.positions.size());
  for (std::size_t s = 0; s < T.size(); ++s) {
    T[s] = std::clamp(h.positions[s] + h.values[s], -1.0, 1.0);
    F[s] = Fo(h.positions[s]);
  }
  if (F.front() > 1e-12 || F.back() < 1.0 - 1e-12) {
    throw ValidationError("icdt: CDT samples must span the whole reference support");
  }
  F.front() = 0.0;
  F.back() = 1.0;
  cummax(T);
  return Measure1D::from_cdf(Cdf1D(Domain1D::interval, std::move(T), std::move(F)));
}

CdtFunction ccdt(const Measure1D& mu, const Measure1D& omega) { return ccdt(mu, omega, reference_positions(omega)); }

CdtFunction ccdt(const Measure1D& mu, const Measure1D& omega, std::span<const double> positions) {
  require_domain(mu, Domain1D::circle, "ccdt");
  require_domain(omega, Domain1D::circle, "ccdt");
  require_positive_reference(omega, "ccdt");
  return ccdt_with_shift(mu, omega, positions, optimal_shift(omega, mu, 2.0));
}

Measure1D iccdt(const CdtFunction& h, const Measure1D& omega) {
  require_domain(omega, Domain1D::circle, "iccdt");
  if (h.domain != Domain1D::circle) throw ValidationError("iccdt: displacement is not a circular CDT");
  const std::size_t n = h.positions.size();
  if (n != h.values.size() || n < 2) throw ValidationError("iccdt: malformed CDT samples");
  if (std::abs(h.positions.front()) > 1e-12 || std::abs(h.positions.back() - kTwoPi) > 1e-12) {
    throw ValidationError("iccdt: CDT samples must run from 0 to 2 pi");
  }
  const Cdf1D& Fo = omega.cdf();
  std::vector<double> T(n), F(n);
  for (std::size_t s = 0; s < n; ++s) {
    T[s] = h.positions[s] + h.values[s];
    F[s] = Fo(h.positions[s]);
  }
  cummax(T);
  T.back() = T.front() + kTwoPi;
  F.back() = F.front() + 1.0;
  return Measure1D::from_cdf(Cdf1D(Domain1D::circle, std::move(T), std::move(F)));
}

double cdt_distance(const CdtFunction& h1, const CdtFunction& h2, const Measure1D& omega, double p) {
  check_p(p);
  if (h1.positions != h2.positions || h1.values.size() != h1.positions.size() ||
      h2.values.size() != h2.positions.size()) {
    throw ValidationError("cdt_distance: displacements must share sample positions");
  }
  if (omega.kind() != Measure1D::Kind::density) throw ValidationError("cdt_distance: reference must be a density");
  // Split every sample interval at the reference cell edges.
  std::vector<double> cuts = h1.positions;
  const double lo = h1.positions.front(), hi = h1.positions.back();
  const int wraps = omega.domain() == Domain1D::circle ? 1 : 0;
  for (int shift = -wraps; shift <= wraps; ++shift) {
    for (double x : omega.edges()) {
      const double y = x + shift * kTwoPi;
      if (y > lo && y < hi) cuts.push_back(y);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  CompensatedSum<double> sum;
  for (std::size_t c = 1; c < cuts.size(); ++c) {
    const double a = cuts[c - 1], b = cuts[c];
    if (!(b > a)) continue;
    // Evaluate just inside the piece so sample kinks fall on the boundary.
    auto it = std::upper_bound(h1.positions.begin(), h1.positions.end(), a);
    const std::size_t i = std::min<std::size_t>(
        it == h1.positions.begin() ? 0 : static_cast<std::size_t>(it - h1.positions.begin()) - 1,
        h1.positions.size() - 2);
    const double x0 = h1.positions[i], x1 = h1.positions[i + 1];
    const double d0s = h1.values[i] - h2.values[i], d1s = h1.values[i + 1] - h2.values[i + 1];
    auto lin = [&](double x) { return x1 > x0 ? d0s + (x - x0) / (x1 - x0) * (d1s - d0s) : d0s; };
    sum.add(density_on_cell(omega, 0.5 * (a + b)) * integrate_abs_pow(b - a, lin(a), lin(b), p));
  }
  return std::pow(std::max(0.0, sum.value()), 1.0 / p);
}

Measure1D interpolate_interval(const Measure1D& mu, const Measure1D& nu, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw ValidationError("interpolation parameter must lie in [0,1]");
  require_domain(mu, Domain1D::interval, "interpolate_interval");
  require_domain(nu, Domain1D::interval, "interpolate_interval");
  require_positive_reference(mu, "interpolate_interval");
  const Measure1D* others[] = {&nu};
  const auto positions = refined_positions(mu, others);
  CdtFunction h = cdt(nu, mu, positions);
  for (double& v : h.values) v *= delta;
  return icdt(h, mu);
}

Measure1D interpolate_circle(const Measure1D& mu, const Measure1D& nu, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw ValidationError("interpolation parameter must lie in [0,1]");
  require_domain(mu, Domain1D::circle, "interpolate_circle");
  require_domain(nu, Domain1D::circle, "interpolate_circle");
  require_positive_reference(mu, "interpolate_circle");
  const double theta = optimal_shift(mu, nu, 2.0);
  const Measure1D* others[] = {&nu};
  const double shifts[] = {theta};
  const auto positions = refined_positions(mu, others, shifts);
  CdtFunction h = ccdt_with_shift(nu, mu, positions, theta);
  for (double& v : h.values) v *= delta;
  return iccdt(h, mu);
}

std::vector<double> rebin(const Measure1D& mu, std::span<const double> nodes, std::span<const double> weights) {
  const auto e = cell_edges(mu.domain(), nodes, weights);
  const Cdf1D& F = mu.cdf();
  std::vector<double> out(nodes.size());
  double prev = mu.domain() == Domain1D::interval ? F.left_limit(e.front()) : F(e.front());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double next = F(e[j + 1]);
    out[j] = std::max(0.0, next - prev) / weights[j];
    prev = next;
  }
  return out;
}

// ------------------------------------------------------------------- I/O

void write_csv(std::ostream& out, const Measure1D& mu) {
  out.precision(17);
  switch (mu.kind()) {
    case Measure1D::Kind::atoms:
      out << "# measure=" << to_string(mu.domain()) << " kind=atoms\nposition,mass\n";
      for (std::size_t i = 0; i < mu.positions().size(); ++i) out << mu.positions()[i] << ',' << mu.masses()[i] << '\n';
      break;
    case Measure1D::Kind::density:
      out << "# measure=" << to_string(mu.domain()) << " kind=density\nnode,value,weight\n";
      for (std::size_t i = 0; i < mu.nodes().size(); ++i)
        out << mu.nodes()[i] << ',' << mu.values()[i] << ',' << mu.weights()[i] << '\n';
      break;
    case Measure1D::Kind::cdf:
      out << "# measure=" << to_string(mu.domain()) << " kind=cdf\nx,F\n";
      for (std::size_t i = 0; i < mu.cdf().x().size(); ++i) out << mu.cdf().x()[i] << ',' << mu.cdf().F()[i] << '\n';
      break;
  }
}

Measure1D read_measure1d_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind('#', 0) != 0) throw ValidationError("measure CSV: missing '# measure=' header");
  std::istringstream hs(line.substr(1));
  std::string tok, flavor, kind;
  while (hs >> tok) {
    if (tok.rfind("measure=", 0) == 0) flavor = tok.substr(8);
    else if (tok.rfind("kind=", 0) == 0) kind = tok.substr(5);
    else throw ValidationError("measure CSV: unknown header field '" + tok + "'");
  }
  Domain1D domain;
  if (flavor == "interval") domain = Domain1D::interval;
  else if (flavor == "circle") domain = Domain1D::circle;
  else throw ValidationError("measure CSV: flavor must be interval or circle");
  if (!std::getline(in, line)) throw ValidationError("measure CSV: missing column header");
  std::vector<std::vector<double>> cols;
  std::size_t lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ValidationError("measure CSV line " + std::to_string(lineno) + ": not a number '" + cell + "'");
      }
    }
    if (cols.empty()) cols.resize(row.size());
    if (row.size() != cols.size()) throw ValidationError("measure CSV line " + std::to_string(lineno) + ": column count");
    for (std::size_t c = 0; c < row.size(); ++c) cols[c].push_back(row[c]);
  }
  if (cols.empty()) throw ValidationError("measure CSV: no rows");
  if (kind == "atoms" && cols.size() == 2) return Measure1D::atoms(domain, cols[0], cols[1]);
  if (kind == "density" && cols.size() == 3) return Measure1D::density(domain, cols[0], cols[2], cols[1]);
  if (kind == "cdf" && cols.size() == 2) return Measure1D::from_cdf(Cdf1D(domain, cols[0], cols[1]));
  throw ValidationError("measure CSV: kind '" + kind + "' with " + std::to_string(cols.size()) + " columns");
}

}  // namespace sphereot
