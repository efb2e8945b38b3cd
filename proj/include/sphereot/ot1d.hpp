#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sphereot {

enum class Domain1D { interval, circle };

std::string to_string(Domain1D d);

// Monotone polyline CDF through (x_i, F_i). Repeated x encode jumps; between
// distinct x the CDF is linear. Evaluation is right-continuous.
//
// Interval flavor: F runs from 0 to 1, x inside [-1, 1]; F = 0 left of x_0
// and 1 right of x_last.
// Circle flavor: the polyline spans one period, x_last - x_0 = 2 pi and
// F_last - F_0 = 1, extended by F(x + 2 pi) = F(x) + 1. It is anchored so that
// the left limit at 0 is 0, i.e. F(x) = mu([0, x]) on [0, 2 pi).
class Cdf1D {
 public:
  Cdf1D(Domain1D domain, std::vector<double> x, std::vector<double> F);

  Domain1D domain() const { return domain_; }
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& F() const { return F_; }

  double operator()(double x) const;
  double left_limit(double x) const;
  // min{x : F(x) >= r}. Interval: r in [0, 1], else std::domain_error.
  // Circle: any real r (extended quantile).
  double quantile(double r) const;
  // lim_{s -> r+} quantile(s); for r = 0 on the interval this is the support start.
  double quantile_right(double r) const;

 private:
  double base_eval(double x, bool left) const;
  double base_quantile(double r) const;
  double base_quantile_right(double r) const;

  Domain1D domain_;
  std::vector<double> x_, F_;
};

// Probability measure on [-1, 1] or on the circle [0, 2 pi).
class Measure1D {
 public:
  enum class Kind { atoms, density, cdf };

  // Positions are sorted and merged; circle positions wrapped into [0, 2 pi).
  // Masses must be nonnegative with total 1 within 1e-6; they are rescaled to total 1.
  static Measure1D atoms(Domain1D domain, std::vector<double> positions, std::vector<double> masses);
  // Piecewise-constant density on cells around the nodes. Interval cells
  // start at -1 and have widths = weights (sum 2). Circle cells start at
  // nodes[0] - weights[0]/2 (sum 2 pi). Values must be nonnegative with
  // total sum(w v) = 1 within 1e-6; they are rescaled to total 1.
  static Measure1D density(Domain1D domain, std::vector<double> nodes, std::vector<double> weights,
                           std::vector<double> values);
  static Measure1D from_cdf(Cdf1D cdf);

  Domain1D domain() const { return cdf_.domain(); }
  Kind kind() const { return kind_; }
  const Cdf1D& cdf() const { return cdf_; }

  // Atoms (kind atoms).
  const std::vector<double>& positions() const { return a_; }
  const std::vector<double>& masses() const { return b_; }
  // Density (kind density).
  const std::vector<double>& nodes() const { return a_; }
  const std::vector<double>& weights() const { return b_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& edges() const { return edges_; }

 private:
  Measure1D(Kind kind, Cdf1D cdf) : kind_(kind), cdf_(std::move(cdf)) {}
  Kind kind_;
  Cdf1D cdf_;
  std::vector<double> a_, b_, values_, edges_;
};

// Cell edges of a density grid (see Measure1D::density).
std::vector<double> cell_edges(Domain1D domain, std::span<const double> nodes, std::span<const double> weights);

// Clips negative values to 0 and rescales to unit mass sum(w v) = 1.
// Returns the clipped (negative) mass relative to the positive mass.
// Throws NumericError if nothing positive remains.
double clip_and_normalize(std::vector<double>& values, std::span<const double> weights);

const Cdf1D& cdf(const Measure1D& mu);
double quantile(const Cdf1D& F, double r);

// W_p on the interval, exact for atoms and piecewise-constant densities.
double wasserstein_interval(const Measure1D& mu, const Measure1D& nu, double p);

// int_0^1 |Fmu^{-1}(r) - Fnu^{-1}(r + theta)|^p dr with extended quantiles.
double circular_transport_cost(const Measure1D& mu, const Measure1D& nu, double theta, double p);
// Minimizer of the cost over theta (golden-section search on the convex objective).
double optimal_shift(const Measure1D& mu, const Measure1D& nu, double p);
double wasserstein_circle(const Measure1D& mu, const Measure1D& nu, double p);

// Displacement h(x) = T(x) - x of the monotone transport map sampled at positions.
struct CdtFunction {
  Domain1D domain = Domain1D::interval;
  std::vector<double> positions;
  std::vector<double> values;
  double shift = 0.0;  // circle: the theta used
};

// Default sample positions for a reference density: its cell edges
// (interval) or its cell edges inside (0, 2 pi) plus 0 and 2 pi (circle).
std::vector<double> reference_positions(const Measure1D& omega);
// reference_positions plus the preimages under F_omega of every CDF level of
// the given measures, so that all transport maps are affine between samples.
std::vector<double> refined_positions(const Measure1D& omega, std::span<const Measure1D* const> others,
                                      std::span<const double> shifts = {});

// Interval CDT; omega must be a strictly positive density.
CdtFunction cdt(const Measure1D& mu, const Measure1D& omega);
CdtFunction cdt(const Measure1D& mu, const Measure1D& omega, std::span<const double> positions);
// Push-forward of omega under h + Id; positions must start where F_omega = 0
// and end where F_omega = 1.
Measure1D icdt(const CdtFunction& h, const Measure1D& omega);

// Circular CDT with the p = 2 optimal shift.
CdtFunction ccdt(const Measure1D& mu, const Measure1D& omega);
CdtFunction ccdt(const Measure1D& mu, const Measure1D& omega, std::span<const double> positions);
// positions must run from 0 to 2 pi.
Measure1D iccdt(const CdtFunction& h, const Measure1D& omega);

// ||h1 - h2||_{L^p(omega)}, exact when both are affine between samples.
double cdt_distance(const CdtFunction& h1, const CdtFunction& h2, const Measure1D& omega, double p);

// Displacement interpolation with mu as reference: delta = 0 gives mu, 1 gives nu.
Measure1D interpolate_interval(const Measure1D& mu, const Measure1D& nu, double delta);
Measure1D interpolate_circle(const Measure1D& mu, const Measure1D& nu, double delta);

// Cell-average densities of a measure on the cells of a target grid.
std::vector<double> rebin(const Measure1D& mu, std::span<const double> nodes, std::span<const double> weights);

// CSV: "# measure=<interval|circle> kind=<atoms|density>", then
// "position,mass" or "node,weight,value" rows.
void write_csv(std::ostream& out, const Measure1D& mu);
Measure1D read_measure1d_csv(std::istream& in);

}  // namespace sphereot
