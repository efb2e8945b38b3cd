#include "sphereot/classification.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "sphereot/diagnostics.hpp"
#include "sphereot/ot1d.hpp"
#include "sphereot/parallel.hpp"
#include "sphereot/sliced_distances.hpp"

namespace sphereot {
namespace {

constexpr double kPi = std::numbers::pi;

UnitVector orthogonal_unit_vector(const UnitVector& eta, std::mt19937_64& rng) {
  for (;;) {
    const UnitVector u = random_unit_vector(rng);
    const double c = dot(u, eta);
    const double x = u.x() - c * eta.x(), y = u.y() - c * eta.y(), z = u.z() - c * eta.z();
    if (std::hypot(x, y, z) > 1e-3) {
      UnitVector v(x, y, z);
      // One Gram-Schmidt pass after normalization removes the residual.
      const double r = dot(v, eta);
      return UnitVector(v.x() - r * eta.x(), v.y() - r * eta.y(), v.z() - r * eta.z());
    }
  }
}

VmfSpec sample_spec(int id, int label, double kappa, std::mt19937_64& rng) {
  const UnitVector a = random_unit_vector(rng);
  auto pair = [&](const UnitVector& b) { return VmfSpec::mixture(kappa, {a, b}); };
  const UnitVector equatorial(a.x(), a.y(), -a.z());
  const UnitVector axial(-a.x(), -a.y(), a.z());
  switch (id) {
    case 1:
      return label == 0 ? VmfSpec::single(kappa, a) : pair(orthogonal_unit_vector(a, rng));
    case 2:
      return label == 0 ? VmfSpec::single(kappa, a) : pair(random_unit_vector(rng));
    case 3:
      return label == 0 ? VmfSpec::single(kappa, a) : pair(equatorial);
    case 4:
      return label == 0 ? VmfSpec::single(kappa, a) : pair(axial);
    case 5:
      return label == 0 ? pair(equatorial) : pair(axial);
    default:
      throw ValidationError("dataset id must be in 1..5, got " + std::to_string(id));
  }
}

Measure1D uniform_interval() { return Measure1D::density(Domain1D::interval, {0.0}, {2.0}, {0.5}); }
Measure1D uniform_circle() { return Measure1D::density(Domain1D::circle, {kPi}, {2.0 * kPi}, {0.5 / kPi}); }

}  // namespace

UnitVector random_unit_vector(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> phi(0.0, 2.0 * kPi);
  const double z = u(rng);
  const double a = phi(rng);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return UnitVector(r * std::cos(a), r * std::sin(a), z);
}

std::vector<LabeledDensity> generate_dataset(const DatasetSpec& spec) {
  if (spec.id < 1 || spec.id > 5) throw ValidationError("dataset id must be in 1..5, got " + std::to_string(spec.id));
  if (spec.per_class < 1) throw ValidationError("dataset: per_class must be positive");
  if (!(spec.kappa > 0.0)) throw ValidationError("dataset: kappa must be positive");
  const SphereGrid grid(spec.band_limit);
  const std::size_t n = 2 * static_cast<std::size_t>(spec.per_class);
  std::vector<LabeledDensity> out(n);
  parallel_for(n, [&](std::size_t s) {
    const int label = s < static_cast<std::size_t>(spec.per_class) ? 0 : 1;
    std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                      static_cast<std::uint32_t>(spec.id), static_cast<std::uint32_t>(s)};
    std::mt19937_64 rng(seq);
    out[s].label = label;
    out[s].spec = sample_spec(spec.id, label, spec.kappa, rng);
    out[s].density = vmf_density(out[s].spec, grid);
  });
  return out;
}

std::string to_string(FeatureKind k) {
  switch (k) {
    case FeatureKind::raw: return "raw";
    case FeatureKind::v: return "v";
    case FeatureKind::w: return "w";
  }
  return "?";
}

FeatureKind feature_kind_from_string(const std::string& s) {
  if (s == "raw") return FeatureKind::raw;
  if (s == "v") return FeatureKind::v;
  if (s == "w") return FeatureKind::w;
  throw ValidationError("features: expected raw, v or w, got '" + s + "'");
}

FeatureExtractor::FeatureExtractor(FeatureKind kind, int band_limit) : kind_(kind), N_(band_limit) {
  if (kind == FeatureKind::v) V_ = std::make_unique<VerticalSliceTransform>(band_limit);
  if (kind == FeatureKind::w) W_ = std::make_unique<SemicircleTransform>(band_limit);
}

std::size_t FeatureExtractor::dimension() const {
  switch (kind_) {
    case FeatureKind::raw: return SphereGrid(N_).size();
    case FeatureKind::v: return V_->codomain_size();
    case FeatureKind::w: return W_->codomain_size();
  }
  return 0;
}

std::vector<double> FeatureExtractor::operator()(std::span<const double> f) const {
  if (kind_ == FeatureKind::raw) return {f.begin(), f.end()};
  std::vector<double> out;
  out.reserve(dimension());
  if (kind_ == FeatureKind::v) {
    const auto slices = vertical_slice_measures(V_->apply(f), V_->cylinder());
    const auto ref = uniform_interval();
    for (const auto& s : slices) {
      const auto h = cdt(s, ref, V_->cylinder().t());
      out.insert(out.end(), h.values.begin(), h.values.end());
    }
  } else {
    const auto slices = semicircle_slice_measures(W_->apply(f), W_->so3());
    const auto ref = uniform_circle();
    for (const auto& s : slices) {
      const auto h = ccdt(s, ref, W_->so3().gamma());
      out.insert(out.end(), h.values.begin(), h.values.end());
    }
  }
  return out;
}

Eigen::MatrixXd feature_matrix(const std::vector<LabeledDensity>& data, const FeatureExtractor& fx) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(fx.dimension()));
  parallel_for(data.size(), [&](std::size_t s) {
    const auto row = fx(data[s].density);
    X.row(static_cast<Eigen::Index>(s)) = Eigen::Map<const Eigen::RowVectorXd>(row.data(), static_cast<Eigen::Index>(row.size()));
  });
  return X;
}

Pca::Pca(const Eigen::MatrixXd& X, int dims) {
  if (X.rows() < 2) throw ValidationError("pca: need at least two samples");
  if (dims < 1) throw ValidationError("pca: dimension must be positive");
  mean_ = X.colwise().mean();
  const Eigen::MatrixXd Xc = X.rowwise() - mean_;
  const double denom = static_cast<double>(X.rows() - 1);
  Eigen::MatrixXd vecs;
  Eigen::VectorXd vals;
  const bool gram = X.cols() > X.rows();
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram ? Eigen::MatrixXd(Xc * Xc.transpose())
                                                           : Eigen::MatrixXd(Xc.transpose() * Xc));
    if (es.info() != Eigen::Success) throw NumericError("pca: eigendecomposition failed");
    vals = es.eigenvalues().reverse();
    vecs = es.eigenvectors().rowwise().reverse();
  }
  const double top = std::max(vals(0), 0.0);
  Eigen::Index k = 0;
  while (k < std::min<Eigen::Index>(dims, vals.size()) && vals(k) > 1e-12 * top && top > 0.0) ++k;
  if (k == 0) k = 1;
  components_.resize(X.cols(), k);
  variance_.resize(k);
  for (Eigen::Index c = 0; c < k; ++c) {
    variance_(c) = std::max(vals(c), 0.0) / denom;
    if (gram) {
      Eigen::VectorXd v = Xc.transpose() * vecs.col(c);
      const double n = v.norm();
      components_.col(c) = n > 0.0 ? Eigen::VectorXd(v / n) : v;
    } else {
      components_.col(c) = vecs.col(c);
    }
  }
}

Eigen::MatrixXd Pca::transform(const Eigen::MatrixXd& X) const {
  if (X.cols() != components_.rows()) throw ValidationError("pca: feature dimension mismatch");
  return (X.rowwise() - mean_) * components_;
}

LinearClassifier train_svm(const Eigen::MatrixXd& X, std::span<const int> labels, const ClassifierOptions& opt) {
  const Eigen::Index n = X.rows(), d = X.cols();
  if (static_cast<std::size_t>(n) != labels.size() || n == 0) throw ValidationError("svm: label count mismatch");
  if (!(opt.lambda > 0.0) || opt.epochs < 1) throw ValidationError("svm: need lambda > 0 and epochs >= 1");
  // Bias as an extra constant feature.
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d + 1), avg = Eigen::VectorXd::Zero(d + 1);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(opt.seed);
  long t = 0, averaged = 0;
  for (int e = 0; e < opt.epochs; ++e) {
    std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index i : order) {
      ++t;
      const double eta = 1.0 / (opt.lambda * static_cast<double>(t));
      const double y = labels[static_cast<std::size_t>(i)] == 1 ? 1.0 : -1.0;
      const double margin = y * (X.row(i).dot(w.head(d)) + w(d));
      w *= 1.0 - eta * opt.lambda;
      if (margin < 1.0) {
        w.head(d) += eta * y * X.row(i).transpose();
        w(d) += eta * y;
      }
    }
    if (2 * (e + 1) > opt.epochs) {
      avg += w;
      ++averaged;
    }
  }
  avg /= static_cast<double>(averaged);
  return {avg.head(d), avg(d)};
}

LinearClassifier train_ridge(const Eigen::MatrixXd& X, std::span<const int> labels, double lambda) {
  const Eigen::Index n = X.rows();
  if (static_cast<std::size_t>(n) != labels.size() || n == 0) throw ValidationError("ridge: label count mismatch");
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = labels[static_cast<std::size_t>(i)] == 1 ? 1.0 : -1.0;
  const Eigen::RowVectorXd mx = X.colwise().mean();
  const double my = y.mean();
  const Eigen::MatrixXd Xc = X.rowwise() - mx;
  Eigen::MatrixXd A = Xc.transpose() * Xc;
  A.diagonal().array() += lambda * static_cast<double>(n);
  const Eigen::VectorXd w = A.ldlt().solve(Xc.transpose() * (y.array() - my).matrix());
  return {w, my - mx.dot(w)};
}

std::vector<int> balanced_folds(std::span<const int> labels, int folds, std::uint64_t seed) {
  if (folds < 2) throw ValidationError("crossvalidate: need at least two folds");
  std::vector<int> fold(labels.size(), -1);
  std::mt19937_64 rng(seed);
  for (int cls = 0; cls <= 1; ++cls) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) idx.push_back(i);
    if (idx.size() < static_cast<std::size_t>(folds)) throw ValidationError("crossvalidate: fewer samples in a class than folds");
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t r = 0; r < idx.size(); ++r) fold[idx[r]] = static_cast<int>(r % static_cast<std::size_t>(folds));
  }
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] != 0 && labels[i] != 1) throw ValidationError("crossvalidate: labels must be 0 or 1");
  return fold;
}

CvResult crossvalidate(const Eigen::MatrixXd& X, std::span<const int> labels, int folds, int pca_dim,
                       const ClassifierOptions& opt, std::uint64_t fold_seed) {
  if (static_cast<std::size_t>(X.rows()) != labels.size()) throw ValidationError("crossvalidate: label count mismatch");
  const auto fold = balanced_folds(labels, folds, fold_seed);
  CvResult res;
  res.fold_accuracy.assign(static_cast<std::size_t>(folds), 0.0);
  parallel_for(static_cast<std::size_t>(folds), [&](std::size_t k) {
    std::vector<Eigen::Index> tr, te;
    for (std::size_t i = 0; i < fold.size(); ++i) (fold[i] == static_cast<int>(k) ? te : tr).push_back(static_cast<Eigen::Index>(i));
    if (te.empty()) throw ValidationError("crossvalidate: empty fold");
    const Eigen::MatrixXd Xtr = X(tr, Eigen::all), Xte = X(te, Eigen::all);
    std::vector<int> ytr;
    for (auto i : tr) ytr.push_back(labels[static_cast<std::size_t>(i)]);
    const Pca pca(Xtr, pca_dim);
    const double scale = pca.explained_variance()(0) > 0.0 ? 1.0 / std::sqrt(pca.explained_variance()(0)) : 1.0;
    const Eigen::MatrixXd Ztr = pca.transform(Xtr) * scale, Zte = pca.transform(Xte) * scale;
    const LinearClassifier clf = opt.kind == ClassifierKind::svm ? train_svm(Ztr, ytr, opt) : train_ridge(Ztr, ytr, opt.lambda);
    std::size_t correct = 0;
    for (std::size_t r = 0; r < te.size(); ++r)
      if (clf.predict(Zte.row(static_cast<Eigen::Index>(r))) == labels[static_cast<std::size_t>(te[r])]) ++correct;
    res.fold_accuracy[k] = static_cast<double>(correct) / static_cast<double>(te.size());
  });
  const double n = static_cast<double>(folds);
  res.mean = std::accumulate(res.fold_accuracy.begin(), res.fold_accuracy.end(), 0.0) / n;
  double ss = 0.0;
  for (double a : res.fold_accuracy) ss += (a - res.mean) * (a - res.mean);
  res.stddev = std::sqrt(ss / (n - 1.0));
  return res;
}

void write_feature_csv(std::ostream& out, const Eigen::MatrixXd& X, std::span<const int> labels) {
  if (static_cast<std::size_t>(X.rows()) != labels.size()) throw ValidationError("feature csv: label count mismatch");
  for (Eigen::Index c = 0; c < X.cols(); ++c) out << 'f' << c << ',';
  out << "label\n";
  char buf[32];
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
      const auto res = std::to_chars(buf, buf + sizeof buf, X(r, c));
      out.write(buf, res.ptr - buf);
      out << ',';
    }
    out << labels[static_cast<std::size_t>(r)] << '\n';
  }
}

void read_feature_csv(std::istream& in, Eigen::MatrixXd& X, std::vector<int>& labels) {
  std::string line;
  std::vector<std::vector<double>> rows;
  labels.clear();
  std::size_t lineno = 0, width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == 'f' || line[0] == '#') continue;
    std::vector<double> vals;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
      double v = 0.0;
      const auto r = std::from_chars(p, end, v);
      if (r.ec != std::errc()) throw ValidationError("feature csv: malformed number on line " + std::to_string(lineno));
      vals.push_back(v);
      p = r.ptr;
      if (p < end && *p == ',') ++p;
      else if (p < end && *p != '\r') throw ValidationError("feature csv: unexpected character on line " + std::to_string(lineno));
      else break;
    }
    if (vals.size() < 2) throw ValidationError("feature csv: need features and a label on line " + std::to_string(lineno));
    if (width == 0) width = vals.size();
    if (vals.size() != width) throw ValidationError("feature csv: ragged row on line " + std::to_string(lineno));
    labels.push_back(static_cast<int>(vals.back()));
    vals.pop_back();
    rows.push_back(std::move(vals));
  }
  X.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width ? width - 1 : 0));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c + 1 < width; ++c) X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
}

}  // namespace sphereot
