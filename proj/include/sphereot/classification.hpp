#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sphereot/harmonic_transforms.hpp"
#include "sphereot/vmf.hpp"

namespace sphereot {

struct DatasetSpec {
  int id = 1;  // 1..5
  int per_class = 100;
  std::uint64_t seed = 1;
  double kappa = 50.0;
  int band_limit = 16;
};

struct LabeledDensity {
  std::vector<double> density;  // on SphereGrid(band_limit)
  int label = 0;                // 0: first class, 1: second class
  VmfSpec spec;
};

// Class rules:
//  1: single vMF | two means at distance pi/2
//  2: single vMF | two independent means
//  3: single vMF | (eta, mirror at the equatorial plane)
//  4: single vMF | (eta, rotation by pi about the xi_3 axis)
//  5: equatorial-mirror pair | axis-mirror pair
// First-class samples precede second-class samples.
std::vector<LabeledDensity> generate_dataset(const DatasetSpec& spec);

// Uniform on the sphere.
UnitVector random_unit_vector(std::mt19937_64& rng);

enum class FeatureKind { raw, v, w };
std::string to_string(FeatureKind k);
FeatureKind feature_kind_from_string(const std::string& s);

// v: per psi slice, CDT against the uniform measure on [-1, 1] at the Gauss nodes.
// w: per zenith, circular CDT against the uniform measure at the gamma nodes.
class FeatureExtractor {
 public:
  FeatureExtractor(FeatureKind kind, int band_limit);
  FeatureKind kind() const { return kind_; }
  std::size_t dimension() const;
  std::vector<double> operator()(std::span<const double> density) const;

 private:
  FeatureKind kind_;
  int N_;
  std::unique_ptr<VerticalSliceTransform> V_;
  std::unique_ptr<SemicircleTransform> W_;
};

// Rows are samples. Computed in parallel.
Eigen::MatrixXd feature_matrix(const std::vector<LabeledDensity>& data, const FeatureExtractor& fx);

// PCA fitted on the rows of X (centered), keeping up to `dims` components.
class Pca {
 public:
  Pca(const Eigen::MatrixXd& X, int dims);
  Eigen::MatrixXd transform(const Eigen::MatrixXd& X) const;
  const Eigen::VectorXd& explained_variance() const { return variance_; }
  Eigen::Index dimension() const { return components_.cols(); }

 private:
  Eigen::RowVectorXd mean_;
  Eigen::MatrixXd components_;  // d x k, orthonormal columns
  Eigen::VectorXd variance_;
};

enum class ClassifierKind { svm, ridge };

struct ClassifierOptions {
  ClassifierKind kind = ClassifierKind::svm;
  double lambda = 1e-3;  // regularization (svm: per-sample hinge average; ridge: Tikhonov)
  int epochs = 200;
  std::uint64_t seed = 7;
};

// Linear classifier sign(w.x + b) on labels {0, 1}.
struct LinearClassifier {
  Eigen::VectorXd w;
  double b = 0.0;
  int predict(const Eigen::RowVectorXd& x) const { return x.dot(w) + b >= 0.0 ? 1 : 0; }
};

// Deterministic Pegasos subgradient descent on the L2-regularized hinge loss,
// returning the average of the iterates over the second half of training.
LinearClassifier train_svm(const Eigen::MatrixXd& X, std::span<const int> labels, const ClassifierOptions& opt);
// Least squares on +-1 targets with Tikhonov regularization.
LinearClassifier train_ridge(const Eigen::MatrixXd& X, std::span<const int> labels, double lambda);

struct CvResult {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation over folds
  std::vector<double> fold_accuracy;
};

// Balanced k-fold assignment: each class is shuffled with `seed` and dealt round-robin.
std::vector<int> balanced_folds(std::span<const int> labels, int folds, std::uint64_t seed);

// Per fold: PCA on the training rows, feature scaling by the leading PCA
// standard deviation, classifier training, test accuracy.
CvResult crossvalidate(const Eigen::MatrixXd& X, std::span<const int> labels, int folds = 10, int pca_dim = 50,
                       const ClassifierOptions& opt = {}, std::uint64_t fold_seed = 11);

// Rows = samples, last column = label.
void write_feature_csv(std::ostream& out, const Eigen::MatrixXd& X, std::span<const int> labels);
void read_feature_csv(std::istream& in, Eigen::MatrixXd& X, std::vector<int>& labels);

}  // namespace sphereot
