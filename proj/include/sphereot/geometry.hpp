#pragma once

#include <array>

namespace sphereot {

// Wraps an angle to [0, 2 pi).
double wrap_angle(double a);

class UnitVector {
 public:
  UnitVector() : v_{0.0, 0.0, 1.0} {}
  // Renormalizes; throws ValidationError for a zero or non-finite vector.
  UnitVector(double x, double y, double z);

  double x() const { return v_[0]; }
  double y() const { return v_[1]; }
  double z() const { return v_[2]; }
  double operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }
  const std::array<double, 3>& data() const { return v_; }

  friend double dot(const UnitVector& a, const UnitVector& b) {
    return a.v_[0] * b.v_[0] + a.v_[1] * b.v_[1] + a.v_[2] * b.v_[2];
  }

 private:
  std::array<double, 3> v_;
};

struct EulerAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

class Rotation {
 public:
  using Matrix = std::array<std::array<double, 3>, 3>;

  Rotation();  // identity
  // Throws ValidationError unless m is orthogonal with det 1 (tol 1e-10).
  explicit Rotation(const Matrix& m);

  double operator()(int r, int c) const { return m_[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]; }
  const Matrix& matrix() const { return m_; }
  Rotation transpose() const;

  UnitVector operator*(const UnitVector& v) const;
  Rotation operator*(const Rotation& other) const;

 private:
  struct Unchecked {};
  Rotation(const Matrix& m, Unchecked) : m_(m) {}
  friend Rotation r3(double);
  friend Rotation r2(double);
  Matrix m_;
};

Rotation r3(double alpha);
Rotation r2(double beta);
// R3(alpha) R2(beta) R3(gamma).
Rotation euler_matrix(const EulerAngles& e);
// Euler angles of a rotation, beta in [0, pi]; alpha, gamma wrapped. At
// beta in {0, pi} the split of the combined angle puts everything into alpha.
EulerAngles euler_angles(const Rotation& q);

UnitVector sph(double phi, double theta);
// Azimuth in [0, 2 pi); returns 0 within 1e-12 of either pole.
double azi(const UnitVector& xi);
double zen(const UnitVector& xi);

double slice_op(double psi, const UnitVector& xi);
double azimuth_op(double alpha, double beta, const UnitVector& xi);
double zenith_op(double alpha, double beta, const UnitVector& xi);

// Great-circle distance in [0, pi].
double geodesic_distance(const UnitVector& a, const UnitVector& b);

}  // namespace sphereot
