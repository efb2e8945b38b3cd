#include "sphereot/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sphereot/diagnostics.hpp"

namespace sphereot {
namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPoleTol = 1e-12;
}  // namespace

double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;  // fmod rounding at -tiny
  return r;
}

UnitVector::UnitVector(double x, double y, double z) {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (!(n > 0.0) || !std::isfinite(n)) throw ValidationError("unit vector needs a finite nonzero direction");
  v_ = {x / n, y / n, z / n};
}

Rotation::Rotation() : m_{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}} {}

Rotation::Rotation(const Matrix& m) : m_(m) {
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      double s = 0.0;
      for (int i = 0; i < 3; ++i) s += m[i][r] * m[i][c];
      if (std::abs(s - (r == c ? 1.0 : 0.0)) > 1e-10) throw ValidationError("rotation matrix is not orthogonal");
    }
  }
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  if (std::abs(det - 1.0) > 1e-10) throw ValidationError("rotation matrix must have determinant 1");
}

Rotation Rotation::transpose() const {
  Matrix t{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) t[r][c] = m_[c][r];
  return Rotation(t, Unchecked{});
}

UnitVector Rotation::operator*(const UnitVector& v) const {
  const auto& d = v.data();
  return UnitVector(m_[0][0] * d[0] + m_[0][1] * d[1] + m_[0][2] * d[2],
                    m_[1][0] * d[0] + m_[1][1] * d[1] + m_[1][2] * d[2],
                    m_[2][0] * d[0] + m_[2][1] * d[1] + m_[2][2] * d[2]);
}

Rotation Rotation::operator*(const Rotation& other) const {
  Matrix p{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      p[r][c] = m_[r][0] * other.m_[0][c] + m_[r][1] * other.m_[1][c] + m_[r][2] * other.m_[2][c];
  return Rotation(p, Unchecked{});
}

Rotation r3(double alpha) {
  const double c = std::cos(alpha), s = std::sin(alpha);
  return Rotation({{{c, -s, 0.0}, {s, c, 0.0}, {0.0, 0.0, 1.0}}}, Rotation::Unchecked{});
}

Rotation r2(double beta) {
  const double c = std::cos(beta), s = std::sin(beta);
  return Rotation({{{c, 0.0, s}, {0.0, 1.0, 0.0}, {-s, 0.0, c}}}, Rotation::Unchecked{});
}

Rotation euler_matrix(const EulerAngles& e) { return r3(e.alpha) * r2(e.beta) * r3(e.gamma); }

EulerAngles euler_angles(const Rotation& q) {
  // Q e3 = sph(alpha, beta); third row gives gamma.
  const double beta = std::acos(std::clamp(q(2, 2), -1.0, 1.0));
  EulerAngles e;
  e.beta = beta;
  if (std::hypot(q(0, 2), q(1, 2)) > kPoleTol) {
    e.alpha = wrap_angle(std::atan2(q(1, 2), q(0, 2)));
    e.gamma = wrap_angle(std::atan2(q(2, 1), -q(2, 0)));
  } else {
    // R3(alpha) R2(0 or pi) R3(0): read alpha off the first column.
    const double sign = q(2, 2) > 0.0 ? 1.0 : -1.0;
    e.alpha = wrap_angle(std::atan2(sign * q(1, 0), sign * q(0, 0)));
    e.gamma = 0.0;
  }
  return e;
}

UnitVector sph(double phi, double theta) {
  const double st = std::sin(theta);
  return UnitVector(std::cos(phi) * st, std::sin(phi) * st, std::cos(theta));
}

double azi(const UnitVector& xi) {
  if (std::hypot(xi.x(), xi.y()) <= kPoleTol) return 0.0;
  return wrap_angle(std::atan2(xi.y(), xi.x()));
}

double zen(const UnitVector& xi) { return std::acos(std::clamp(xi.z(), -1.0, 1.0)); }

double slice_op(double psi, const UnitVector& xi) {
  return std::clamp(std::cos(psi) * xi.x() + std::sin(psi) * xi.y(), -1.0, 1.0);
}

double azimuth_op(double alpha, double beta, const UnitVector& xi) {
  return azi(euler_matrix({alpha, beta, 0.0}).transpose() * xi);
}

double zenith_op(double alpha, double beta, const UnitVector& xi) {
  return zen(euler_matrix({alpha, beta, 0.0}).transpose() * xi);
}

double geodesic_distance(const UnitVector& a, const UnitVector& b) {
  // atan2 form is accurate for nearly parallel vectors.
  const double cx = a.y() * b.z() - a.z() * b.y();
  const double cy = a.z() * b.x() - a.x() * b.z();
  const double cz = a.x() * b.y() - a.y() * b.x();
  return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot(a, b));
}

}  // namespace sphereot
