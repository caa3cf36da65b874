#include "gphase/rotations.hpp"

#include <algorithm>
#include <cmath>

namespace gphase {

Vec3 any_perpendicular(const Vec3& v) {
  const Vec3 n = v.normalized();
  // Cross with the coordinate axis least aligned with n.
  Vec3 e = Vec3::UnitX();
  if (std::abs(n.y()) < std::abs(n(0)) && std::abs(n.y()) <= std::abs(n.z())) {
    e = Vec3::UnitY();
  } else if (std::abs(n.z()) < std::abs(n(0)) && std::abs(n.z()) < std::abs(n.y())) {
    e = Vec3::UnitZ();
  }
  return n.cross(e).normalized();
}

Rotation Rotation::from_matrix(const Mat3& m, double tol) {
  const double ortho = (m.transpose() * m - Mat3::Identity()).norm();
  const double det = m.determinant();
  if (!(ortho <= tol) || !(std::abs(det - 1.0) <= tol)) {
    throw InputError("matrix is not a rotation (|R^T R - I| = " + std::to_string(ortho) +
                     ", det = " + std::to_string(det) + ")");
  }
  return Rotation(m);
}

std::array<double, 9> Rotation::row_major() const {
  std::array<double, 9> out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[3 * i + j] = m_(i, j);
  return out;
}

Rotation rotation_from_axis_angle(const Vec3& axis, double angle) {
  if (!(std::abs(axis.norm() - 1.0) <= 1e-9)) {
    throw InputError("rotation axis must be a unit vector");
  }
  const Vec3 n = axis.normalized();
  Mat3 k;
  k << 0, -n.z(), n.y(),
       n.z(), 0, -n(0),
       -n.y(), n(0), 0;
  const Mat3 m = Mat3::Identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * k * k;
  return Rotation::unchecked(m);
}

AxisAngle axis_angle_of(const Rotation& r) {
  // Shepperd's method via Eigen's quaternion conversion is stable at all angles.
  Eigen::Quaterniond q(r.matrix());
  q.normalize();
  if (q.w() < 0) q.coeffs() *= -1.0;
  const Vec3 v = q.vec();
  const double s = v.norm();
  AxisAngle out;
  if (s < 1e-300) return out;
  out.angle = 2.0 * std::atan2(s, q.w());
  out.axis = v / s;
  if (out.angle < 1e-15) {
    out.angle = 0.0;
    out.axis = Vec3::UnitZ();
  }
  return out;
}

Rotation project_to_rotation(const Mat3& m) {
  if (!(m.determinant() > 0.0)) {
    throw DegeneracyError("cannot project a matrix with det <= 0 onto SO(3)");
  }
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return Rotation::unchecked(svd.matrixU() * svd.matrixV().transpose());
}

Rotation minimal_rotation(const Vec3& from, const Vec3& to) {
  const Vec3 a = from.normalized();
  const Vec3 b = to.normalized();
  const Vec3 c = a.cross(b);
  const double s = c.norm();
  const double d = a.dot(b);
  if (s < 1e-15) {
    if (d > 0) return Rotation();
    return rotation_from_axis_angle(any_perpendicular(a), kPi);
  }
  return rotation_from_axis_angle(c / s, std::atan2(s, d));
}

double frobenius_distance(const Rotation& a, const Rotation& b) {
  return (a.matrix() - b.matrix()).norm();
}

namespace {

SpinOperators build_spin_operators() {
  SpinOperators ops;
  const cplx i(0.0, 1.0);
  const double r2 = std::sqrt(2.0);
  // S_+ |m> = sqrt(2) |m+1> in basis (m = -1, 0, +1).
  CMat3 sp = CMat3::Zero();
  sp(1, 0) = r2;
  sp(2, 1) = r2;
  const CMat3 sm = sp.adjoint();
  ops.S[0] = (sp + sm) / 2.0;
  ops.S[1] = (sp - sm) / (2.0 * i);
  ops.S[2] = CMat3::Zero();
  ops.S[2](0, 0) = -1.0;
  ops.S[2](2, 2) = 1.0;

  ops.sigma[0] << 0, 1, 1, 0;
  ops.sigma[1] << 0, -i, i, 0;
  ops.sigma[2] << 1, 0, 0, -1;
  return ops;
}

}  // namespace

const SpinOperators& spin_operators() {
  static const SpinOperators ops = build_spin_operators();
  return ops;
}

CMat3 spin1_rep(const Rotation& r) {
  const AxisAngle aa = axis_angle_of(r);
  const auto& S = spin_operators().S;
  const CMat3 j = aa.axis(0) * S[0] + aa.axis(1) * S[1] + aa.axis(2) * S[2];
  // Eigenvalues of n.S are -1, 0, 1, so J^3 = J and the exponential closes.
  const cplx i(0.0, 1.0);
  return CMat3::Identity() - i * std::sin(aa.angle) * j + (std::cos(aa.angle) - 1.0) * (j * j);
}

}  // namespace gphase
