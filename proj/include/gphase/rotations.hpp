#ifndef GPHASE_ROTATIONS_HPP
#define GPHASE_ROTATIONS_HPP

#include <array>

#include "gphase/common.hpp"

namespace gphase {

/// Element of SO(3), stored as a row-major-meaningful 3x3 matrix acting on
/// column vectors. Construction through `from_matrix` checks orthogonality.
class Rotation {
 public:
  Rotation() : m_(Mat3::Identity()) {}

  /// Throws InputError unless m^T m = I and det m = +1 within `tol`.
  static Rotation from_matrix(const Mat3& m, double tol = 1e-9);
  /// No checks; for matrices that are rotations by construction.
  static Rotation unchecked(const Mat3& m) { return Rotation(m); }

  const Mat3& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  Rotation operator*(const Rotation& o) const { return Rotation(m_ * o.m_); }
  Vec3 operator*(const Vec3& v) const { return m_ * v; }
  Rotation inverse() const { return Rotation(m_.transpose()); }

  /// Row-major entries.
  std::array<double, 9> row_major() const;

 private:
  explicit Rotation(const Mat3& m) : m_(m) {}
  Mat3 m_;
};

struct AxisAngle {
  Vec3 axis = Vec3::UnitZ();
  double angle = 0.0;
};

/// Right-hand rotation by `angle` about the unit vector `axis` (Rodrigues).
Rotation rotation_from_axis_angle(const Vec3& axis, double angle);

inline Rotation rotation_x(double a) { return rotation_from_axis_angle(Vec3::UnitX(), a); }
inline Rotation rotation_y(double a) { return rotation_from_axis_angle(Vec3::UnitY(), a); }
inline Rotation rotation_z(double a) { return rotation_from_axis_angle(Vec3::UnitZ(), a); }

/// Canonical axis-angle: angle in [0, pi], axis carries the orientation,
/// identity reports (z, 0). At angle pi either axis sign may come back.
AxisAngle axis_angle_of(const Rotation& r);

/// Polar factor of `m`: the rotation nearest in Frobenius norm.
/// Throws DegeneracyError when det m <= 0.
Rotation project_to_rotation(const Mat3& m);

/// Smallest rotation carrying unit vector `from` onto unit vector `to`.
Rotation minimal_rotation(const Vec3& from, const Vec3& to);

double frobenius_distance(const Rotation& a, const Rotation& b);

/// Spin-1 matrices in basis order (z_-1, z_0, z_+1) with Condon-Shortley
/// ladder conventions, plus the Pauli matrices.
struct SpinOperators {
  std::array<CMat3, 3> S;
  std::array<CMat2, 3> sigma;
};

const SpinOperators& spin_operators();

/// The spin-1 representation D(R) = exp(-i theta n.S).
CMat3 spin1_rep(const Rotation& r);

}  // namespace gphase

#endif  // GPHASE_ROTATIONS_HPP
