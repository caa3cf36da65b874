#ifndef GPHASE_LENS_HPP
#define GPHASE_LENS_HPP

#include <array>
#include <utility>
#include <vector>

#include "gphase/rotations.hpp"

namespace gphase {

/// Unit quaternion (w, x, y, z) standing for U = w I - i (x sx + y sy + z sz),
/// so that U = exp(-i theta n.sigma/2) covers the rotation R_n(theta).
class Su2 {
 public:
  Su2() = default;
  Su2(double w, double x, double y, double z) : q_(w, x, y, z) {}

  /// Throws InputError unless m is unitary with det 1 within 1e-9.
  static Su2 from_matrix(const CMat2& m);
  /// One of the two lifts of r (the one with w >= 0).
  static Su2 from_rotation(const Rotation& r);

  CMat2 matrix() const;
  const Eigen::Vector4d& coeffs() const { return q_; }  // (w, x, y, z)
  Su2 operator*(const Su2& o) const;
  Su2 operator-() const { return Su2(-q_(0), -q_(1), -q_(2), -q_(3)); }

  /// i sigma_z.
  static Su2 i_sigma_z() { return Su2(0.0, 0.0, 0.0, -1.0); }

 private:
  Eigen::Vector4d q_{1.0, 0.0, 0.0, 0.0};
};

/// R_ij = tr(sigma_i U sigma_j U^dagger) / 2. Throws InputError for non-SU(2) input.
Rotation su2_to_so3(const CMat2& u);
Rotation su2_to_so3(const Su2& u);

/// A tangent line to the unit sphere: point v, direction +-u.
struct TangentLine {
  Vec3 v = Vec3::UnitZ();
  Vec3 u = Vec3::UnitX();

  /// Same point and the same direction up to sign.
  bool same_as(const TangentLine& o, double tol = 1e-9) const;
};

/// A unit tangent vector: like TangentLine but the sign of u counts.
struct UnitTangent {
  Vec3 v = Vec3::UnitZ();
  Vec3 u = Vec3::UnitX();
};

/// (R z, +-R x).
TangentLine tangent_line_of(const Rotation& r);

/// Rotation with columns (u, v x u, v): the frame sending the base line to l.
Rotation frame_of(const TangentLine& l);

/// Point of tangency and the direction class through the center. The
/// direction is returned with a canonical sign (first non-negligible
/// component positive) so equal classes compare equal.
std::pair<Vec3, Vec3> bundle_projections(const TangentLine& l);

/// The four SU(2) elements over l: U {1, i sigma_z, -1, -i sigma_z}.
std::array<Su2, 4> z4_preimages(const TangentLine& l);

/// Length under ds^2 = dv.dv + du.du - (v.du)^2, with u signs chained so
/// consecutive representatives have positive overlap.
double l41_path_length(const std::vector<TangentLine>& path);

}  // namespace gphase

#endif  // GPHASE_LENS_HPP
