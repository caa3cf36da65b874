#include "gphase/lens.hpp"

#include <cmath>

namespace gphase {

Su2 Su2::from_matrix(const CMat2& m) {
  const double unit = (m.adjoint() * m - CMat2::Identity()).norm();
  const double det = std::abs(m.determinant() - cplx(1.0, 0.0));
  if (!(unit <= 1e-9) || !(det <= 1e-9)) {
    throw InputError("matrix is not in SU(2)");
  }
  Su2 s(m(0, 0).real(), -m(0, 1).imag(), -m(0, 1).real(), -m(0, 0).imag());
  s.q_.normalize();
  return s;
}

Su2 Su2::from_rotation(const Rotation& r) {
  Eigen::Quaterniond q(r.matrix());
  q.normalize();
  if (q.w() < 0) q.coeffs() *= -1.0;
  return Su2(q.w(), q.x(), q.y(), q.z());
}

CMat2 Su2::matrix() const {
  const cplx i(0.0, 1.0);
  const double w = q_(0), x = q_(1), y = q_(2), z = q_(3);
  CMat2 m;
  m << w - i * z, -i * x - y, -i * x + y, w + i * z;
  return m;
}

Su2 Su2::operator*(const Su2& o) const {
  // With U = w - i v.sigma the matrix product is the Hamilton product.
  const Eigen::Quaterniond a(q_(0), q_(1), q_(2), q_(3));
  const Eigen::Quaterniond b(o.q_(0), o.q_(1), o.q_(2), o.q_(3));
  const Eigen::Quaterniond c = a * b;
  return Su2(c.w(), c.x(), c.y(), c.z());
}

Rotation su2_to_so3(const CMat2& u) {
  Su2::from_matrix(u);  // validates
  const auto& sigma = spin_operators().sigma;
  Mat3 r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      r(i, j) = 0.5 * std::real((sigma[i] * u * sigma[j] * u.adjoint()).trace());
    }
  }
  return project_to_rotation(r);
}

Rotation su2_to_so3(const Su2& u) {
  const auto& c = u.coeffs();
  const Eigen::Quaterniond q(c(0), c(1), c(2), c(3));
  return Rotation::unchecked(q.normalized().toRotationMatrix());
}

bool TangentLine::same_as(const TangentLine& o, double tol) const {
  return (v - o.v).norm() <= tol && std::min((u - o.u).norm(), (u + o.u).norm()) <= tol;
}

TangentLine tangent_line_of(const Rotation& r) {
  return {r * Vec3::UnitZ(), r * Vec3::UnitX()};
}

Rotation frame_of(const TangentLine& l) {
  if (std::abs(l.v.norm() - 1.0) > 1e-9 || std::abs(l.u.norm() - 1.0) > 1e-9 ||
      std::abs(l.u.dot(l.v)) > 1e-9) {
    throw InputError("tangent line needs orthonormal (v, u)");
  }
  Mat3 m;
  m.col(0) = l.u;
  m.col(1) = l.v.cross(l.u);
  m.col(2) = l.v;
  return project_to_rotation(m);
}

std::pair<Vec3, Vec3> bundle_projections(const TangentLine& l) {
  Vec3 d = l.u;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(d(i)) > 1e-12) {
      if (d(i) < 0) d = -d;
      break;
    }
  }
  return {l.v, d};
}

std::array<Su2, 4> z4_preimages(const TangentLine& l) {
  const Su2 u = Su2::from_rotation(frame_of(l));
  const Su2 j = u * Su2::i_sigma_z();
  return {u, j, -u, -j};
}

double l41_path_length(const std::vector<TangentLine>& path) {
  double len = 0.0;
  if (path.empty()) return len;
  Vec3 prev_u = path.front().u;
  for (std::size_t k = 1; k < path.size(); ++k) {
    const Vec3& v0 = path[k - 1].v;
    const Vec3& v1 = path[k].v;
    Vec3 u1 = path[k].u;
    const double overlap = u1.dot(prev_u);
    if (std::abs(overlap) < 1e-12) {
      throw InputError("cannot chain the line direction sign at sample " + std::to_string(k));
    }
    if (overlap < 0) u1 = -u1;
    const double jump_v = std::atan2(v0.cross(v1).norm(), v0.dot(v1));
    const double jump_u = std::atan2(prev_u.cross(u1).norm(), prev_u.dot(u1));
    if (jump_v > 0.1 || jump_u > 0.1) {
      throw InputError("tangent-line samples " + std::to_string(k - 1) + " and " + std::to_string(k) +
                       " are more than 0.1 rad apart");
    }
    const Vec3 dv = v1 - v0;
    const Vec3 du = u1 - prev_u;
    const double base = dv.squaredNorm() + du.squaredNorm();
    const double q0 = base - std::pow(v0.dot(du), 2);
    const double q1 = base - std::pow(v1.dot(du), 2);
    len += 0.5 * (std::sqrt(std::max(q0, 0.0)) + std::sqrt(std::max(q1, 0.0)));
    prev_u = u1;
  }
  return len;
}

}  // namespace gphase
