#include "gphase/spinstate.hpp"

#include <algorithm>
#include <cmath>

namespace gphase {

SpinState::SpinState(const CVec3& amplitudes) : a_(amplitudes) {
  const double n = a_.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw InputError("spin state must be a finite nonzero vector");
  }
}

SpinState operator*(const CMat3& u, const SpinState& psi) {
  return SpinState(CVec3(u * psi.amplitudes()));
}

BlochVector bloch_vector(const SpinState& psi) {
  const CVec3 z = psi.normalized();
  const auto& S = spin_operators().S;
  Vec3 s;
  for (int i = 0; i < 3; ++i) s(i) = std::real(z.dot(S[i] * z));
  return s;
}

FluctuationTensor fluctuation_tensor(const SpinState& psi) {
  const CVec3 z = psi.normalized();
  const auto& S = spin_operators().S;
  std::array<CVec3, 3> sz;
  for (int i = 0; i < 3; ++i) sz[i] = S[i] * z;
  Vec3 s;
  for (int i = 0; i < 3; ++i) s(i) = std::real(z.dot(sz[i]));
  Mat3 t;
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      // Real part of <S_i S_j> is the symmetrized moment.
      const double m = std::real(sz[i].dot(sz[j]));
      t(i, j) = m - s(i) * s(j);
      t(j, i) = t(i, j);
    }
  }
  return t;
}

double fubini_study_distance(const SpinState& a, const SpinState& b) {
  const CVec3 x = a.normalized();
  const CVec3 y = b.normalized();
  const cplx overlap = x.dot(y);
  const double perp = (y - overlap * x).norm();
  return std::atan2(perp, std::abs(overlap));
}

namespace {

void check_unit(const Vec3& w, const char* what) {
  if (!(std::abs(w.norm() - 1.0) <= 1e-9)) {
    throw InputError(std::string("chord ") + what + " must be a unit vector");
  }
}

// Rotation with columns (u x v, u, v): carries y to u and z to v.
Rotation chord_frame(const Vec3& v, const Vec3& u) {
  Mat3 q;
  q.col(0) = u.cross(v);
  q.col(1) = u;
  q.col(2) = v;
  return Rotation::unchecked(q);
}

}  // namespace

SpinState state_from_chord(const Chord& c) {
  if (!(c.r >= -1e-12 && c.r <= 1.0 + 1e-12)) {
    throw InputError("chord radius must lie in [0, 1]");
  }
  check_unit(c.v, "center direction");
  const double r = std::clamp(c.r, 0.0, 1.0);
  if (r >= 1.0 - kChordDegenerateTol) {
    return spin1_rep(minimal_rotation(Vec3::UnitZ(), c.v)) * SpinState(0.0, 0.0, 1.0);
  }
  check_unit(c.u, "transverse direction");
  if (!(std::abs(c.u.dot(c.v)) <= 1e-9)) {
    throw InputError("chord transverse direction must be perpendicular to its center direction");
  }
  // Re-orthonormalize so D(Q) is exactly unitary.
  const Vec3 v = c.v.normalized();
  const Vec3 u = (c.u - c.u.dot(v) * v).normalized();
  const SpinState base(std::sqrt((1.0 - r) / 2.0), 0.0, std::sqrt((1.0 + r) / 2.0));
  return spin1_rep(chord_frame(v, u)) * base;
}

Chord chord_from_state(const SpinState& psi) {
  const Vec3 s = bloch_vector(psi);
  const Mat3 t = fluctuation_tensor(psi);
  Chord c;
  c.r = std::min(s.norm(), 1.0);
  if (c.r >= 1.0 - kChordDegenerateTol) {
    c.r = 1.0;
    c.v = s.normalized();
    c.u = any_perpendicular(c.v);
    c.u_defined = false;
    return c;
  }
  if (c.r <= kChordDegenerateTol) {
    // T has spectrum {1, 1, 0}; the null direction is the Majorana axis.
    Eigen::SelfAdjointEigenSolver<Mat3> es(t);
    c.r = s.norm();
    c.u = es.eigenvectors().col(0).normalized();
    c.v = any_perpendicular(c.u);
    return c;
  }
  c.v = s / s.norm();
  const Vec3 e1 = any_perpendicular(c.v);
  const Vec3 e2 = c.v.cross(e1);
  Eigen::Matrix2d m;
  m << e1.dot(t * e1), e1.dot(t * e2), e2.dot(t * e1), e2.dot(t * e2);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
  const Eigen::Vector2d w = es.eigenvectors().col(0);
  c.u = (w(0) * e1 + w(1) * e2).normalized();
  return c;
}

std::array<double, 3> tensor_spectrum(double s_norm) {
  if (!(s_norm >= 0.0 && s_norm <= 1.0)) {
    throw InputError("tensor_spectrum needs |s| in [0, 1]");
  }
  const double q = std::sqrt(1.0 - s_norm * s_norm);
  return {1.0 - s_norm * s_norm, (1.0 + q) / 2.0, (1.0 - q) / 2.0};
}

double fs_speed_chord(const Chord& c, const ChordVelocity& d) {
  if (!(c.r >= 0.0 && c.r < 1.0)) {
    throw DegeneracyError("chord coordinates are singular at r = 1");
  }
  const double scale = 1.0 + d.dv.norm() + d.du.norm();
  if (std::abs(c.v.dot(d.dv)) > 1e-9 * scale ||
      std::abs(c.u.dot(d.dv) + c.v.dot(d.du)) > 1e-9 * scale) {
    throw InputError("chord velocity is not tangent to the chord constraints");
  }
  const double q = std::sqrt(1.0 - c.r * c.r);
  const double udv = c.u.dot(d.dv);
  const double vdu = c.v.dot(d.du);
  const double ds2 = 0.5 * (1.0 - q) * d.dv.squaredNorm() + q * udv * udv +
                     (1.0 - c.r * c.r) * (d.du.squaredNorm() - vdu * vdu) +
                     d.dr * d.dr / (4.0 * (1.0 - c.r * c.r));
  return std::sqrt(std::max(ds2, 0.0));
}

SpinState fiber_state(const FiberPoint& f) {
  const double r = f.s.norm();
  if (r <= kChordDegenerateTol || r >= 1.0 - kChordDegenerateTol) {
    throw DegeneracyError(
        "the fiber over |s| = 0 or |s| = 1 is not a circle; use the chord parametrization");
  }
  const cplx ph = std::polar(1.0, f.theta);
  const SpinState base(std::sqrt((1.0 - r) / 2.0) * std::conj(ph), 0.0,
                       std::sqrt((1.0 + r) / 2.0) * ph);
  return spin1_rep(minimal_rotation(Vec3::UnitZ(), f.s / r)) * base;
}

}  // namespace gphase
