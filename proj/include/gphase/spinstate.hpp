#ifndef GPHASE_SPINSTATE_HPP
#define GPHASE_SPINSTATE_HPP

#include <array>

#include "gphase/common.hpp"
#include "gphase/rotations.hpp"

namespace gphase {

/// A spin-1 pure state, amplitudes in basis order (z_-1, z_0, z_+1).
/// Only the ray matters; nothing here assumes unit norm.
class SpinState {
 public:
  explicit SpinState(const CVec3& amplitudes);
  SpinState(cplx zm, cplx z0, cplx zp) : SpinState(CVec3(zm, z0, zp)) {}

  const CVec3& amplitudes() const { return a_; }
  cplx operator[](int m) const { return a_(m); }
  CVec3 normalized() const { return a_ / a_.norm(); }

 private:
  CVec3 a_;
};

SpinState operator*(const CMat3& u, const SpinState& psi);

using BlochVector = Vec3;
using FluctuationTensor = Mat3;

BlochVector bloch_vector(const SpinState& psi);
FluctuationTensor fluctuation_tensor(const SpinState& psi);

/// Angle between rays, in [0, pi/2]. Accurate for nearly equal rays.
double fubini_study_distance(const SpinState& a, const SpinState& b);

/// Chord of the unit sphere: center r*v, oriented along +-u.
struct Chord {
  double r = 0.0;
  Vec3 v = Vec3::UnitZ();
  Vec3 u = Vec3::UnitY();
  bool u_defined = true;  // false only when r = 1
};

/// The base chord (r, z, y) maps to (sqrt((1-r)/2), 0, sqrt((1+r)/2)); y is the
/// axis that state is invariant about. Other chords follow by D(Q) with Q
/// carrying (y, z) to (u, v). r = 1 gives the coherent state along v.
SpinState state_from_chord(const Chord& c);

/// Inverse of state_from_chord. At r = 0, v is an arbitrary unit vector
/// perpendicular to the Majorana axis u. At r = 1, u_defined is false.
Chord chord_from_state(const SpinState& psi);

/// Eigenvalues of T for |s| = s_norm: {1 - s^2, (1 + sqrt(1 - s^2))/2, (1 - sqrt(1 - s^2))/2}.
std::array<double, 3> tensor_spectrum(double s_norm);

struct ChordVelocity {
  double dr = 0.0;
  Vec3 dv = Vec3::Zero();
  Vec3 du = Vec3::Zero();
};

/// Fubini-Study speed in chord coordinates. Throws DegeneracyError at r = 1.
double fs_speed_chord(const Chord& c, const ChordVelocity& d);

struct FiberPoint {
  Vec3 s;
  double theta = 0.0;
};

/// The state (sqrt((1-|s|)/2) e^{-i theta}, 0, sqrt((1+|s|)/2) e^{i theta})
/// rotated by the minimal rotation taking z to s/|s|.
SpinState fiber_state(const FiberPoint& f);

/// Degeneracy threshold on |s| for the r = 0 and r = 1 branches.
inline constexpr double kChordDegenerateTol = 1e-9;

}  // namespace gphase

#endif  // GPHASE_SPINSTATE_HPP
