#ifndef GPHASE_TESTS_TEST_UTIL_HPP
#define GPHASE_TESTS_TEST_UTIL_HPP

#include <cmath>
#include <random>

#include "gphase/holonomy.hpp"
#include "gphase/rotations.hpp"
#include "gphase/spinstate.hpp"

namespace testutil {

using namespace gphase;

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v(n(rng), n(rng), n(rng));
  return v.normalized();
}

inline Rotation random_rotation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, kPi);
  return rotation_from_axis_angle(random_unit(rng), u(rng));
}

inline SpinState random_state(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return SpinState(CVec3(cplx(n(rng), n(rng)), cplx(n(rng), n(rng)), cplx(n(rng), n(rng))));
}

inline Vec3 random_perpendicular(std::mt19937_64& rng, const Vec3& v) {
  Vec3 w = random_unit(rng);
  w -= w.dot(v) * v;
  return w.normalized();
}

/// A state over gamma(0) whose transverse axis is valid for lifting.
inline SpinState random_start_state(std::mt19937_64& rng, const Loop& loop) {
  const Vec3 g0 = loop.pos(0.0);
  Chord c;
  c.r = std::min(g0.norm(), 1.0);
  c.v = c.r > 1e-9 ? Vec3(g0.normalized()) : segment_loop(loop).front().beta(0.0);
  c.u = random_perpendicular(rng, c.v);
  return state_from_chord(c);
}

/// Signed rotation angle of r about the unit vector n (r must fix n).
inline double signed_angle(const Rotation& r, const Vec3& n) {
  const Mat3& m = r.matrix();
  const Vec3 w(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
  return std::atan2(0.5 * n.dot(w), 0.5 * (m.trace() - 1.0));
}

/// Distance between two angles on the circle of circumference `period`.
inline double circular_gap(double a, double b, double period) {
  double d = std::fmod(a - b, period);
  if (d < 0) d += period;
  return std::min(d, period - d);
}

}  // namespace testutil

#endif  // GPHASE_TESTS_TEST_UTIL_HPP
