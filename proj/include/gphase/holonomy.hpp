#ifndef GPHASE_HOLONOMY_HPP
#define GPHASE_HOLONOMY_HPP

#include <optional>
#include <vector>

#include "gphase/loopgeom.hpp"
#include "gphase/rotations.hpp"
#include "gphase/spinstate.hpp"

namespace gphase {

inline constexpr int kDefaultSteps = 10000;

/// Solution of the transport equations along one segment.
struct FrameTransport {
  std::vector<double> t;   // sample times (only endpoints unless recorded)
  std::vector<Vec3> u;     // transverse vector at each sample
  std::vector<Rotation> X; // frame at each sample, X(t0) = I
  Rotation R;              // X(t1)
  double u_consistency = 0.0;  // |u(t1) - X(t1) u0|
};

/// RK4 on du/dt = -(beta'.u) beta and dX/dt = (beta' beta^T - beta beta'^T) X.
/// Steps are split across loop breakpoints inside the segment so each
/// sub-interval is smooth. Throws InputError unless u0 is a unit vector
/// perpendicular to beta(t0) and steps >= 16.
FrameTransport transport_frame(const Segment& seg, const Vec3& u0, int steps = kDefaultSteps,
                               bool record = false);

struct HolonomyResult {
  Rotation R;
  std::vector<Rotation> segment_factors;  // R_1 ... R_{n+1}
  std::vector<double> zero_times;         // a_0 ... a_{n+1}
  Vec3 alpha0;  // continuous representative of alpha at t = 0
  Vec3 alpha1;  // ... and at t = 1; equals R alpha0
  Vec3 k;       // unit normal to alpha0 and alpha1
  double omega1 = 0.0;          // angle between the lines alpha(0), alpha(1), in [0, pi/2]
  double omega2 = 0.0;          // arccos(k.Rk), in [0, pi]
  double transfer_angle = 0.0;  // angle from alpha0 to alpha1 about k, in [0, pi]
  double omega2_signed = 0.0;   // R = R_{alpha1}(omega2_signed) R_k(transfer_angle)
  AxisAngle axis_angle;
};

/// The SO(3) geometric phase R = R_{n+1} ... R_1 and its decomposition.
/// Throws NotLiftableError for loops without a horizontal lift.
HolonomyResult geometric_phase(const Loop& loop, int steps_per_segment = kDefaultSteps,
                               const std::optional<Vec3>& u0 = std::nullopt,
                               const LoopTolerances& tol = {});

inline double generalized_solid_angle(const HolonomyResult& h) { return h.omega2; }

struct LiftPath {
  std::vector<double> t;
  std::vector<SpinState> states;
  std::vector<Chord> chords;
};

/// Horizontal lift starting at psi0, whose Bloch vector must equal gamma(0).
/// When gamma(0) is the center, the Majorana axis of psi0 must be
/// perpendicular to the initial tangent, otherwise InputError.
LiftPath horizontal_lift(const Loop& loop, const SpinState& psi0, int steps_per_segment = kDefaultSteps,
                         const LoopTolerances& tol = {});

/// Transports the tangency point along the continuous representative of
/// alpha and returns the resulting vertical displacement V.
Rotation vertical_displacement_rp2(const RP2Path& alpha, int steps_per_arc = kDefaultSteps);

/// Brute-force lift: at every step, the state in the next fiber closest to
/// the current one, found on a theta grid and refined by golden-section search.
/// Only for loops with 0 < |gamma| < 1 throughout (DegeneracyError otherwise).
LiftPath greedy_lift_oracle(const Loop& loop, const SpinState& psi0, int steps = kDefaultSteps,
                            int fiber_grid = 64);

/// Signed solid angle of a closed spherical polyline, mod 4 pi in [0, 4 pi).
/// A trailing copy of the first point is allowed. Antipodal neighbours throw.
double solid_angle_oracle(const std::vector<Vec3>& polyline);

/// Sum of Fubini-Study distances between consecutive states.
double fs_path_length(const LiftPath& path);

}  // namespace gphase

#endif  // GPHASE_HOLONOMY_HPP
