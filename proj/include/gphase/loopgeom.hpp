#ifndef GPHASE_LOOPGEOM_HPP
#define GPHASE_LOOPGEOM_HPP

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gphase/common.hpp"

namespace gphase {

/// Which one-sided limit to take at a breakpoint.
enum class Side { Left, Right };

struct LoopPoint {
  Vec3 pos = Vec3::Zero();
  Vec3 vel = Vec3::Zero();
  Vec3 acc = Vec3::Zero();
};

enum class LoopKind { Analytic, Piecewise, Sampled };

/// A closed loop t in [0, 1] -> ball, built from smooth pieces. Each piece
/// evaluates position, velocity and acceleration at global time t.
class Loop {
 public:
  using PieceFn = std::function<LoopPoint(double)>;
  struct Piece {
    double t0;
    double t1;
    PieceFn f;
  };
  /// Knot data kept for sampled loops (used for kink probing).
  struct Samples {
    std::vector<double> t;
    std::vector<Vec3> p;
  };

  /// Validates contiguity, continuity at breakpoints, closure and |gamma| <= 1.
  Loop(LoopKind kind, std::vector<Piece> pieces, std::string name = {},
       std::shared_ptr<const Samples> samples = nullptr);

  LoopPoint eval(double t, Side side = Side::Right) const;
  Vec3 pos(double t, Side side = Side::Right) const { return eval(t, side).pos; }

  /// Interior piece boundaries.
  std::vector<double> breakpoints() const;
  const std::vector<Piece>& pieces() const { return *pieces_; }
  LoopKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const Samples* samples() const { return samples_.get(); }

  /// t -> gamma(1 - t).
  Loop reversed() const;

  /// Velocities just before and just after t. For sampled loops at a knot these
  /// are one-sided second-order differences, so corners in the data show up.
  std::pair<Vec3, Vec3> one_sided_velocities(double t) const;

 private:
  LoopKind kind_;
  std::shared_ptr<const std::vector<Piece>> pieces_;
  std::string name_;
  std::shared_ptr<const Samples> samples_;
};

struct LoopTolerances {
  double zero = 1e-8;   // ball-radius units
  double kink = 1e-6;   // radians
  double speed = 1e-8;  // per unit t
};

/// a_0 = 0 < a_1 < ... < a_{n+1} = 1; interior entries are visits to the center.
struct ZeroSet {
  std::vector<double> times;
  bool start_at_center = false;
  bool end_at_center = false;
  std::vector<double> interior() const {
    return times.size() > 2 ? std::vector<double>(times.begin() + 1, times.end() - 1)
                            : std::vector<double>{};
  }
};

/// Throws NonIsolatedZeroError when the loop rests at the center.
ZeroSet find_zeros(const Loop& loop, const LoopTolerances& tol = {});

struct LiftabilityReport {
  bool liftable = true;
  ZeroSet zeros;
  std::vector<double> kink_times;   // interior zeros with mismatched tangents
  std::vector<double> stall_times;  // zeros where a one-sided speed vanishes
  std::vector<double> offending_times() const;
  std::string summary() const;
};

LiftabilityReport check_liftable(const Loop& loop, const LoopTolerances& tol = {});

/// beta and d(beta)/dt at one instant.
struct Direction {
  Vec3 beta;
  Vec3 dbeta;
};

/// One zero-free piece [a_{j-1}, a_j] of a liftable loop with its spherical
/// projection beta_j, closed at center endpoints by the tangent limits.
class Segment {
 public:
  Segment(Loop loop, int index, double t0, double t1, bool start_zero, bool end_zero)
      : loop_(std::move(loop)), index_(index), t0_(t0), t1_(t1),
        start_zero_(start_zero), end_zero_(end_zero) {}

  Direction direction(double t, Side side = Side::Right) const;
  Vec3 beta(double t, Side side = Side::Right) const { return direction(t, side).beta; }

  int index() const { return index_; }
  double t0() const { return t0_; }
  double t1() const { return t1_; }
  bool start_zero() const { return start_zero_; }
  bool end_zero() const { return end_zero_; }
  const Loop& loop() const { return loop_; }
  /// Loop breakpoints strictly inside the segment, where d(beta)/dt may jump.
  std::vector<double> interior_breakpoints() const;

 private:
  Loop loop_;
  int index_;
  double t0_, t1_;
  bool start_zero_, end_zero_;
};

/// Throws NotLiftableError (with the offending times) for kinked loops.
std::vector<Segment> segment_loop(const Loop& loop, const ZeroSet& zeros,
                                  const LoopTolerances& tol = {});
std::vector<Segment> segment_loop(const Loop& loop, const LoopTolerances& tol = {});

/// Continuous sphere representative of the projective path alpha: the beta_j
/// chain multiplied by (-1)^(j-1), which flips exactly at interior zeros.
struct RP2Path {
  std::vector<Segment> arcs;
  std::vector<int> signs;

  Direction rep(double t, Side side = Side::Right) const;
  Vec3 start() const { return rep(0.0, Side::Right).beta; }
  Vec3 end() const { return rep(1.0, Side::Left).beta; }
  /// alpha(0) = +-alpha(1).
  bool closed(double tol = 1e-8) const { return start().cross(end()).norm() <= tol; }
};

RP2Path project_to_rp2(const Loop& loop, const LoopTolerances& tol = {});

/// Cubic Hermite interpolation of samples with three-point finite-difference
/// tangents. If `closed`, the last point must repeat the first at t = 1;
/// otherwise the closing sample (1, p_0) is appended.
Loop make_sampled_loop(const std::vector<double>& t, const std::vector<Vec3>& p, bool closed,
                       std::string name = "samples");

/// Primitives for piecewise loops. Arc: center + R_axis(angle * s)(start - center).
struct LinePiece {
  Vec3 from;
  Vec3 to;
};
struct ArcPiece {
  Vec3 center;
  Vec3 axis;
  Vec3 start;
  double angle;
};
struct TimedPrimitive {
  std::variant<LinePiece, ArcPiece> shape;
  double duration = 1.0;
};

/// Durations are normalized to sum to one.
Loop make_piecewise_loop(const std::vector<TimedPrimitive>& prims, std::string name = "piecewise");

}  // namespace gphase

#endif  // GPHASE_LOOPGEOM_HPP
