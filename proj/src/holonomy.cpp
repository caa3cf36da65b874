#include "gphase/holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "integrate.hpp"

namespace gphase {

namespace {

using detail::Compensated;
using detail::DirectionFn;

// Re-orthonormalize only when drift is visible; projecting every few steps
// would inject roundoff the compensated sum has just removed.
constexpr int kProjectEvery = 64;
constexpr double kDriftThreshold = 1e-12;

FrameTransport integrate_frame(const DirectionFn& dir, double t0, double t1,
                               const std::vector<double>& breaks, int steps, const Vec3& u0,
                               bool record) {
  const detail::Grid grid = detail::make_grid(t0, t1, breaks, steps);
  Compensated<Mat3> x(Mat3::Identity());
  Vec3 u = u0;
  FrameTransport out;
  if (record) {
    out.t.push_back(t0);
    out.u.push_back(u);
    out.X.emplace_back();
  }
  Direction da{};
  long count = 0;
  detail::for_each_step(grid, [&](double ta, double tb, bool first, bool) {
    if (first) da = dir(ta, Side::Right);
    const double h = tb - ta;
    const double tm = 0.5 * (ta + tb);
    const Direction dm = dir(tm, Side::Right);
    const Direction db = dir(tb, Side::Left);
    const Mat3 a1 = detail::generator(da), a2 = detail::generator(dm), a3 = detail::generator(db);

    const Mat3& X = x.sum;
    const Mat3 k1 = a1 * X;
    const Mat3 k2 = a2 * (X + 0.5 * h * k1);
    const Mat3 k3 = a2 * (X + 0.5 * h * k2);
    const Mat3 k4 = a3 * (X + h * k3);
    x.add(h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));

    auto fu = [](const Direction& d, const Vec3& w) -> Vec3 { return -d.dbeta.dot(w) * d.beta; };
    const Vec3 l1 = fu(da, u);
    const Vec3 l2 = fu(dm, u + 0.5 * h * l1);
    const Vec3 l3 = fu(dm, u + 0.5 * h * l2);
    const Vec3 l4 = fu(db, u + h * l3);
    u += h / 6.0 * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
    u -= db.beta.dot(u) * db.beta;
    u.normalize();

    if (++count % kProjectEvery == 0 &&
        (x.sum.transpose() * x.sum - Mat3::Identity()).norm() > kDriftThreshold) {
      x.reset(project_to_rotation(x.sum).matrix());
    }
    if (record) {
      out.t.push_back(tb);
      out.u.push_back(u);
      out.X.push_back(Rotation::unchecked(x.sum));
    }
    da = db;
  });
  out.R = project_to_rotation(x.sum);
  out.u_consistency = (u - out.R * u0).norm();
  if (record) {
    out.X.back() = out.R;
  } else {
    out.t = {t0, t1};
    out.u = {u0, u};
    out.X = {Rotation(), out.R};
  }
  return out;
}

Vec3 vee(const Mat3& m) {
  return 0.5 * Vec3(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
}

// Signed angle of a rotation known to fix the unit vector n.
double signed_angle_about(const Mat3& w, const Vec3& n) {
  return std::atan2(n.dot(vee(w)), 0.5 * (w.trace() - 1.0));
}

void decompose(HolonomyResult& h) {
  const Mat3& r = h.R.matrix();
  const Vec3 c0 = h.alpha0.normalized();
  const Vec3 c1 = (r * c0).normalized();
  const Vec3 cr = c0.cross(c1);
  const double sn = cr.norm();
  const double cs = c0.dot(c1);
  if (sn > 1e-9) {
    h.k = cr / sn;
    h.transfer_angle = std::atan2(sn, cs);
  } else if (cs > 0) {
    h.k = any_perpendicular(c0);
    h.transfer_angle = 0.0;
  } else {
    // R c0 = -c0 forces R to be a half turn about an axis perpendicular to c0.
    Vec3 ax = h.axis_angle.axis - h.axis_angle.axis.dot(c0) * c0;
    h.k = ax.norm() > 1e-6 ? Vec3(ax.normalized()) : any_perpendicular(c0);
    h.transfer_angle = kPi;
  }
  const Mat3 w = r * rotation_from_axis_angle(h.k, h.transfer_angle).matrix().transpose();
  h.omega2_signed = signed_angle_about(w, c1);
  const Vec3 rk = r * h.k;
  // Same as arccos(k.Rk), but accurate near 0 and pi.
  h.omega2 = std::atan2(h.k.cross(rk).norm(), h.k.dot(rk));
  const Vec3 a1 = h.alpha1.normalized();
  h.omega1 = std::acos(std::clamp(std::abs(c0.dot(a1)), 0.0, 1.0));
}

void check_steps(int steps) {
  if (steps < 16) throw InputError("at least 16 integration steps are required");
}

}  // namespace

FrameTransport transport_frame(const Segment& seg, const Vec3& u0, int steps, bool record) {
  check_steps(steps);
  const Vec3 b0 = seg.beta(seg.t0(), Side::Right);
  if (std::abs(u0.norm() - 1.0) > 1e-9 || std::abs(u0.dot(b0)) > 1e-9) {
    throw InputError("transverse seed must be a unit vector perpendicular to beta at the segment start");
  }
  return integrate_frame([&seg](double t, Side s) { return seg.direction(t, s); }, seg.t0(),
                         seg.t1(), seg.interior_breakpoints(), steps, u0, record);
}

HolonomyResult geometric_phase(const Loop& loop, int steps, const std::optional<Vec3>& u0,
                               const LoopTolerances& tol) {
  check_steps(steps);
  const ZeroSet zeros = find_zeros(loop, tol);
  const std::vector<Segment> segs = segment_loop(loop, zeros, tol);
  HolonomyResult h;
  h.zero_times = zeros.times;
  const Vec3 b0 = segs.front().beta(0.0, Side::Right);
  Vec3 u = u0 ? *u0 : any_perpendicular(b0);
  for (std::size_t j = 0; j < segs.size(); ++j) {
    if (j > 0) {
      // The transverse vector is shared across a center visit.
      const Vec3 bj = segs[j].beta(segs[j].t0(), Side::Right);
      if (std::abs(u.dot(bj)) > 1e-8) {
        throw DegeneracyError("transverse vector lost orthogonality across the center at t = " +
                              std::to_string(segs[j].t0()));
      }
      u = (u - u.dot(bj) * bj).normalized();
    }
    const FrameTransport ft = transport_frame(segs[j], u, steps);
    h.segment_factors.push_back(ft.R);
    h.R = ft.R * h.R;
    u = ft.u.back();
  }
  h.axis_angle = axis_angle_of(h.R);
  h.alpha0 = b0;
  const double sign = segs.size() % 2 == 1 ? 1.0 : -1.0;
  h.alpha1 = sign * segs.back().beta(1.0, Side::Left);
  decompose(h);
  return h;
}

LiftPath horizontal_lift(const Loop& loop, const SpinState& psi0, int steps,
                         const LoopTolerances& tol) {
  check_steps(steps);
  const Vec3 s0 = bloch_vector(psi0);
  const Vec3 g0 = loop.pos(0.0, Side::Right);
  if ((s0 - g0).norm() > 1e-8) {
    throw InputError("initial state does not sit over gamma(0)");
  }
  const std::vector<Segment> segs = segment_loop(loop, tol);
  const Vec3 b0 = segs.front().beta(0.0, Side::Right);
  const Chord c0 = chord_from_state(psi0);
  Vec3 u;
  if (!c0.u_defined) {
    u = any_perpendicular(b0);
  } else {
    if (std::abs(c0.u.dot(b0)) > 1e-8) {
      throw InputError(
          "initial state's transverse axis is not perpendicular to the loop's starting direction");
    }
    u = (c0.u - c0.u.dot(b0) * b0).normalized();
  }
  LiftPath path;
  for (std::size_t j = 0; j < segs.size(); ++j) {
    const Segment& seg = segs[j];
    const FrameTransport ft = transport_frame(seg, u, steps, true);
    for (std::size_t k = j == 0 ? 0 : 1; k < ft.t.size(); ++k) {
      const double t = ft.t[k];
      const Side side = k == 0 ? Side::Right : Side::Left;
      Chord c;
      c.r = std::min(loop.pos(t, side).norm(), 1.0);
      c.v = seg.beta(t, side);
      c.u = (ft.u[k] - ft.u[k].dot(c.v) * c.v).normalized();
      c.u_defined = c.r < 1.0 - kChordDegenerateTol;
      path.t.push_back(t);
      path.states.push_back(state_from_chord(c));
      path.chords.push_back(c);
    }
    u = ft.u.back();
  }
  // Fix the global phase so the first sample is psi0 itself.
  const CVec3 z0 = psi0.normalized();
  const cplx ov = path.states.front().normalized().dot(z0);
  if (std::abs(ov) > 0.0) {
    const cplx ph = ov / std::abs(ov);
    for (auto& s : path.states) s = SpinState(CVec3(s.amplitudes() * ph));
  }
  return path;
}

Rotation vertical_displacement_rp2(const RP2Path& alpha, int steps) {
  check_steps(steps);
  if (alpha.arcs.empty() || alpha.arcs.size() != alpha.signs.size()) {
    throw InputError("projective path has no arcs");
  }
  for (std::size_t j = 0; j + 1 < alpha.arcs.size(); ++j) {
    const double a = alpha.arcs[j].t1();
    if ((alpha.rep(a, Side::Left).beta - alpha.rep(a, Side::Right).beta).norm() > 1e-6) {
      throw InputError("projective path representative is discontinuous at t = " + std::to_string(a));
    }
  }
  const Vec3 c0 = alpha.start();
  const Vec3 p0 = any_perpendicular(c0);
  Compensated<Vec3> p(p0);
  for (std::size_t j = 0; j < alpha.arcs.size(); ++j) {
    const Segment& arc = alpha.arcs[j];
    const double sg = alpha.signs[j];
    auto rep = [&arc, sg](double t, Side s) {
      Direction d = arc.direction(t, s);
      return Direction{sg * d.beta, sg * d.dbeta};
    };
    // dP/dt = -(c'.P) c keeps P tangent to the sphere at c without twisting.
    auto f = [](const Direction& d, const Vec3& w) -> Vec3 { return -d.dbeta.dot(w) * d.beta; };
    const detail::Grid grid = detail::make_grid(arc.t0(), arc.t1(), arc.interior_breakpoints(), steps);
    Direction da{};
    detail::for_each_step(grid, [&](double ta, double tb, bool first, bool) {
      if (first) da = rep(ta, Side::Right);
      const double h = tb - ta;
      const Direction dm = rep(0.5 * (ta + tb), Side::Right);
      const Direction db = rep(tb, Side::Left);
      const Vec3& w = p.sum;
      const Vec3 k1 = f(da, w);
      const Vec3 k2 = f(dm, w + 0.5 * h * k1);
      const Vec3 k3 = f(dm, w + 0.5 * h * k2);
      const Vec3 k4 = f(db, w + h * k3);
      p.add(h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
      da = db;
    });
  }
  const Vec3 c1 = alpha.end();
  const Vec3 p1 = (p.sum - p.sum.dot(c1) * c1).normalized();
  Mat3 f0, f1;
  f0 << p0, c0, p0.cross(c0);
  f1 << p1, c1, p1.cross(c1);
  return project_to_rotation(f1 * f0.transpose());
}

LiftPath greedy_lift_oracle(const Loop& loop, const SpinState& psi0, int steps, int fiber_grid) {
  check_steps(steps);
  if (fiber_grid < 4) throw InputError("fiber grid needs at least 4 points");
  const Vec3 s0 = bloch_vector(psi0);
  if ((s0 - loop.pos(0.0)).norm() > 1e-8) {
    throw InputError("initial state does not sit over gamma(0)");
  }
  LiftPath path;
  CVec3 cur = psi0.normalized();
  path.t.push_back(0.0);
  path.states.push_back(psi0);
  path.chords.push_back(chord_from_state(psi0));
  for (int k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k) / steps;
    const Vec3 s = loop.pos(t, Side::Left);
    const double r = s.norm();
    if (r <= kChordDegenerateTol) {
      throw DegeneracyError("greedy oracle does not support loops through the center (t = " +
                            std::to_string(t) + ")");
    }
    if (r >= 1.0 - kChordDegenerateTol) {
      throw DegeneracyError("greedy oracle met the boundary sphere at t = " + std::to_string(t));
    }
    const CMat3 d = spin1_rep(minimal_rotation(Vec3::UnitZ(), s / r));
    const CVec3 w = d.adjoint() * cur;
    const double a = std::sqrt((1.0 - r) / 2.0), b = std::sqrt((1.0 + r) / 2.0);
    auto base = [a, b](double th) {
      const cplx ph = std::polar(1.0, th);
      return CVec3(a * std::conj(ph), 0.0, b * ph);
    };
    auto dist = [&](double th) {
      const CVec3 y = base(th);
      const cplx ov = w.dot(y);
      return std::atan2((y - ov * w).norm(), std::abs(ov));
    };
    const double dth = kPi / fiber_grid;
    double best = 0.0, best_d = dist(0.0);
    for (int i = 1; i < fiber_grid; ++i) {
      const double di = dist(i * dth);
      if (di < best_d) {
        best_d = di;
        best = i * dth;
      }
    }
    // Golden-section refinement on the bracketing grid cells.
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = best - dth, hi = best + dth;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = dist(x1), f2 = dist(x2);
    for (int it = 0; it < 100 && hi - lo > 1e-14; ++it) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = dist(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = dist(x2);
      }
    }
    const double th = 0.5 * (lo + hi);
    CVec3 next = d * base(th);
    // Carry the global phase along so the path is continuous as vectors too.
    const cplx ov = next.dot(cur);
    if (std::abs(ov) > 0.0) next *= ov / std::abs(ov);
    cur = next;
    const SpinState st(cur);
    path.t.push_back(t);
    path.states.push_back(st);
    path.chords.push_back(chord_from_state(st));
  }
  return path;
}

double solid_angle_oracle(const std::vector<Vec3>& polyline) {
  std::vector<Vec3> p;
  for (const Vec3& x : polyline) {
    if (!(x.norm() > 0.0)) throw InputError("solid-angle polyline contains a zero vector");
    p.push_back(x.normalized());
  }
  if (p.size() > 1 && (p.back() - p.front()).norm() < 1e-15) p.pop_back();
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n && n > 1; ++i) {
    if ((p[i] + p[(i + 1) % n]).norm() < 1e-12) {
      throw InputError("consecutive polyline points are antipodal; the geodesic is ambiguous");
    }
  }
  double total = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Vec3& a = p[0];
    const Vec3& b = p[i];
    const Vec3& c = p[i + 1];
    const double num = a.dot(b.cross(c));
    const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    total += 2.0 * std::atan2(num, den);
  }
  const double four_pi = 4.0 * kPi;
  total = std::fmod(total, four_pi);
  if (total < 0.0) total += four_pi;
  if (total >= four_pi) total -= four_pi;
  return total;
}

double fs_path_length(const LiftPath& path) {
  double len = 0.0;
  for (std::size_t k = 1; k < path.states.size(); ++k) {
    len += fubini_study_distance(path.states[k - 1], path.states[k]);
  }
  return len;
}

}  // namespace gphase
