#include "gphase/loopgeom.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gphase {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------- Loop

Loop::Loop(LoopKind kind, std::vector<Piece> pieces, std::string name,
           std::shared_ptr<const Samples> samples)
    : kind_(kind), name_(std::move(name)), samples_(std::move(samples)) {
  if (pieces.empty()) throw InputError("loop has no pieces");
  if (pieces.front().t0 != 0.0 || std::abs(pieces.back().t1 - 1.0) > 1e-12) {
    throw InputError("loop pieces must cover [0, 1]");
  }
  pieces.back().t1 = 1.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (!(pieces[i].t1 > pieces[i].t0)) {
      throw InputError("loop piece " + std::to_string(i) + " has empty or reversed domain");
    }
    if (i + 1 < pieces.size()) {
      if (std::abs(pieces[i].t1 - pieces[i + 1].t0) > 1e-12) {
        throw InputError("loop pieces " + std::to_string(i) + " and " + std::to_string(i + 1) +
                         " are not contiguous in t");
      }
      pieces[i + 1].t0 = pieces[i].t1;
      const Vec3 a = pieces[i].f(pieces[i].t1).pos;
      const Vec3 b = pieces[i + 1].f(pieces[i + 1].t0).pos;
      if ((a - b).norm() > 1e-9) {
        throw InputError("loop pieces " + std::to_string(i) + " and " + std::to_string(i + 1) +
                         " do not meet (gap " + fmt((a - b).norm()) + ")");
      }
    }
  }
  const Vec3 start = pieces.front().f(0.0).pos;
  const Vec3 end = pieces.back().f(1.0).pos;
  if ((start - end).norm() > 1e-9) {
    throw InputError("loop is not closed: |gamma(0) - gamma(1)| = " + fmt((start - end).norm()));
  }
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const int n = 64;
    for (int k = 0; k <= n; ++k) {
      const double t = pieces[i].t0 + (pieces[i].t1 - pieces[i].t0) * k / n;
      const double r = pieces[i].f(t).pos.norm();
      if (!(r <= 1.0 + 1e-9)) {
        throw InputError("loop leaves the unit ball at t = " + fmt(t) + " (|gamma| = " + fmt(r) +
                         ")");
      }
    }
  }
  pieces_ = std::make_shared<const std::vector<Piece>>(std::move(pieces));
}

LoopPoint Loop::eval(double t, Side side) const {
  const auto& ps = *pieces_;
  t = std::clamp(t, 0.0, 1.0);
  auto it = std::upper_bound(ps.begin(), ps.end(), t,
                             [](double x, const Piece& p) { return x < p.t0; });
  std::size_t idx = it == ps.begin() ? 0 : static_cast<std::size_t>(it - ps.begin()) - 1;
  if (side == Side::Left && idx > 0 && t == ps[idx].t0) --idx;
  return ps[idx].f(t);
}

std::vector<double> Loop::breakpoints() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < pieces_->size(); ++i) out.push_back((*pieces_)[i].t0);
  return out;
}

Loop Loop::reversed() const {
  std::vector<Piece> rev;
  for (auto it = pieces_->rbegin(); it != pieces_->rend(); ++it) {
    PieceFn f = it->f;
    rev.push_back({1.0 - it->t1, 1.0 - it->t0, [f](double t) {
                     LoopPoint p = f(1.0 - t);
                     p.vel = -p.vel;
                     return p;
                   }});
  }
  rev.front().t0 = 0.0;
  std::shared_ptr<const Samples> s;
  if (samples_) {
    auto r = std::make_shared<Samples>();
    for (std::size_t k = samples_->t.size(); k-- > 0;) {
      r->t.push_back(1.0 - samples_->t[k]);
      r->p.push_back(samples_->p[k]);
    }
    s = r;
  }
  return Loop(kind_, std::move(rev), name_ + "_reversed", s);
}

std::pair<Vec3, Vec3> Loop::one_sided_velocities(double t) const {
  if (samples_) {
    const auto& ts = samples_->t;
    const auto& ps = samples_->p;
    const std::size_t n = ts.size();
    auto it = std::lower_bound(ts.begin(), ts.end(), t);
    std::size_t k = static_cast<std::size_t>(it - ts.begin());
    if (k > 0 && (k == n || std::abs(ts[k - 1] - t) < std::abs(ts[k] - t))) --k;
    const double local = k + 1 < n ? ts[k + 1] - ts[k] : ts[k] - ts[k - 1];
    if (std::abs(ts[k] - t) <= 1e-3 * local && k >= 2 && k + 2 < n) {
      // Second-order one-sided differences on possibly nonuniform knots.
      const double a = ts[k] - ts[k - 1], b = ts[k - 1] - ts[k - 2];
      const Vec3 left = (2 * a + b) / (a * (a + b)) * ps[k] - (a + b) / (a * b) * ps[k - 1] +
                        a / (b * (a + b)) * ps[k - 2];
      const double c = ts[k + 1] - ts[k], d = ts[k + 2] - ts[k + 1];
      const Vec3 right = -(2 * c + d) / (c * (c + d)) * ps[k] + (c + d) / (c * d) * ps[k + 1] -
                         c / (d * (c + d)) * ps[k + 2];
      return {left, right};
    }
  }
  return {eval(t, Side::Left).vel, eval(t, Side::Right).vel};
}

// ---------------------------------------------------------------- zeros

namespace {

struct Candidate {
  double t;
  double r;
};

double bisect_radial_rate(const Loop::PieceFn& f, double lo, double hi) {
  // g = gamma . gamma' is negative before the closest approach and positive after.
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const LoopPoint p = f(mid);
    if (p.pos.dot(p.vel) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

ZeroSet find_zeros(const Loop& loop, const LoopTolerances& tol) {
  std::vector<Candidate> cand;
  for (const auto& piece : loop.pieces()) {
    const double len = piece.t1 - piece.t0;
    const int n = std::max(64, static_cast<int>(std::ceil(8192.0 * len)));
    double prev_t = piece.t0;
    LoopPoint prev = piece.f(prev_t);
    double prev_r = prev.pos.norm();
    if (prev_r < tol.zero) cand.push_back({prev_t, prev_r});
    for (int k = 1; k <= n; ++k) {
      const double t = k == n ? piece.t1 : piece.t0 + len * k / n;
      const LoopPoint cur = piece.f(t);
      const double r = cur.pos.norm();
      if (r < tol.zero) {
        if (prev_r < tol.zero) {
          throw NonIsolatedZeroError("loop rests at the center on [" + fmt(prev_t) + ", " +
                                         fmt(t) + "]; its zero set is not finite",
                                     {prev_t, t});
        }
        cand.push_back({t, r});
      }
      const double g0 = prev.pos.dot(prev.vel);
      const double g1 = cur.pos.dot(cur.vel);
      if ((g0 < 0.0 && g1 >= 0.0) || (g0 <= 0.0 && g1 > 0.0)) {
        const double ts = bisect_radial_rate(piece.f, prev_t, t);
        const double rs = piece.f(ts).pos.norm();
        if (rs < tol.zero) cand.push_back({ts, rs});
      }
      prev_t = t;
      prev = cur;
      prev_r = r;
    }
  }
  std::sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) { return a.t < b.t; });
  std::vector<Candidate> merged;
  for (const auto& c : cand) {
    if (!merged.empty() && c.t - merged.back().t <= 1e-9) {
      if (c.r < merged.back().r) merged.back() = c;
    } else {
      merged.push_back(c);
    }
  }
  ZeroSet z;
  z.start_at_center = loop.pos(0.0, Side::Right).norm() < tol.zero;
  z.end_at_center = loop.pos(1.0, Side::Left).norm() < tol.zero;
  z.times.push_back(0.0);
  for (const auto& c : merged) {
    if (c.t > 1e-9 && c.t < 1.0 - 1e-9) z.times.push_back(c.t);
  }
  z.times.push_back(1.0);
  return z;
}

// ---------------------------------------------------------------- liftability

std::vector<double> LiftabilityReport::offending_times() const {
  std::vector<double> out = kink_times;
  out.insert(out.end(), stall_times.begin(), stall_times.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::string LiftabilityReport::summary() const {
  if (liftable) return "loop is liftable";
  std::string s = "loop is not liftable:";
  for (double t : kink_times) s += " corner at the center at t = " + fmt(t) + ";";
  for (double t : stall_times) s += " zero speed at the center at t = " + fmt(t) + ";";
  return s;
}

namespace {

double kink_threshold(const Loop& loop, double t, const LoopTolerances& tol) {
  const auto* s = loop.samples();
  if (!s) return tol.kink;
  // One-sided differences on data carry O(spacing) angular error.
  auto it = std::lower_bound(s->t.begin(), s->t.end(), t);
  std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - s->t.begin()), s->t.size() - 1);
  const double lo = k > 0 ? s->t[k] - s->t[k - 1] : 0.0;
  const double hi = k + 1 < s->t.size() ? s->t[k + 1] - s->t[k] : 0.0;
  return std::max(tol.kink, 50.0 * std::max(lo, hi));
}

LiftabilityReport check_with_zeros(const Loop& loop, const ZeroSet& zeros,
                                   const LoopTolerances& tol) {
  LiftabilityReport rep;
  rep.zeros = zeros;
  for (double a : zeros.interior()) {
    const auto [vl, vr] = loop.one_sided_velocities(a);
    if (vl.norm() <= tol.speed || vr.norm() <= tol.speed) {
      rep.stall_times.push_back(a);
      continue;
    }
    const double angle = std::atan2(vl.cross(vr).norm(), vl.dot(vr));
    if (angle > kink_threshold(loop, a, tol)) rep.kink_times.push_back(a);
  }
  if (zeros.start_at_center && loop.eval(0.0, Side::Right).vel.norm() <= tol.speed) {
    rep.stall_times.push_back(0.0);
  }
  if (zeros.end_at_center && loop.eval(1.0, Side::Left).vel.norm() <= tol.speed) {
    rep.stall_times.push_back(1.0);
  }
  rep.liftable = rep.kink_times.empty() && rep.stall_times.empty();
  return rep;
}

}  // namespace

LiftabilityReport check_liftable(const Loop& loop, const LoopTolerances& tol) {
  return check_with_zeros(loop, find_zeros(loop, tol), tol);
}

// ---------------------------------------------------------------- segments

Direction Segment::direction(double t, Side side) const {
  if (start_zero_ && t <= t0_ + 1e-13) {
    // Right limit of gamma/|gamma| at a center visit: the unit tangent e,
    // with derivative (gamma'' - (e.gamma'')e) / (2|gamma'|).
    const LoopPoint p = loop_.eval(t0_, Side::Right);
    const double sp = p.vel.norm();
    const Vec3 e = p.vel / sp;
    return {e, (p.acc - e.dot(p.acc) * e) / (2.0 * sp)};
  }
  if (end_zero_ && t >= t1_ - 1e-13) {
    const LoopPoint p = loop_.eval(t1_, Side::Left);
    const double sp = p.vel.norm();
    const Vec3 e = p.vel / sp;
    return {-e, -(p.acc - e.dot(p.acc) * e) / (2.0 * sp)};
  }
  const LoopPoint p = loop_.eval(t, side);
  const double r = p.pos.norm();
  if (!(r > 0.0)) {
    throw DegeneracyError("segment passes through the center at t = " + fmt(t));
  }
  const Vec3 b = p.pos / r;
  return {b, (p.vel - b.dot(p.vel) * b) / r};
}

std::vector<double> Segment::interior_breakpoints() const {
  std::vector<double> out;
  for (double b : loop_.breakpoints()) {
    if (b > t0_ + 1e-12 && b < t1_ - 1e-12) out.push_back(b);
  }
  return out;
}

std::vector<Segment> segment_loop(const Loop& loop, const ZeroSet& zeros,
                                  const LoopTolerances& tol) {
  const LiftabilityReport rep = check_with_zeros(loop, zeros, tol);
  if (!rep.liftable) throw NotLiftableError(rep.summary(), rep.offending_times());
  std::vector<Segment> segs;
  const auto& a = zeros.times;
  const std::size_t m = a.size() - 1;
  for (std::size_t j = 0; j < m; ++j) {
    const bool sz = j == 0 ? zeros.start_at_center : true;
    const bool ez = j + 1 == m ? zeros.end_at_center : true;
    segs.emplace_back(loop, static_cast<int>(j + 1), a[j], a[j + 1], sz, ez);
  }
  return segs;
}

std::vector<Segment> segment_loop(const Loop& loop, const LoopTolerances& tol) {
  return segment_loop(loop, find_zeros(loop, tol), tol);
}

Direction RP2Path::rep(double t, Side side) const {
  std::size_t j = 0;
  while (j + 1 < arcs.size() &&
         (t > arcs[j].t1() || (t == arcs[j].t1() && side == Side::Right))) {
    ++j;
  }
  Direction d = arcs[j].direction(t, side);
  d.beta *= signs[j];
  d.dbeta *= signs[j];
  return d;
}

RP2Path project_to_rp2(const Loop& loop, const LoopTolerances& tol) {
  RP2Path p;
  p.arcs = segment_loop(loop, tol);
  for (std::size_t j = 0; j < p.arcs.size(); ++j) p.signs.push_back(j % 2 == 0 ? 1 : -1);
  return p;
}

// ---------------------------------------------------------------- sampled loops

namespace {

struct HermiteData {
  std::vector<double> t;
  std::vector<Vec3> p;
  std::vector<Vec3> m;
};

LoopPoint hermite_eval(const HermiteData& d, double t) {
  const std::size_t n = d.t.size();
  auto it = std::upper_bound(d.t.begin(), d.t.end(), t);
  std::size_t k = it == d.t.begin() ? 0 : static_cast<std::size_t>(it - d.t.begin()) - 1;
  if (k >= n - 1) k = n - 2;
  const double h = d.t[k + 1] - d.t[k];
  const double s = (t - d.t[k]) / h;
  const double s2 = s * s, s3 = s2 * s;
  const Vec3& p0 = d.p[k];
  const Vec3& p1 = d.p[k + 1];
  const Vec3 m0 = h * d.m[k];
  const Vec3 m1 = h * d.m[k + 1];
  LoopPoint out;
  out.pos = (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * p1 +
            (s3 - s2) * m1;
  out.vel = ((6 * s2 - 6 * s) * p0 + (3 * s2 - 4 * s + 1) * m0 + (-6 * s2 + 6 * s) * p1 +
             (3 * s2 - 2 * s) * m1) / h;
  out.acc = ((12 * s - 6) * p0 + (6 * s - 4) * m0 + (-12 * s + 6) * p1 + (6 * s - 2) * m1) /
            (h * h);
  const double r = out.pos.norm();
  if (r > 1.0) {
    // Interpolation can bulge past the sphere near corners; pull it back radially.
    const Vec3 e = out.pos / r;
    out.pos = e;
    out.vel = (out.vel - e.dot(out.vel) * e) / r;
  }
  return out;
}

}  // namespace

Loop make_sampled_loop(const std::vector<double>& t_in, const std::vector<Vec3>& p_in, bool closed,
                       std::string name) {
  if (t_in.size() != p_in.size()) throw InputError("samples: times and points differ in count");
  std::vector<double> t = t_in;
  std::vector<Vec3> p = p_in;
  if (t.empty() || std::abs(t.front()) > 1e-12) throw InputError("samples: first time must be 0");
  t.front() = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!p[k].allFinite() || !std::isfinite(t[k])) {
      throw InputError("samples: entry " + std::to_string(k) + " is not finite");
    }
    if (k > 0 && !(t[k] > t[k - 1])) {
      throw InputError("samples: times must be strictly increasing (entry " + std::to_string(k) + ")");
    }
    if (p[k].norm() > 1.0 + 1e-9) {
      throw InputError("samples: entry " + std::to_string(k) + " lies outside the unit ball");
    }
  }
  if (closed) {
    if (std::abs(t.back() - 1.0) > 1e-12) {
      throw InputError("samples: a closed sample list must end at t = 1");
    }
    t.back() = 1.0;
    if ((p.back() - p.front()).norm() > 1e-9) {
      throw InputError("samples: closed = true but the last point does not repeat the first");
    }
    p.back() = p.front();
  } else {
    if (!(t.back() < 1.0)) throw InputError("samples: open sample list must end before t = 1");
    t.push_back(1.0);
    p.push_back(p.front());
  }
  const std::size_t n = t.size();
  if (n < 4) throw InputError("samples: need at least 4 points");

  auto d = std::make_shared<HermiteData>();
  d->t = t;
  d->p = p;
  d->m.resize(n);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double h0 = t[k] - t[k - 1], h1 = t[k + 1] - t[k];
    d->m[k] = -h1 / (h0 * (h0 + h1)) * p[k - 1] + (h1 - h0) / (h0 * h1) * p[k] +
              h0 / (h1 * (h0 + h1)) * p[k + 1];
  }
  {
    const double h0 = t[1] - t[0], h1 = t[2] - t[1];
    d->m[0] = -(2 * h0 + h1) / (h0 * (h0 + h1)) * p[0] + (h0 + h1) / (h0 * h1) * p[1] -
              h0 / (h1 * (h0 + h1)) * p[2];
  }
  {
    const double h0 = t[n - 2] - t[n - 3], h1 = t[n - 1] - t[n - 2];
    d->m[n - 1] = (2 * h1 + h0) / (h1 * (h0 + h1)) * p[n - 1] - (h0 + h1) / (h0 * h1) * p[n - 2] +
                  h1 / (h0 * (h0 + h1)) * p[n - 3];
  }
  auto samples = std::make_shared<Loop::Samples>();
  samples->t = t;
  samples->p = p;
  std::vector<Loop::Piece> pieces{{0.0, 1.0, [d](double x) { return hermite_eval(*d, x); }}};
  return Loop(LoopKind::Sampled, std::move(pieces), std::move(name), samples);
}

// ---------------------------------------------------------------- piecewise loops

Loop make_piecewise_loop(const std::vector<TimedPrimitive>& prims, std::string name) {
  if (prims.empty()) throw InputError("piecewise loop needs at least one piece");
  double total = 0.0;
  for (std::size_t i = 0; i < prims.size(); ++i) {
    if (!(prims[i].duration > 0.0) || !std::isfinite(prims[i].duration)) {
      throw InputError("piece " + std::to_string(i) + ": duration must be positive");
    }
    total += prims[i].duration;
  }
  std::vector<Loop::Piece> pieces;
  double acc = 0.0;
  for (std::size_t i = 0; i < prims.size(); ++i) {
    const double t0 = acc / total;
    acc += prims[i].duration;
    const double t1 = i + 1 == prims.size() ? 1.0 : acc / total;
    const double dur = t1 - t0;
    if (const auto* line = std::get_if<LinePiece>(&prims[i].shape)) {
      const Vec3 a = line->from, b = line->to;
      pieces.push_back({t0, t1, [a, b, t0, dur](double t) {
                          const double s = (t - t0) / dur;
                          return LoopPoint{a + s * (b - a), (b - a) / dur, Vec3::Zero()};
                        }});
    } else {
      const auto& arc = std::get<ArcPiece>(prims[i].shape);
      if (!(arc.axis.norm() > 0.0)) {
        throw InputError("piece " + std::to_string(i) + ": arc axis must be nonzero");
      }
      const Vec3 c = arc.center, n = arc.axis.normalized(), q0 = arc.start - arc.center;
      const double w = arc.angle / dur;
      pieces.push_back({t0, t1, [c, n, q0, w, t0](double t) {
                          const Vec3 q = Eigen::AngleAxisd(w * (t - t0), n) * q0;
                          const Vec3 nq = n.cross(q);
                          return LoopPoint{c + q, w * nq, w * w * n.cross(nq)};
                        }});
    }
  }
  return Loop(LoopKind::Piecewise, std::move(pieces), std::move(name));
}

}  // namespace gphase
