#include <doctest.h>

#include <cmath>
#include <random>

#include "gphase/catalog.hpp"
#include "gphase/holonomy.hpp"
#include "gphase/lens.hpp"
#include "test_util.hpp"

using namespace gphase;
using testutil::random_perpendicular;
using testutil::random_start_state;
using testutil::random_unit;
using testutil::signed_angle;

namespace {

const double kS3 = std::sqrt(3.0) / 2;

std::vector<Loop> liftable_catalog() {
  std::vector<Loop> out;
  for (const Loop& l : catalog())
    if (check_liftable(l).liftable) out.push_back(l);
  return out;
}

// Quarter great circle from z/2 to y/2 and back the same way.
Loop there_and_back() {
  const ArcPiece out{Vec3::Zero(), Vec3::UnitX(), Vec3(0, 0, 0.5), -kPi / 2};
  const ArcPiece back{Vec3::Zero(), Vec3::UnitX(), Vec3(0, 0.5, 0), kPi / 2};
  return make_piecewise_loop({{out, 1.0}, {back, 1.0}}, "there_and_back");
}

}  // namespace

TEST_CASE("frame transport along a quarter great circle") {
  const Loop l = there_and_back();
  const Segment seg(l, 1, 0.0, 0.5, false, false);
  const FrameTransport ft = transport_frame(seg, Vec3::UnitX(), 2000);
  CHECK(frobenius_distance(ft.R, rotation_x(-kPi / 2)) < 1e-12);
  CHECK(ft.u_consistency < 1e-12);
  CHECK((ft.R * Vec3::UnitX() - Vec3::UnitX()).norm() < 1e-12);
}

TEST_CASE("frame transport input checks") {
  const Loop l = there_and_back();
  const Segment seg(l, 1, 0.0, 0.5, false, false);
  CHECK_THROWS_AS(transport_frame(seg, Vec3::UnitZ(), 100), InputError);
  CHECK_THROWS_AS(transport_frame(seg, Vec3(2, 0, 0), 100), InputError);
  CHECK_THROWS_AS(transport_frame(seg, Vec3::UnitX(), 8), InputError);
}

TEST_CASE("constant direction transports to the identity") {
  const Loop p = make_builtin("point", {{"x", 0.1}, {"y", -0.2}, {"z", 0.3}});
  const HolonomyResult h = geometric_phase(p, 200);
  CHECK(frobenius_distance(h.R, Rotation()) < 1e-15);
  CHECK(h.omega2 < 1e-15);
  CHECK(h.omega1 < 1e-15);
  const Rotation v = vertical_displacement_rp2(project_to_rp2(p), 200);
  CHECK(frobenius_distance(v, Rotation()) < 1e-15);
}

TEST_CASE("gamma_a segment factors") {
  const HolonomyResult h = geometric_phase(make_builtin("gamma_a"), 20000);
  REQUIRE(h.segment_factors.size() == 2);
  const Vec3 b1(-0.5, 0.0, kS3);  // beta_1(1/2)
  const Rotation r1 = rotation_from_axis_angle(b1, -kS3 * kPi) * rotation_z(kPi);
  CHECK(frobenius_distance(h.segment_factors[0], r1) < 1e-9);
  const Vec3 n(0.5, 0.0, kS3);
  const double theta = (2.0 - std::sqrt(3.0)) * kPi;
  CHECK(frobenius_distance(h.R, rotation_from_axis_angle(n, theta)) < 1e-9);
  CHECK((h.axis_angle.axis - n).norm() < 1e-8);
  CHECK(std::abs(h.axis_angle.angle - theta) < 1e-9);
  CHECK(std::abs(h.omega2 - theta) < 1e-9);
  CHECK(h.omega1 < 1e-9);
}

TEST_CASE("literal clockwise gamma_a") {
  const HolonomyResult h = geometric_phase(make_builtin("gamma_a", {{"winding", -1.0}}), 20000);
  const Vec3 n(0.5, 0.0, kS3);
  CHECK(frobenius_distance(h.R, rotation_from_axis_angle(n, -(2.0 - std::sqrt(3.0)) * kPi)) < 1e-9);
}

TEST_CASE("gamma_c and gamma_d") {
  const HolonomyResult c = geometric_phase(make_builtin("gamma_c"), 20000);
  const HolonomyResult d = geometric_phase(make_builtin("gamma_d"), 20000);
  CHECK(std::abs(c.omega2 - kPi / 2) < 1e-9);
  CHECK(std::abs(d.omega2 - kPi / 2) < 1e-9);
  const Mat3 comm = c.R.matrix() * d.R.matrix() - d.R.matrix() * c.R.matrix();
  CHECK(comm.norm() > 0.5);
}

TEST_CASE("decomposition reproduces the holonomy") {
  for (const Loop& l : liftable_catalog()) {
    CAPTURE(l.name());
    const HolonomyResult h = geometric_phase(l, 4000);
    const Rotation rebuilt =
        rotation_from_axis_angle(h.alpha1, h.omega2_signed) * rotation_from_axis_angle(h.k, h.transfer_angle);
    CHECK(frobenius_distance(rebuilt, h.R) < 1e-9);
    CHECK((h.R * h.alpha0 - h.alpha1).norm() < 1e-9);
    CHECK(std::abs(h.k.norm() - 1.0) < 1e-12);
    CHECK(std::abs(h.k.dot(h.alpha0)) < 1e-9);
    CHECK(std::abs(h.k.dot(h.alpha1)) < 1e-9);
    const double want = std::acos(std::clamp(h.k.dot(h.R * h.k), -1.0, 1.0));
    CHECK(std::abs(h.omega2 - want) < 1e-6);
    CHECK(std::abs(std::abs(h.omega2_signed) - h.omega2) < 1e-9);
    CHECK(std::abs(generalized_solid_angle(h) - h.omega2) == 0.0);
  }
}

TEST_CASE("holonomy does not depend on the starting transverse vector") {
  std::mt19937_64 rng(59);
  for (const char* name : {"gamma_a", "circle", "gamma_c"}) {
    const Loop l = make_builtin(name);
    const HolonomyResult base = geometric_phase(l, 4000);
    const Vec3 b0 = segment_loop(l).front().beta(0.0);
    for (int i = 0; i < 20; ++i) {
      const HolonomyResult h = geometric_phase(l, 4000, random_perpendicular(rng, b0));
      CHECK(frobenius_distance(h.R, base.R) < 1e-9);
    }
  }
  CHECK_THROWS_AS(geometric_phase(make_builtin("circle"), 100, Vec3(1, 0, 0)), InputError);
}

TEST_CASE("transport of the tangency point gives the same rotation") {
  for (const Loop& l : liftable_catalog()) {
    CAPTURE(l.name());
    const HolonomyResult h = geometric_phase(l, 4000);
    const Rotation v = vertical_displacement_rp2(project_to_rp2(l), 4000);
    CHECK(frobenius_distance(h.R, v) < 1e-9);
  }
}

TEST_CASE("conjugation by a rotation of the loop") {
  const HolonomyResult a = geometric_phase(make_builtin("gamma_a"), 8000);
  const HolonomyResult b = geometric_phase(make_builtin("gamma_b"), 8000);
  const Rotation q = rotation_z(kPi / 2);
  CHECK(frobenius_distance(b.R, q * a.R * q.inverse()) < 1e-9);
  CHECK((b.axis_angle.axis - Vec3(0.0, 0.5, kS3)).norm() < 1e-8);
}

TEST_CASE("circles: rotation about the start direction by the enclosed solid angle") {
  for (double th0 : {kPi / 6, kPi / 3, kPi / 2.5}) {
    const Loop l = make_builtin("cap", {{"theta0", th0}, {"radius", 0.7}});
    const HolonomyResult h = geometric_phase(l, 8000);
    const Vec3 b0 = l.pos(0.0).normalized();
    CHECK(h.axis_angle.axis.cross(b0).norm() < 1e-8);
    std::vector<Vec3> poly;
    for (int i = 0; i < 4096; ++i) poly.push_back(l.pos(i / 4096.0).normalized());
    const double omega = solid_angle_oracle(poly);
    CHECK(testutil::circular_gap(signed_angle(h.R, b0), omega, 2 * kPi) < 1e-5);
  }
}

TEST_CASE("horizontal lift projects onto the loop and obeys the endpoint law") {
  std::mt19937_64 rng(61);
  for (const Loop& l : liftable_catalog()) {
    CAPTURE(l.name());
    const HolonomyResult h = geometric_phase(l, 4000);
    for (int trial = 0; trial < 3; ++trial) {
      const SpinState psi0 = random_start_state(rng, l);
      const LiftPath p = horizontal_lift(l, psi0, 4000);
      CHECK(fubini_study_distance(p.states.front(), psi0) < 1e-12);
      double worst = 0.0;
      for (size_t k = 0; k < p.t.size(); k += 7) {
        const Side side = p.t[k] >= 1.0 ? Side::Left : Side::Right;
        worst = std::max(worst, (bloch_vector(p.states[k]) - l.pos(p.t[k], side)).norm());
      }
      CHECK(worst < 1e-7);
      CHECK(fubini_study_distance(spin1_rep(h.R) * psi0, p.states.back()) < 1e-5);
    }
  }
}

TEST_CASE("lift input checks") {
  const Loop a = make_builtin("gamma_a");
  // Over the center, but the Majorana axis is along the initial tangent.
  Chord bad;
  bad.r = 0.0;
  bad.u = segment_loop(a).front().beta(0.0);
  bad.v = any_perpendicular(bad.u);
  CHECK_THROWS_AS(horizontal_lift(a, state_from_chord(bad), 200), InputError);
  // Not over gamma(0).
  CHECK_THROWS_AS(horizontal_lift(make_builtin("circle"), SpinState(0.0, 0.0, 1.0), 200), InputError);
  const Loop c = make_builtin("fig3c");
  Chord over;
  over.r = c.pos(0.0).norm();
  over.v = c.pos(0.0).normalized();
  over.u = any_perpendicular(over.v);
  CHECK_THROWS_AS(horizontal_lift(c, state_from_chord(over), 200), NotLiftableError);
}

TEST_CASE("lift of a constant loop is constant") {
  const Loop p = make_builtin("point", {{"x", 0.0}, {"y", 0.4}, {"z", 0.0}});
  std::mt19937_64 rng(67);
  const SpinState psi0 = random_start_state(rng, p);
  const LiftPath path = horizontal_lift(p, psi0, 100);
  for (const SpinState& s : path.states) CHECK(fubini_study_distance(s, psi0) < 1e-14);
  CHECK(fs_path_length(path) < 1e-12);
}

TEST_CASE("greedy oracle agrees with the transport lift") {
  std::mt19937_64 rng(71);
  const Loop l = make_builtin("circle");
  const SpinState psi0 = random_start_state(rng, l);
  const LiftPath ode = horizontal_lift(l, psi0, 4000);
  const LiftPath greedy = greedy_lift_oracle(l, psi0, 4000);
  CHECK(fubini_study_distance(ode.states.back(), greedy.states.back()) < 1e-3);
  // The greedy path is a first-order scheme: it approaches the transport lift
  // length from below, with the gap halving when the step count doubles.
  const double gap = fs_path_length(ode) - fs_path_length(greedy);
  const double gap2 = fs_path_length(horizontal_lift(l, psi0, 8000)) -
                      fs_path_length(greedy_lift_oracle(l, psi0, 8000));
  CHECK(gap > 0.0);
  CHECK(gap < 1e-4);
  CHECK(std::abs(gap / gap2 - 2.0) < 0.2);
  const Loop a = make_builtin("gamma_a");
  CHECK_THROWS_AS(greedy_lift_oracle(a, random_start_state(rng, a), 100), DegeneracyError);
}

TEST_CASE("solid angle oracle") {
  std::vector<Vec3> cap;
  const double th0 = kPi / 3;
  for (int i = 0; i < 20000; ++i) {
    const double ph = 2 * kPi * i / 20000.0;
    cap.emplace_back(std::sin(th0) * std::cos(ph), std::sin(th0) * std::sin(ph), std::cos(th0));
  }
  CHECK(std::abs(solid_angle_oracle(cap) - kPi) < 1e-6);
  std::vector<Vec3> rev(cap.rbegin(), cap.rend());
  CHECK(std::abs(solid_angle_oracle(rev) - 3 * kPi) < 1e-6);
  CHECK(solid_angle_oracle({Vec3::UnitZ(), Vec3::UnitZ(), Vec3::UnitZ()}) < 1e-15);
  std::vector<Vec3> small;
  for (int i = 0; i < 20000; ++i) {
    const double ph = 2 * kPi * i / 20000.0;
    small.emplace_back(0.5 * std::cos(ph), 0.5 * std::sin(ph), std::sqrt(3.0) / 2);
  }
  CHECK(std::abs(solid_angle_oracle(small) - 2 * kPi * (1 - std::sqrt(3.0) / 2)) < 1e-6);
  CHECK_THROWS_AS(solid_angle_oracle({Vec3::UnitZ(), -Vec3::UnitZ(), Vec3::UnitX()}), InputError);
}

TEST_CASE("fourth-order convergence") {
  const Loop l = make_builtin("gamma_a");
  const Rotation ref = geometric_phase(l, 200000).R;
  const double e1 = frobenius_distance(geometric_phase(l, 250).R, ref);
  const double e2 = frobenius_distance(geometric_phase(l, 500).R, ref);
  CHECK(e1 / e2 > 16.0 / 3);
  CHECK(e1 / e2 < 48.0);
}

TEST_CASE("transported tangent lines are shortest in L(4,1)") {
  std::mt19937_64 rng(107);
  for (const char* name : {"gamma_a", "circle", "gamma_d"}) {
    for (const Segment& seg : segment_loop(make_builtin(name))) {
      const FrameTransport ft = transport_frame(seg, random_perpendicular(rng, seg.beta(seg.t0())), 1000, true);
      auto length = [&](double a) {
        std::vector<TangentLine> path;
        for (size_t k = 0; k < ft.t.size(); ++k) {
          const Vec3 v = seg.beta(ft.t[k], k + 1 == ft.t.size() ? Side::Left : Side::Right);
          const double x = (ft.t[k] - seg.t0()) / (seg.t1() - seg.t0());
          path.push_back({v, rotation_from_axis_angle(v, a * std::sin(kPi * x)) * ft.u[k]});
        }
        return l41_path_length(path);
      };
      const double base = length(0.0);
      for (double a : {-0.3, -1e-2, 1e-2, 0.3}) CHECK(length(a) > base);
      // Stationary: the change is quadratic in the amplitude.
      CHECK(std::abs(length(1e-3) - length(-1e-3)) < 1e-6);
    }
  }
}

TEST_CASE("FS length of the transport lift varies at first order under fiber rotations") {
  // Characterizes a known limitation: the chord metric has a term in (u.dv)^2,
  // so rotating u about v can shorten the lift. See README.
  const Loop l = make_builtin("circle");
  std::mt19937_64 rng(109);
  const LiftPath p = horizontal_lift(l, random_start_state(rng, l), 2000);
  auto length = [&](double a) {
    double len = 0.0;
    SpinState prev = p.states.front();
    for (size_t k = 0; k < p.t.size(); ++k) {
      Chord c = p.chords[k];
      c.u = rotation_from_axis_angle(c.v, a * std::sin(kPi * p.t[k])) * c.u;
      const SpinState s = state_from_chord(c);
      if (k > 0) len += fubini_study_distance(prev, s);
      prev = s;
    }
    return len;
  };
  const double slope = (length(1e-4) - length(-1e-4)) / 2e-4;
  CHECK(std::abs(slope) > 1e-2);
  CHECK(std::abs(length(0.0) - fs_path_length(p)) < 1e-12);
}
