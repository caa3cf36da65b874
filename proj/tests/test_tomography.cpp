#include <doctest.h>

#include <cmath>
#include <random>

#include "gphase/catalog.hpp"
#include "gphase/holonomy.hpp"
#include "gphase/tomography.hpp"
#include "test_util.hpp"

using namespace gphase;
using testutil::random_perpendicular;
using testutil::random_state;
using testutil::random_unit;

namespace {

double max_entry(const Mat3& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("basis rotations") {
  const auto set = default_basis_set();
  REQUIRE(set.size() == 6);
  CHECK(frobenius_distance(set[0], Rotation()) < 1e-15);
  const double r = 1.0 / std::sqrt(2.0);
  const std::vector<Vec3> axes{Vec3::UnitZ(), Vec3::UnitX(), Vec3::UnitY(), Vec3(r, r, 0), Vec3(0, r, r),
                               Vec3(r, 0, r)};
  for (size_t i = 0; i < set.size(); ++i) CHECK((set[i] * Vec3::UnitZ() - axes[i]).norm() < 1e-12);
  CHECK_THROWS_AS(basis_for_axis(Vec3::Zero()), InputError);
}

TEST_CASE("probabilities of eigenstates and the center state") {
  const auto p = measurement_probabilities(SpinState(0.0, 0.0, 1.0), Rotation());
  CHECK(std::abs(p[2] - 1.0) < 1e-15);
  const auto q = measurement_probabilities(SpinState(1.0, 0.0, 1.0), Rotation());
  CHECK(std::abs(q[0] - 0.5) < 1e-15);
  CHECK(std::abs(q[1]) < 1e-15);
  CHECK(std::abs(q[2] - 0.5) < 1e-15);
  // Measured along x, the z-eigenstate splits 1/4, 1/2, 1/4.
  const auto x = measurement_probabilities(SpinState(0.0, 0.0, 1.0), basis_for_axis(Vec3::UnitX()));
  CHECK(std::abs(x[0] - 0.25) < 1e-14);
  CHECK(std::abs(x[1] - 0.5) < 1e-14);
  CHECK(std::abs(x[2] - 0.25) < 1e-14);
}

TEST_CASE("simulated counts") {
  const MeasurementRecord e = simulate_counts(SpinState(0.0, 0.0, 1.0), Rotation(), 1000000, 7);
  CHECK(e.counts == std::array<std::int64_t, 3>{0, 0, 1000000});

  const SpinState c(1.0, 0.0, 1.0);
  const MeasurementRecord a = simulate_counts(c, Rotation(), 1000000, 7);
  const MeasurementRecord b = simulate_counts(c, Rotation(), 1000000, 7);
  CHECK(a.counts == b.counts);
  CHECK(a.counts[1] == 0);
  CHECK(a.counts[0] + a.counts[2] == 1000000);
  // Within five standard deviations of an even split.
  CHECK(std::abs(a.counts[0] - 500000) < 5 * 500);
  const MeasurementRecord d = simulate_counts(c, Rotation(), 1000000, 8);
  CHECK(d.counts != a.counts);
  const MeasurementRecord s = simulate_counts(c, Rotation(), 1000000, 7, 1);
  CHECK(s.counts != a.counts);
  CHECK_THROWS_AS(simulate_counts(c, Rotation(), 0, 7), InputError);
}

TEST_CASE("sampler mean and variance") {
  // Binomial(1000, 0.3) from the m = 0 population of a tailored state.
  const double p0 = 0.3;
  const SpinState psi(std::sqrt((1 - p0) / 2), std::sqrt(p0), std::sqrt((1 - p0) / 2));
  const int n = 4000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double k = static_cast<double>(simulate_counts(psi, Rotation(), 1000, 99, i).counts[1]);
    sum += k;
    sq += k * k;
  }
  const double mean = sum / n, var = sq / n - mean * mean;
  CHECK(std::abs(mean - 300.0) < 5 * std::sqrt(210.0 / n));
  CHECK(std::abs(var / 210.0 - 1.0) < 0.1);
}

TEST_CASE("exact populations reconstruct the moments") {
  std::mt19937_64 rng(97);
  const auto bases = default_basis_set();
  for (int i = 0; i < 200; ++i) {
    const SpinState psi = random_state(rng);
    std::vector<std::array<double, 3>> pops;
    for (const Rotation& b : bases) pops.push_back(measurement_probabilities(psi, b));
    const MomentEstimate m = reconstruct_from_populations(bases, pops);
    CHECK((m.s - bloch_vector(psi)).norm() < 1e-12);
    CHECK((m.T - fluctuation_tensor(psi)).norm() < 1e-12);
    CHECK_FALSE(m.clipped);
  }
  const std::vector<Rotation> few(bases.begin(), bases.begin() + 3);
  std::vector<std::array<double, 3>> pops(3, {0.25, 0.5, 0.25});
  CHECK_THROWS_AS(reconstruct_from_populations(few, pops), InputError);
}

TEST_CASE("estimation error shrinks like one over root shots") {
  std::mt19937_64 rng(101);
  const SpinState psi = random_state(rng);
  const Mat3 t = fluctuation_tensor(psi);
  const auto bases = default_basis_set();
  std::vector<double> logn, loge;
  for (std::int64_t shots : {10000, 100000, 1000000}) {
    double acc = 0.0;
    const int seeds = 40;
    for (int s = 0; s < seeds; ++s)
      acc += (run_tomography(psi, bases, shots, 1000 + s, 0).T - t).squaredNorm();
    logn.push_back(std::log(static_cast<double>(shots)));
    loge.push_back(0.5 * std::log(acc / seeds));
  }
  const double slope = (loge[2] - loge[0]) / (logn[2] - logn[0]);
  CHECK(slope > -0.6);
  CHECK(slope < -0.4);
}

TEST_CASE("clipping is reported") {
  // A coherent state measured with very few shots often overshoots |s| = 1.
  const SpinState psi(0.0, 0.0, 1.0);
  const auto bases = default_basis_set();
  bool any = false;
  for (std::uint64_t seed = 0; seed < 50 && !any; ++seed) {
    const MomentEstimate m = run_tomography(psi, bases, 20, seed, 0);
    if (m.clipped) {
      any = true;
      CHECK(m.raw_norm > 1.0);
      CHECK(std::abs(m.s.norm() - 1.0) < 1e-12);
    }
  }
  CHECK(any);
}

TEST_CASE("disk axis of a center state is its Majorana axis") {
  std::mt19937_64 rng(103);
  for (int i = 0; i < 50; ++i) {
    Chord c;
    c.r = 0.0;
    c.v = random_unit(rng);
    c.u = random_perpendicular(rng, c.v);
    CHECK(disk_axis(fluctuation_tensor(state_from_chord(c))).cross(c.u).norm() < 1e-10);
  }
}

TEST_CASE("tomography recovers the conjugation by the geometric phase") {
  const Loop l = make_builtin("gamma_c");
  const HolonomyResult h = geometric_phase(l);
  Chord c;
  c.r = 0.0;
  c.v = segment_loop(l).front().beta(0.0);
  c.u = any_perpendicular(c.v);
  const SpinState before = state_from_chord(c);
  const SpinState after = horizontal_lift(l, before).states.back();
  const auto bases = default_basis_set();
  int good = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Mat3 tb = run_tomography(before, bases, 1000000, seed, 0).T;
    const Mat3 ta = run_tomography(after, bases, 1000000, seed, 100).T;
    if (max_entry(h.R.matrix() * tb * h.R.matrix().transpose() - ta) < 5e-3) ++good;
  }
  CHECK(good >= 19);
}
