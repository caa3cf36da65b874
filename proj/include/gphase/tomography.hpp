#ifndef GPHASE_TOMOGRAPHY_HPP
#define GPHASE_TOMOGRAPHY_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "gphase/rotations.hpp"
#include "gphase/spinstate.hpp"

namespace gphase {

/// Populations of m = -1, 0, +1 after rotating the state by basis^-1.
struct MeasurementRecord {
  Rotation basis;
  std::int64_t shots = 0;
  std::array<std::int64_t, 3> counts{};
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// Identity plus rotations taking z to x, y, (x+y)/sqrt2, (y+z)/sqrt2, (x+z)/sqrt2.
std::vector<Rotation> default_basis_set();

/// A rotation carrying z to the unit vector n.
Rotation basis_for_axis(const Vec3& n);

/// p_m = |(D(basis)^dagger psi)_m|^2 / <psi, psi>, ordered m = -1, 0, +1.
std::array<double, 3> measurement_probabilities(const SpinState& psi, const Rotation& basis);

/// Multinomial counts from a counter-based generator keyed by (seed, stream),
/// so results are identical across runs and platforms.
MeasurementRecord simulate_counts(const SpinState& psi, const Rotation& basis, std::int64_t shots,
                                  std::uint64_t seed, std::uint64_t stream = 0);

struct MomentEstimate {
  Vec3 s = Vec3::Zero();
  Mat3 T = Mat3::Zero();
  bool clipped = false;   // |s| exceeded 1 and was scaled back
  double raw_norm = 0.0;  // |s| before clipping
};

/// Least-squares estimate of s and T from populations measured along the
/// record axes. Throws InputError if the axes do not determine all moments.
MomentEstimate reconstruct_moments(const std::vector<MeasurementRecord>& records);

/// Same, from exact (or estimated) probabilities per basis.
MomentEstimate reconstruct_from_populations(const std::vector<Rotation>& bases,
                                            const std::vector<std::array<double, 3>>& pops);

/// Simulate every basis of the set (streams stream0, stream0 + 1, ...) and reconstruct.
MomentEstimate run_tomography(const SpinState& psi, const std::vector<Rotation>& bases,
                              std::int64_t shots, std::uint64_t seed, std::uint64_t stream0,
                              std::vector<MeasurementRecord>* records = nullptr);

/// The null direction of a disk-shaped tensor (eigenvector of the smallest eigenvalue).
Vec3 disk_axis(const Mat3& t);

}  // namespace gphase

#endif  // GPHASE_TOMOGRAPHY_HPP
