#include "gphase/tomography.hpp"

#include <cmath>

namespace gphase {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in (0, 1) from the key (seed, stream, counter).
double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  const std::uint64_t h = splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ counter);
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

// Inversion starting at the mode and walking outward with the pmf recurrence.
std::int64_t binomial(std::int64_t n, double p, double u) {
  if (n <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  const double q = 1.0 - p;
  const std::int64_t mode = std::min<std::int64_t>(n, static_cast<std::int64_t>(std::floor((n + 1) * p)));
  const double log_pmf = std::lgamma(n + 1.0) - std::lgamma(mode + 1.0) - std::lgamma(n - mode + 1.0) +
                         mode * std::log(p) + (n - mode) * std::log(q);
  const double pm = std::exp(log_pmf);
  u -= pm;
  if (u <= 0.0) return mode;
  std::int64_t lo = mode - 1, hi = mode + 1;
  double plo = pm, phi = pm;
  while (lo >= 0 || hi <= n) {
    if (hi <= n) {
      phi *= static_cast<double>(n - hi + 1) / hi * (p / q);
      u -= phi;
      if (u <= 0.0) return hi;
      ++hi;
    }
    if (lo >= 0) {
      plo *= static_cast<double>(lo + 1) / (n - lo) * (q / p);
      u -= plo;
      if (u <= 0.0) return lo;
      --lo;
    }
    if (phi < 1e-300 && plo < 1e-300) break;
  }
  return mode;  // only reachable through roundoff in the tail sums
}

}  // namespace

std::vector<Rotation> default_basis_set() {
  const double h = 1.0 / std::sqrt(2.0);
  return {Rotation(),
          basis_for_axis(Vec3::UnitX()),
          basis_for_axis(Vec3::UnitY()),
          basis_for_axis(Vec3(h, h, 0.0)),
          basis_for_axis(Vec3(0.0, h, h)),
          basis_for_axis(Vec3(h, 0.0, h))};
}

Rotation basis_for_axis(const Vec3& n) {
  if (!(n.norm() > 0.0)) throw InputError("measurement axis must be nonzero");
  return minimal_rotation(Vec3::UnitZ(), n.normalized());
}

std::array<double, 3> measurement_probabilities(const SpinState& psi, const Rotation& basis) {
  const CVec3 z = spin1_rep(basis).adjoint() * psi.normalized();
  return {std::norm(z(0)), std::norm(z(1)), std::norm(z(2))};
}

MeasurementRecord simulate_counts(const SpinState& psi, const Rotation& basis, std::int64_t shots,
                                  std::uint64_t seed, std::uint64_t stream) {
  if (shots < 1) throw InputError("shots must be at least 1");
  const auto p = measurement_probabilities(psi, basis);
  MeasurementRecord rec;
  rec.basis = basis;
  rec.shots = shots;
  rec.seed = seed;
  rec.stream = stream;
  rec.counts[0] = binomial(shots, p[0], uniform(seed, stream, 0));
  const double rest = 1.0 - p[0];
  const double p0 = rest > 0.0 ? std::clamp(p[1] / rest, 0.0, 1.0) : 0.0;
  rec.counts[1] = binomial(shots - rec.counts[0], p0, uniform(seed, stream, 1));
  rec.counts[2] = shots - rec.counts[0] - rec.counts[1];
  return rec;
}

MomentEstimate reconstruct_from_populations(const std::vector<Rotation>& bases,
                                            const std::vector<std::array<double, 3>>& pops) {
  if (bases.size() != pops.size()) throw InputError("bases and populations differ in count");
  const int n = static_cast<int>(bases.size());
  Eigen::MatrixXd a1(n, 3), a2(n, 6);
  Eigen::VectorXd m1(n), m2(n);
  for (int i = 0; i < n; ++i) {
    const Vec3 ax = bases[i] * Vec3::UnitZ();
    a1.row(i) = ax.transpose();
    a2.row(i) << ax(0) * ax(0), ax(1) * ax(1), ax(2) * ax(2), 2 * ax(0) * ax(1), 2 * ax(0) * ax(2),
        2 * ax(1) * ax(2);
    m1(i) = pops[i][2] - pops[i][0];
    m2(i) = pops[i][2] + pops[i][0];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd2(a2, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd1(a1, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (n < 6 || svd2.singularValues()(5) < 1e-9 * svd2.singularValues()(0) ||
      svd1.singularValues()(2) < 1e-9 * svd1.singularValues()(0)) {
    throw InputError("measurement axes do not determine all six second moments");
  }
  const Eigen::VectorXd s = svd1.solve(m1);
  const Eigen::VectorXd m = svd2.solve(m2);
  MomentEstimate est;
  est.s = s;
  est.raw_norm = est.s.norm();
  if (est.raw_norm > 1.0) {
    est.s /= est.raw_norm;
    est.clipped = true;
  }
  Mat3 mm;
  mm << m(0), m(3), m(4), m(3), m(1), m(5), m(4), m(5), m(2);
  const Mat3 t = mm - est.s * est.s.transpose();
  est.T = 0.5 * (t + t.transpose());
  return est;
}

MomentEstimate reconstruct_moments(const std::vector<MeasurementRecord>& records) {
  std::vector<Rotation> bases;
  std::vector<std::array<double, 3>> pops;
  for (const auto& r : records) {
    if (r.shots < 1 || r.counts[0] + r.counts[1] + r.counts[2] != r.shots) {
      throw InputError("measurement record counts do not sum to its shots");
    }
    bases.push_back(r.basis);
    const double n = static_cast<double>(r.shots);
    pops.push_back({r.counts[0] / n, r.counts[1] / n, r.counts[2] / n});
  }
  return reconstruct_from_populations(bases, pops);
}

MomentEstimate run_tomography(const SpinState& psi, const std::vector<Rotation>& bases,
                              std::int64_t shots, std::uint64_t seed, std::uint64_t stream0,
                              std::vector<MeasurementRecord>* records) {
  std::vector<MeasurementRecord> recs;
  for (std::size_t i = 0; i < bases.size(); ++i) {
    recs.push_back(simulate_counts(psi, bases[i], shots, seed, stream0 + i));
  }
  MomentEstimate est = reconstruct_moments(recs);
  if (records) *records = std::move(recs);
  return est;
}

Vec3 disk_axis(const Mat3& t) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (t + t.transpose()));
  return es.eigenvectors().col(0).normalized();
}

}  // namespace gphase
