#ifndef GPHASE_COMMON_HPP
#define GPHASE_COMMON_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gphase {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using CVec3 = Eigen::Vector3cd;
using CMat3 = Eigen::Matrix3cd;
using CMat2 = Eigen::Matrix2cd;
using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (bad axis, zero vector, bad JSON, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A geometric object degenerates where the requested quantity is undefined
/// (chord of radius one, circle fiber at the center, det <= 0, ...).
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// The loop has no horizontal lift. Carries the offending parameter times.
class NotLiftableError : public Error {
 public:
  NotLiftableError(const std::string& what, std::vector<double> times)
      : Error(what), times_(std::move(times)) {}
  const std::vector<double>& times() const { return times_; }

 private:
  std::vector<double> times_;
};

/// The loop rests at the center on a whole interval, so its zero set is not
/// a finite set of points.
class NonIsolatedZeroError : public NotLiftableError {
 public:
  using NotLiftableError::NotLiftableError;
};

/// Unit vector perpendicular to `v` (|v| > 0), chosen deterministically.
Vec3 any_perpendicular(const Vec3& v);

}  // namespace gphase

#endif  // GPHASE_COMMON_HPP
