#ifndef GPHASE_SRC_INTEGRATE_HPP
#define GPHASE_SRC_INTEGRATE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "gphase/loopgeom.hpp"

namespace gphase::detail {

/// Kahan-compensated running sum for fixed-size Eigen objects. Long RK4 runs
/// otherwise lose about sqrt(steps) ulps to roundoff.
template <class M>
struct Compensated {
  M sum;
  M carry;

  explicit Compensated(const M& init) : sum(init), carry(M::Zero()) {}

  void add(const M& delta) {
    const M y = delta - carry;
    const M t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  void reset(const M& value) {
    sum = value;
    carry.setZero();
  }
};

using DirectionFn = std::function<Direction(double, Side)>;

/// Splits [t0, t1] at the given interior breakpoints and spreads `steps`
/// over the pieces in proportion to their length.
struct Grid {
  std::vector<double> edges;
  std::vector<int> steps;
};

inline Grid make_grid(double t0, double t1, const std::vector<double>& breaks, int steps) {
  Grid g;
  g.edges.push_back(t0);
  for (double b : breaks) g.edges.push_back(b);
  g.edges.push_back(t1);
  const double len = t1 - t0;
  for (std::size_t i = 0; i + 1 < g.edges.size(); ++i) {
    const double frac = (g.edges[i + 1] - g.edges[i]) / len;
    g.steps.push_back(std::max(4, static_cast<int>(std::lround(steps * frac))));
  }
  return g;
}

/// Calls body(ta, tb, side_a, side_b) for every RK4 step, with exact
/// endpoints at the grid edges.
template <class Body>
void for_each_step(const Grid& g, Body&& body) {
  for (std::size_t i = 0; i + 1 < g.edges.size(); ++i) {
    const double a = g.edges[i], b = g.edges[i + 1];
    const int n = g.steps[i];
    for (int k = 0; k < n; ++k) {
      const double ta = a + (b - a) * k / n;
      const double tb = k + 1 == n ? b : a + (b - a) * (k + 1) / n;
      body(ta, tb, k == 0, k + 1 == n);
    }
  }
}

inline Mat3 generator(const Direction& d) {
  return d.dbeta * d.beta.transpose() - d.beta * d.dbeta.transpose();
}

}  // namespace gphase::detail

#endif  // GPHASE_SRC_INTEGRATE_HPP
