#pragma once

#include <cstdint>
#include <random>

#include "hammerkit/grid_function.hpp"
#include "hammerkit/lp_space.hpp"

namespace hammerkit {

/*
 * Seeded draws used by probes and tests. Doubles are extracted from the raw
 * 64-bit stream (not through std::uniform_real_distribution, whose output is
 * implementation-defined), so identical seeds give identical values on every
 * platform.
 */
namespace rng {

inline std::mt19937_64 engine(std::uint64_t seed, std::uint64_t stream = 0) {
  return std::mt19937_64(seed + 0x9e3779b97f4a7c15ULL * (stream + 1));
}

inline double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * uniform01(g);
}

// Components uniform in [-amplitude, amplitude].
inline GridFunction components(const GridPtr& grid, Side side, double exponent,
                               double amplitude, std::mt19937_64& g) {
  std::vector<double> v(grid->size());
  for (double& x : v) x = uniform(g, -amplitude, amplitude);
  return side == Side::primal ? GridFunction::primal(grid, exponent, std::move(v))
                              : GridFunction::dual(grid, exponent, std::move(v));
}

// Point with ||.|| <= radius in its own space norm.
inline GridFunction in_ball(const GridPtr& grid, Side side, double exponent, double radius,
                            std::mt19937_64& g) {
  GridFunction f = components(grid, side, exponent, 1.0, g);
  const double n = lp_norm(f);
  if (n == 0.0) return f;
  const double target = radius * uniform01(g);
  return (target / n) * f;
}

// Product point with ||w||_W <= radius.
inline ProductPoint product_in_ball(const GridPtr& grid, double p, double radius,
                                    std::mt19937_64& g) {
  const double q = conjugate_exponent(p);
  GridFunction u = components(grid, Side::primal, p, 1.0, g);
  GridFunction v = components(grid, Side::dual, q, 1.0, g);
  ProductPoint w(u, v);
  const double n = product_norm(w);
  if (n == 0.0) return w;
  const double s = radius * uniform01(g) / n;
  return ProductPoint(s * w.u, s * w.v);
}

}  // namespace rng
}  // namespace hammerkit
