#pragma once

#include <cmath>

#include "hammerkit/errors.hpp"
#include "hammerkit/lp_space.hpp"

namespace hammerkit {

// Exponent pair for the Lyapunov functionals; requires q >= p, i.e. p <= 2.
struct LyapunovConfig {
  double p;
  double q;

  static LyapunovConfig from_p(double p) {
    if (!(p > 1.0) || p > 2.0)
      throw InvalidConfigError("lyapunov functionals need 1 < p <= 2 (so that q >= p)");
    return LyapunovConfig{p, conjugate_exponent(p)};
  }
};

namespace detail {

inline void require_exponent(const GridFunction& f, double e, const char* who) {
  if (std::abs(f.exponent() - e) > 1e-12) throw InvalidConfigError(who);
}

}  // namespace detail

/*
 * phi_p(x, y) = (p/q) ||x||^q - p <x, J_p y> + ||y||^p  on the primal space.
 * At p = 2 this is Alber's ||x||^2 - 2<x, Jy> + ||y||^2 = ||x - y||^2.
 */
inline double phi_p(const GridFunction& x, const GridFunction& y, const LyapunovConfig& cfg) {
  require_same_grid(x, y);
  detail::require_exponent(x, cfg.p, "phi_p: argument exponent differs from config");
  detail::require_exponent(y, cfg.p, "phi_p: argument exponent differs from config");
  const double nx = lp_norm(x);
  const double ny = lp_norm(y);
  return (cfg.p / cfg.q) * std::pow(nx, cfg.q) - cfg.p * pairing(duality_map_p(y), x) +
         std::pow(ny, cfg.p);
}

/*
 * Same functional instantiated on the dual space with the exponent roles
 * swapped: the space norm is ||.||_q, its duality map into E is J_q, and the
 * natural power is q. Used for the v-leg of the product functional and for
 * diagnostics when the primal exponent exceeds 2.
 */
inline double phi_dual(const GridFunction& xstar, const GridFunction& ystar,
                       const LyapunovConfig& cfg) {
  require_same_grid(xstar, ystar);
  detail::require_exponent(xstar, cfg.q, "phi_dual: argument exponent differs from config");
  detail::require_exponent(ystar, cfg.q, "phi_dual: argument exponent differs from config");
  const double nx = lp_norm(xstar);
  const double ny = lp_norm(ystar);
  return (cfg.q / cfg.p) * std::pow(nx, cfg.p) - cfg.q * pairing(xstar, duality_map_q(ystar)) +
         std::pow(ny, cfg.q);
}

/*
 * V_p(x, x*) = (p/q) ||x||^q - p <x, x*> + ||x*||^q.
 * The last term carries the dual space's natural power, which is what makes
 * the identity V_p(x, x*) = phi_p(x, J_q x*) hold exactly for every p; at
 * p = 2 it coincides with the classical ||x*||^2 form.
 */
inline double v_p(const GridFunction& x, const GridFunction& xstar, const LyapunovConfig& cfg) {
  require_same_grid(x, xstar);
  detail::require_exponent(x, cfg.p, "v_p: primal exponent differs from config");
  detail::require_exponent(xstar, cfg.q, "v_p: dual exponent differs from config");
  const double nx = lp_norm(x);
  const double ns = lp_norm(xstar);
  return (cfg.p / cfg.q) * std::pow(nx, cfg.q) - cfg.p * pairing(xstar, x) +
         std::pow(ns, cfg.q);
}

// wedge_p(w1, w2) = phi_p(u1, u2) + phi_dual(v1, v2) on W = E x E*.
inline double wedge_p(const ProductPoint& w1, const ProductPoint& w2, const LyapunovConfig& cfg) {
  return phi_p(w1.u, w2.u, cfg) + phi_dual(w1.v, w2.v, cfg);
}

// Three-point inequality: phi_p(y,x) - phi_p(y,z) >= p <z - y, J_p x - J_p z>.
inline bool check_three_point(const GridFunction& x, const GridFunction& y,
                              const GridFunction& z, const LyapunovConfig& cfg,
                              double tol = 1e-9) {
  const double lhs = phi_p(y, x, cfg) - phi_p(y, z, cfg);
  const double rhs = cfg.p * pairing(duality_map_p(x) - duality_map_p(z), z - y);
  return lhs >= rhs - tol;
}

/*
 * Dual perturbation inequality:
 *   V_p(x, x*) + <q J_q x* - p x, y*> <= V_p(x, x* + y*).
 * The multiplier is the exact gradient of the dual term, so the inequality is
 * the subgradient inequality of a convex function of x*; at p = 2 it reads
 * V(x, x*) + 2 <J^{-1} x* - x, y*>  <=  V(x, x* + y*).
 */
inline bool check_vp_perturbation(const GridFunction& x, const GridFunction& xstar,
                                  const GridFunction& ystar, const LyapunovConfig& cfg,
                                  double tol = 1e-9) {
  const double lhs = v_p(x, xstar, cfg) + cfg.q * pairing(ystar, duality_map_q(xstar)) -
                     cfg.p * pairing(ystar, x);
  const double rhs = v_p(x, xstar + ystar, cfg);
  return lhs <= rhs + tol;
}

// Lower bound on B_d(0): ||x - y||^p >= phi_p(x, y) - (p/q) ||x||^q.
inline bool check_norm_lower_bound(const GridFunction& x, const GridFunction& y, double d,
                                   const LyapunovConfig& cfg, double tol = 1e-9) {
  const double nx = lp_norm(x);
  const double ny = lp_norm(y);
  if (nx > d + 1e-12 || ny > d + 1e-12)
    throw BallMembershipError("check_norm_lower_bound: arguments must lie in B_d(0)");
  const double lhs = std::pow(lp_norm(x - y), cfg.p);
  const double rhs = phi_p(x, y, cfg) - (cfg.p / cfg.q) * std::pow(nx, cfg.q);
  return lhs >= rhs - tol;
}

// Two-sided norm bounds: (||x||-||y||)^p <= phi_p(x,y) <= (||x||+||y||)^p.
inline bool check_phi_bounds(const GridFunction& x, const GridFunction& y,
                             const LyapunovConfig& cfg, double tol = 1e-9) {
  const double nx = lp_norm(x);
  const double ny = lp_norm(y);
  const double value = phi_p(x, y, cfg);
  const double lower = std::pow(std::abs(nx - ny), cfg.p);
  const double upper = std::pow(nx + ny, cfg.p);
  return value >= lower - tol && value <= upper + tol;
}

}  // namespace hammerkit
