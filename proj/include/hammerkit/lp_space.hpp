#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "hammerkit/errors.hpp"
#include "hammerkit/grid_function.hpp"

namespace hammerkit {

namespace detail {

inline double signed_power(double x, double e) {
  if (x == 0.0) return 0.0;
  const double m = std::pow(std::abs(x), e);
  return x > 0.0 ? m : -m;
}

}  // namespace detail

// Weighted L^r norm (sum_i w_i |f_i|^r)^(1/r) of a sampled function.
inline double lp_norm(const GridFunction& f, double r) {
  if (!(r > 1.0)) throw InvalidExponentError("lp_norm needs r > 1");
  if (f.size() != f.grid().size()) throw DimensionError("grid function length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    acc += f.grid().weight(i) * std::pow(std::abs(f[i]), r);
  return std::pow(acc, 1.0 / r);
}

// Norm of f in its own space.
inline double lp_norm(const GridFunction& f) { return lp_norm(f, f.exponent()); }

// Duality pairing <g, u> = sum_i w_i g_i u_i of a dual g against a primal u.
inline double pairing(const GridFunction& g, const GridFunction& u) {
  require_same_grid(g, u);
  if (g.side() != Side::dual || u.side() != Side::primal)
    throw DimensionError("pairing takes (dual, primal) arguments");
  if (!exponents_conjugate(u.exponent(), g.exponent()))
    throw DimensionError("pairing needs conjugate exponents");
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += u.grid().weight(i) * g[i] * u[i];
  return acc;
}

/*
 * Generalized duality mapping J_p : E -> E*, realized componentwise as
 * |u_i|^{p-1} sgn(u_i). Under the weighted pairing this satisfies the two
 * defining identities exactly: <J_p u, u> = ||u||_p^p and
 * ||J_p u||_q = ||u||_p^{p-1}.
 */
inline GridFunction duality_map_p(const GridFunction& u) {
  if (u.side() != Side::primal) throw DimensionError("duality_map_p takes a primal function");
  const double p = u.exponent();
  const double q = conjugate_exponent(p);
  std::vector<double> v(u.size());
  if (p == 2.0) {
    for (std::size_t i = 0; i < u.size(); ++i) v[i] = u[i];
  } else {
    for (std::size_t i = 0; i < u.size(); ++i) v[i] = detail::signed_power(u[i], p - 1.0);
  }
  return GridFunction::dual(u.grid_ptr(), q, std::move(v));
}

// Inverse mapping J_q : E* -> E, componentwise gauge q-1; J_q(J_p u) = u.
inline GridFunction duality_map_q(const GridFunction& v) {
  if (v.side() != Side::dual) throw DimensionError("duality_map_q takes a dual function");
  const double q = v.exponent();
  const double p = conjugate_exponent(q);
  std::vector<double> u(v.size());
  if (q == 2.0) {
    for (std::size_t i = 0; i < v.size(); ++i) u[i] = v[i];
  } else {
    for (std::size_t i = 0; i < v.size(); ++i) u[i] = detail::signed_power(v[i], q - 1.0);
  }
  return GridFunction::primal(v.grid_ptr(), p, std::move(u));
}

// Product norm ||w||_W = (||u||_p^p + ||v||_q^p)^(1/p).
inline double product_norm(const ProductPoint& w) {
  const double p = w.u.exponent();
  const double nu = lp_norm(w.u);
  const double nv = lp_norm(w.v);
  return std::pow(std::pow(nu, p) + std::pow(nv, p), 1.0 / p);
}

// Componentwise duality mapping on W: (u, v) -> (J_p u, J_q v).
inline ProductDual product_duality_map(const ProductPoint& w) {
  return ProductDual(duality_map_p(w.u), duality_map_q(w.v));
}

// Inverse of product_duality_map: (h1, h2) -> (J_q h1, J_p h2).
inline ProductPoint product_duality_inverse(const ProductDual& h) {
  return ProductPoint(duality_map_q(h.du), duality_map_p(h.dv));
}

// <h, w> on the product space: the u-slot pairing plus the v-slot pairing.
inline double product_pairing(const ProductDual& h, const ProductPoint& w) {
  return pairing(h.du, w.u) + pairing(w.v, h.dv);
}

// Norm of a W* element; the dual space carries the conjugate power.
inline double product_dual_norm(const ProductDual& h) {
  const double q = h.du.exponent();
  const double na = lp_norm(h.du);
  const double nb = lp_norm(h.dv);
  return std::pow(std::pow(na, q) + std::pow(nb, q), 1.0 / q);
}

inline ProductPoint product_sub(const ProductPoint& a, const ProductPoint& b) {
  return ProductPoint(a.u - b.u, a.v - b.v);
}

inline double product_distance(const ProductPoint& a, const ProductPoint& b) {
  return product_norm(product_sub(a, b));
}

inline ProductDual dual_combine(double s, const ProductDual& a, double t, const ProductDual& b) {
  return ProductDual(s * a.du + t * b.du, s * a.dv + t * b.dv);
}

}  // namespace hammerkit
