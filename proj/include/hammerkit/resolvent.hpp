#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hammerkit/errors.hpp"
#include "hammerkit/lp_space.hpp"
#include "hammerkit/operators.hpp"

namespace hammerkit {

struct ResolventConfig {
  double t = 1.0;
  double inner_tol = 1e-12;
  int max_inner_iter = 200;
};

/*
 * Root of the scalar monotone equation  |z|^{p-1} sgn(z) + t f(z) = h.
 * The left side is strictly increasing when f is nondecreasing, so a sign
 * bracket pins the root; bisection is accelerated by safeguarded Newton steps
 * whenever a derivative is supplied.
 */
inline double scalar_monotone_solve(double p, double t, const std::function<double(double)>& f,
                                    double h, const std::function<double(double)>& df = nullptr,
                                    double inner_tol = 1e-12, int max_expansions = 200) {
  if (!(p > 1.0)) throw InvalidExponentError("scalar solve needs p > 1");
  if (!(t > 0.0)) throw InvalidConfigError("scalar solve needs t > 0");
  const auto g = [&](double z) {
    const double val = detail::signed_power(z, p - 1.0) + t * f(z) - h;
    if (std::isnan(val)) throw EvaluationError("scalar equation produced NaN", 0);
    return val;
  };

  // |z|^{p-1} ~ |h| at the root when f is small, so seed the bracket there.
  double width = 1.0 + std::pow(std::abs(h), 1.0 / (p - 1.0));
  if (!std::isfinite(width)) width = 1.0;
  double lo = -width, hi = width;
  double glo = g(lo), ghi = g(hi);
  int expansions = 0;
  while (glo > 0.0) {
    lo *= 2.0;
    glo = g(lo);
    if (++expansions > max_expansions)
      throw NoRootError("bracket expansion exhausted (non-coercive nonlinearity?)");
  }
  while (ghi < 0.0) {
    hi *= 2.0;
    ghi = g(hi);
    if (++expansions > max_expansions)
      throw NoRootError("bracket expansion exhausted (non-coercive nonlinearity?)");
  }

  double z = 0.5 * (lo + hi);
  for (int iter = 0; iter < 400; ++iter) {
    const double gz = g(z);
    if (std::abs(gz) <= inner_tol) return z;
    if (gz > 0.0)
      hi = z;
    else
      lo = z;
    double znext = 0.5 * (lo + hi);
    if (df) {
      const double dgauge = (p == 2.0) ? 1.0 : (p - 1.0) * std::pow(std::abs(z), p - 2.0);
      const double dg = dgauge + t * df(z);
      if (std::isfinite(dg) && dg > 0.0) {
        const double cand = z - gz / dg;
        if (cand > lo && cand < hi) znext = cand;
      }
    }
    z = znext;
  }
  if (std::abs(g(z)) <= 1e3 * inner_tol) return z;
  throw ResolventFailureError("scalar monotone solve did not reach tolerance");
}

namespace detail {

// Solves J_p z + t F z = h componentwise (h given on the dual side).
inline GridFunction nemytskii_solve_rhs(const DiscretizedOperators& ops,
                                        const std::vector<double>& h, double t,
                                        double inner_tol) {
  const auto& grid = ops.grid();
  std::vector<double> z(h.size());
  const auto& nl = ops.nonlinearity();
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = grid.node(i);
    std::function<double(double)> fi = [&nl, x](double s) { return nl.f(x, s); };
    std::function<double(double)> dfi;
    if (nl.df_ds) dfi = [&nl, x](double s) { return nl.df_ds(x, s); };
    z[i] = scalar_monotone_solve(ops.p(), t, fi, h[i], dfi, inner_tol);
  }
  return GridFunction::primal(ops.grid_ptr(), ops.p(), std::move(z));
}

/*
 * Solves J_q w + t K w = h (h on the primal side) for the dual unknown w.
 * Identity kernels reduce to independent scalar equations; dense kernels take
 * a damped Newton iteration on the N-dimensional system with the gauge
 * derivative clamped near w_i = 0 (it blows up like |w|^{q-2} when q < 2) and
 * a nonlinear Gauss-Seidel sweep as fallback when the line search stalls.
 */
inline GridFunction integral_solve_rhs(const DiscretizedOperators& ops,
                                       const std::vector<double>& h, double t,
                                       double inner_tol, int max_inner_iter) {
  const double q = ops.q();
  if (ops.has_identity_kernel()) {
    const double c = ops.identity_scale();
    std::vector<double> w(h.size());
    for (std::size_t i = 0; i < h.size(); ++i)
      w[i] = scalar_monotone_solve(q, t, [c](double s) { return c * s; }, h[i],
                                   [c](double) { return c; }, inner_tol);
    return GridFunction::dual(ops.grid_ptr(), q, std::move(w));
  }

  const auto n = static_cast<Eigen::Index>(h.size());
  const Eigen::MatrixXd& M = ops.kernel_matrix();
  Eigen::Map<const Eigen::VectorXd> rhs(h.data(), n);

  const auto gauge = [q](double s) { return detail::signed_power(s, q - 1.0); };
  const auto dgauge = [q](double s) {
    if (q == 2.0) return 1.0;
    const double d = (q - 1.0) * std::pow(std::abs(s), q - 2.0);
    if (!std::isfinite(d) || d > 1e8) return 1e8;  // clamp near s = 0 for q < 2
    return d;
  };
  const auto residual = [&](const Eigen::VectorXd& w) {
    Eigen::VectorXd r = t * (M * w) - rhs;
    for (Eigen::Index i = 0; i < n; ++i) r(i) += gauge(w(i));
    return r;
  };

  // t -> 0 limit J_q w = h seeds the iteration.
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i)
    w(i) = detail::signed_power(h[static_cast<std::size_t>(i)], conjugate_exponent(q) - 1.0);

  Eigen::VectorXd r = residual(w);
  double rnorm = r.lpNorm<Eigen::Infinity>();
  for (int iter = 0; iter < max_inner_iter; ++iter) {
    if (rnorm <= inner_tol) {
      std::vector<double> out(w.data(), w.data() + n);
      return GridFunction::dual(ops.grid_ptr(), q, std::move(out));
    }
    Eigen::MatrixXd jac = t * M;
    for (Eigen::Index i = 0; i < n; ++i) {
      double d = dgauge(w(i));
      if (d <= 0.0) d = 1e-12;  // keep the LU well posed when M has a zero row
      jac(i, i) += d;
    }
    const Eigen::VectorXd step = jac.partialPivLu().solve(-r);
    bool accepted = false;
    if (step.allFinite()) {
      double alpha = 1.0;
      while (alpha >= 1e-12) {
        Eigen::VectorXd wt = w + alpha * step;
        Eigen::VectorXd rt = residual(wt);
        const double rtn = rt.lpNorm<Eigen::Infinity>();
        if (rtn < rnorm * (1.0 - 1e-4 * alpha)) {
          w = std::move(wt);
          r = std::move(rt);
          rnorm = rtn;
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
    }
    if (!accepted) {
      // Gauss-Seidel sweep: each coordinate solved exactly with the others frozen.
      for (Eigen::Index i = 0; i < n; ++i) {
        double off = 0.0;
        for (Eigen::Index j = 0; j < n; ++j)
          if (j != i) off += M(i, j) * w(j);
        const double mii = M(i, i);
        w(i) = scalar_monotone_solve(q, t, [mii](double s) { return mii * s; },
                                     rhs(i) - t * off, [mii](double) { return mii; },
                                     inner_tol);
      }
      r = residual(w);
      rnorm = r.lpNorm<Eigen::Infinity>();
    }
  }
  if (rnorm <= inner_tol) {
    std::vector<double> out(w.data(), w.data() + n);
    return GridFunction::dual(ops.grid_ptr(), q, std::move(out));
  }
  throw ResolventFailureError("integral resolvent Newton did not converge");
}

}  // namespace detail

// Resolvent of F: z = (J_p + tF)^{-1} J_p x.
inline GridFunction resolvent_nemytskii(const DiscretizedOperators& ops, const GridFunction& x,
                                        const ResolventConfig& cfg) {
  if (!(cfg.t > 0.0)) throw InvalidConfigError("resolvent parameter must be positive");
  const GridFunction h = duality_map_p(x);
  return detail::nemytskii_solve_rhs(ops, h.values(), cfg.t, cfg.inner_tol);
}

// Resolvent of K on the dual side: w = (J_q + tK)^{-1} J_q y.
inline GridFunction resolvent_integral(const DiscretizedOperators& ops, const GridFunction& y,
                                       const ResolventConfig& cfg) {
  if (!(cfg.t > 0.0)) throw InvalidConfigError("resolvent parameter must be positive");
  const GridFunction h = duality_map_q(y);
  return detail::integral_solve_rhs(ops, h.values(), cfg.t, cfg.inner_tol, cfg.max_inner_iter);
}

namespace detail {

/*
 * Fixed-point solve of (J^W_p + tau A) z = h for tau in (0,1) by alternating
 * the component resolvents:
 *   u <- (J_p + tau F)^{-1} (h1 + tau v),
 *   v <- (J_q + tau K)^{-1} (h2 - tau u).
 * A fixed point satisfies J_p u + tau (Fu - v) = h1 and
 * J_q v + tau (Kv + u) = h2, which is the product equation slot by slot. The
 * composed map contracts with factor ~tau, hence the tau < 1 requirement.
 */
inline ProductPoint product_base_solve(const DiscretizedOperators& ops, const ProductDual& h,
                                       double tau, const ResolventConfig& cfg) {
  if (!(tau > 0.0 && tau < 1.0))
    throw InvalidConfigError("product base solve needs a parameter in (0,1)");
  const double comp_tol = std::max(cfg.inner_tol * 0.1, 1e-15);
  GridFunction u = duality_map_q(h.du);
  GridFunction v = duality_map_p(h.dv);
  double prev_step = std::numeric_limits<double>::infinity();
  int stall = 0;
  for (long iter = 0; iter < 200000; ++iter) {
    const GridFunction un =
        nemytskii_solve_rhs(ops, (h.du + tau * v).values(), tau, comp_tol);
    const GridFunction vn = integral_solve_rhs(ops, (h.dv - tau * un).values(), tau, comp_tol,
                                               cfg.max_inner_iter);
    const double step = product_distance(ProductPoint(un, vn), ProductPoint(u, v));
    u = un;
    v = vn;
    if (step <= cfg.inner_tol * 0.5) return ProductPoint(u, v);
    if (step >= prev_step * (1.0 - 1e-16)) {
      if (++stall >= 64)
        throw ResolventFailureError("product resolvent fixed point stalled");
    } else {
      stall = 0;
    }
    prev_step = step;
  }
  throw ResolventFailureError("product resolvent fixed point did not converge");
}

}  // namespace detail

/*
 * Single-stage range extension: given a solver for (J_p + t0 A) z = rhs, the
 * solution of J_p x + t A x = wstar is the fixed point of
 *   x <- solve_t0( (t0/t) wstar + (1 - t0/t) J_p x ),
 * a contraction precisely when t > t0/2.
 */
template <class Space, class Solver>
typename Space::Point resolvent_extend(const Space& sp, Solver&& solve_at_base,
                                       const typename Space::Rhs& wstar, double t, double t0,
                                       const ResolventConfig& cfg) {
  if (!(t > 0.5 * t0))
    throw ContractionFactorError("extension needs t > t0/2 for a contractive map");
  typename Space::Point x = solve_at_base(wstar);
  if (t == t0) return x;
  const double c = t0 / t;
  double prev_step = std::numeric_limits<double>::infinity();
  int stall = 0;
  for (long iter = 0; iter < 500000; ++iter) {
    const typename Space::Rhs rhs = sp.combine(c, wstar, 1.0 - c, sp.dual_map(x));
    typename Space::Point xn = solve_at_base(rhs);
    const double step = sp.distance(xn, x);
    x = std::move(xn);
    if (step <= cfg.inner_tol * 0.5) return x;
    if (step >= prev_step * (1.0 - 1e-16)) {
      if (++stall >= 64) throw ResolventFailureError("range extension stalled");
    } else {
      stall = 0;
    }
    prev_step = step;
  }
  throw ResolventFailureError("range extension did not converge");
}

/*
 * Cascade wrapper reaching any t > 0: targets below t0/2 are served by
 * stacking extensions over geometrically decreasing bases (factor 1.9 < 2
 * keeps every stage inside its contraction region).
 */
template <class Space>
typename Space::Point resolvent_extend_cascade(
    const Space& sp,
    std::function<typename Space::Point(const typename Space::Rhs&)> solve_at_base,
    const typename Space::Rhs& wstar, double t, double t0, const ResolventConfig& cfg) {
  double base = t0;
  auto solver = std::move(solve_at_base);
  while (!(t > 0.5 * base)) {
    const double next = base / 1.9;
    auto inner = solver;
    const double from = base;
    const ResolventConfig inner_cfg = cfg;
    solver = [sp, inner, next, from, inner_cfg](const typename Space::Rhs& rhs) {
      return resolvent_extend(sp, inner, rhs, next, from, inner_cfg);
    };
    base = next;
  }
  if (t == base) return solver(wstar);
  return resolvent_extend(sp, solver, wstar, t, base, cfg);
}

// Extension hooks for a scalar equation |z|^{p-1}sgn z + t a(z) = h.
struct ScalarPSpace {
  double p = 2.0;
  using Point = double;
  using Rhs = double;
  Rhs dual_map(Point x) const { return detail::signed_power(x, p - 1.0); }
  Rhs combine(double a, Rhs x, double b, Rhs y) const { return a * x + b * y; }
  double distance(Point x, Point y) const { return std::abs(x - y); }
};

// Extension hooks for the product space W = E x E*.
struct ProductWSpace {
  using Point = ProductPoint;
  using Rhs = ProductDual;
  Rhs dual_map(const Point& w) const { return product_duality_map(w); }
  Rhs combine(double a, const Rhs& x, double b, const Rhs& y) const {
    return dual_combine(a, x, b, y);
  }
  double distance(const Point& x, const Point& y) const { return product_distance(x, y); }
};

/*
 * Product resolvent z = (J^W_p + tA)^{-1} J^W_p w. Parameters below 1 are in
 * the contraction region of the alternating fixed point and are solved
 * directly; larger parameters are reached by a range extension over the base
 * t0 = 0.5.
 */
inline ProductPoint resolvent_product(const DiscretizedOperators& ops, const ProductPoint& w,
                                      const ResolventConfig& cfg) {
  if (!(cfg.t > 0.0)) throw InvalidConfigError("resolvent parameter must be positive");
  const ProductDual h = product_duality_map(w);
  if (cfg.t <= 0.95) return detail::product_base_solve(ops, h, cfg.t, cfg);
  constexpr double kBaseT0 = 0.5;
  ResolventConfig base_cfg = cfg;
  base_cfg.inner_tol = std::max(cfg.inner_tol * 0.1, 1e-15);
  const auto base_solver = [&](const ProductDual& rhs) {
    return detail::product_base_solve(ops, rhs, kBaseT0, base_cfg);
  };
  return resolvent_extend(ProductWSpace{}, base_solver, h, cfg.t, kBaseT0, cfg);
}

// Residuals of the two stationarity equations the path point must satisfy:
//   theta (J_p y - J_p u1) + F y - z   and   theta (J_q z - J_q v1) + K z + y.
inline std::pair<double, double> path_equation_residuals(const DiscretizedOperators& ops,
                                                         const ProductPoint& w1, double theta,
                                                         const ProductPoint& x) {
  const GridFunction r1 = theta * (duality_map_p(x.u) - duality_map_p(w1.u)) +
                          (ops.apply_nemytskii(x.u) - x.v);
  const GridFunction r2 = theta * (duality_map_q(x.v) - duality_map_q(w1.v)) +
                          (ops.apply_integral(x.v) + x.u);
  return {lp_norm(r1), lp_norm(r2)};
}

/*
 * Regularization path x(theta) = (J^W_p + (1/theta) A)^{-1} J^W_p w1. For
 * strongly monotone problems x(theta) tends to the zero of A as theta -> 0.
 */
inline ProductPoint regularization_path(const DiscretizedOperators& ops, const ProductPoint& w1,
                                        double theta, ResolventConfig cfg = {}) {
  if (!(theta > 0.0 && theta <= 1.0))
    throw InvalidConfigError("path parameter must lie in (0, 1]");
  cfg.t = 1.0 / theta;
  const ProductPoint x = resolvent_product(ops, w1, cfg);
  const auto [r1, r2] = path_equation_residuals(ops, w1, theta, x);
  if (!(r1 <= 1e-8 && r2 <= 1e-8))
    throw ResolventFailureError("path point failed its stationarity residual check");
  return x;
}

}  // namespace hammerkit
