#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "hammerkit/errors.hpp"
#include "hammerkit/grid_function.hpp"
#include "hammerkit/lp_space.hpp"
#include "hammerkit/parallel.hpp"
#include "hammerkit/random.hpp"

namespace hammerkit {

// Pointwise nonlinearity f(x, s) and optional derivative in s. An optional
// monotonicity floor r > 0 claims <Fu - Fv, u - v> >= r ||u - v|| at probe
// scale; claims are checked empirically at construction and rejected when a
// sampled pair refutes them.
struct ScalarNonlinearity {
  std::string name;
  std::function<double(double, double)> f;
  std::function<double(double, double)> df_ds;  // may be empty
  std::optional<double> monotonicity_floor;
};

// Integral kernel k(x, y); flags are construction-time checked promises.
struct IntegralKernel {
  std::string name;
  std::function<double(double, double)> k;
  bool symmetric = false;
  bool psd_claimed = false;
  std::optional<double> monotonicity_floor;
};

// K = scale * I, represented exactly instead of through quadrature.
struct IdentityKernel {
  double scale = 1.0;
  std::optional<double> monotonicity_floor;
};

using KernelSpec = std::variant<IntegralKernel, IdentityKernel>;

enum class ProbeTarget { nemytskii, integral, product };

struct ProbeReport {
  std::size_t samples = 0;
  double radius = 0.0;
  std::uint64_t seed = 0;
  double min_ratio = 0.0;      // min <op x - op y, x - y> / ||x - y||
  std::size_t violations = 0;  // inner products below -1e-12
  double max_image_norm = 0.0;
  // Floor claims are checked in inner-product form with absolute slack:
  //   <op x - op y, x - y> >= floor * ||x - y|| - 1e-9
  // (for the product map the right side uses ||du|| + ||dv|| and the floor is
  // min{r1, r2}). floor_violations counts sampled pairs breaking this.
  std::optional<double> slot_sum_ratio;  // product target: min <dA, dw>/(||du||+||dv||)
  std::optional<double> implied_floor;
  std::size_t floor_violations = 0;
  bool floor_respected = true;
};

/*
 * The discretized operator pair of a Hammerstein problem u + KFu = 0:
 *   F : E -> E*   (Fu)_i = f(x_i, u_i)                (pointwise)
 *   K : E* -> E   (Kv)_i = sum_j w_j k(x_i, x_j) v_j  (Nystrom matrix),
 * or K = c * I held exactly. The product-space map is
 *   A(u, v) = (Fu - v, Kv + u),
 * whose zeros (u*, v*) have v* = Fu* and u* = -Kv*, i.e. u* + KFu* = 0.
 */
class DiscretizedOperators {
 public:
  DiscretizedOperators(GridPtr grid, double p, ScalarNonlinearity nonlinearity,
                       KernelSpec kernel)
      : grid_(std::move(grid)),
        p_(p),
        q_(conjugate_exponent(p)),
        f_(std::move(nonlinearity)),
        kernel_(std::move(kernel)) {
    if (const auto* ik = std::get_if<IntegralKernel>(&kernel_)) {
      build_matrix(*ik);
      if (ik->symmetric) check_symmetry(*ik);
      if (ik->psd_claimed) check_psd();
    }
    check_floor_claims();
  }

  const QuadratureGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  const ScalarNonlinearity& nonlinearity() const noexcept { return f_; }
  bool has_identity_kernel() const noexcept {
    return std::holds_alternative<IdentityKernel>(kernel_);
  }
  double identity_scale() const { return std::get<IdentityKernel>(kernel_).scale; }
  const Eigen::MatrixXd& kernel_matrix() const { return matrix_; }
  std::optional<double> kernel_floor() const {
    if (const auto* ik = std::get_if<IntegralKernel>(&kernel_)) return ik->monotonicity_floor;
    return std::get<IdentityKernel>(kernel_).monotonicity_floor;
  }

  // (Fu)_i = f(x_i, u_i)
  GridFunction apply_nemytskii(const GridFunction& u) const {
    require_primal(u);
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      out[i] = f_.f(grid_->node(i), u[i]);
      if (!std::isfinite(out[i]))
        throw EvaluationError("nonlinearity produced a non-finite value", i);
    }
    return GridFunction::dual(grid_, q_, std::move(out));
  }

  // (Kv)_i = sum_j w_j k(x_i, x_j) v_j, or c * v for the identity kernel.
  GridFunction apply_integral(const GridFunction& v) const {
    require_dual(v);
    if (has_identity_kernel()) {
      std::vector<double> out(v.size());
      const double c = identity_scale();
      for (std::size_t i = 0; i < v.size(); ++i) out[i] = c * v[i];
      return GridFunction::primal(grid_, p_, std::move(out));
    }
    Eigen::Map<const Eigen::VectorXd> vv(v.values().data(),
                                         static_cast<Eigen::Index>(v.size()));
    Eigen::VectorXd y = matrix_ * vv;
    return GridFunction::primal(grid_, p_, std::vector<double>(y.data(), y.data() + y.size()));
  }

  // u + K(F(u)); vanishes exactly at solutions.
  GridFunction hammerstein_residual(const GridFunction& u) const {
    return u + apply_integral(apply_nemytskii(u));
  }

  // A(u, v) = (Fu - v, Kv + u)
  ProductDual product_operator_apply(const ProductPoint& w) const {
    return ProductDual(apply_nemytskii(w.u) - w.v, apply_integral(w.v) + w.u);
  }

 private:
  friend ProbeReport monotonicity_probe(const DiscretizedOperators&, ProbeTarget, std::size_t,
                                        double, std::uint64_t);

  void require_primal(const GridFunction& u) const {
    if (u.grid_ptr() != grid_) throw DimensionError("function lives on a different grid");
    if (u.side() != Side::primal || std::abs(u.exponent() - p_) > 1e-12)
      throw DimensionError("operator expects a primal function with the problem exponent");
  }

  void require_dual(const GridFunction& v) const {
    if (v.grid_ptr() != grid_) throw DimensionError("function lives on a different grid");
    if (v.side() != Side::dual || std::abs(v.exponent() - q_) > 1e-12)
      throw DimensionError("operator expects a dual function with the conjugate exponent");
  }

  void build_matrix(const IntegralKernel& ik) {
    const auto n = static_cast<Eigen::Index>(grid_->size());
    matrix_.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        matrix_(i, j) = grid_->weight(static_cast<std::size_t>(j)) *
                        ik.k(grid_->node(static_cast<std::size_t>(i)),
                             grid_->node(static_cast<std::size_t>(j)));
    if (!matrix_.allFinite()) throw InvalidConfigError("kernel produced non-finite entries");
  }

  void check_symmetry(const IntegralKernel& ik) const {
    for (std::size_t i = 0; i < grid_->size(); ++i)
      for (std::size_t j = i + 1; j < grid_->size(); ++j) {
        const double kij = ik.k(grid_->node(i), grid_->node(j));
        const double kji = ik.k(grid_->node(j), grid_->node(i));
        if (std::abs(kij - kji) > 1e-12 * std::max(1.0, std::abs(kij)))
          throw InvalidConfigError("kernel flagged symmetric but k(x,y) != k(y,x)");
      }
  }

  // Monotonicity of the Nystrom operator under the weighted pairing reduces
  // to positive semidefiniteness of  W^1/2 [k(x_i,x_j)] W^1/2.
  void check_psd() const {
    const auto n = static_cast<Eigen::Index>(grid_->size());
    Eigen::MatrixXd s(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double si = std::sqrt(grid_->weight(static_cast<std::size_t>(i)));
      for (Eigen::Index j = 0; j < n; ++j) {
        const double sj = std::sqrt(grid_->weight(static_cast<std::size_t>(j)));
        s(i, j) = si * (matrix_(i, j) / grid_->weight(static_cast<std::size_t>(j))) * sj;
      }
    }
    Eigen::MatrixXd sym = 0.5 * (s + s.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw InvalidConfigError("kernel eigenvalue check failed to converge");
    if (es.eigenvalues().minCoeff() < -1e-9)
      throw InvalidConfigError("kernel flagged positive semidefinite but has eigenvalue < -1e-9");
  }

  void check_floor_claims() const;

  GridPtr grid_;
  double p_, q_;
  ScalarNonlinearity f_;
  KernelSpec kernel_;
  Eigen::MatrixXd matrix_;  // empty for the identity kernel
};

/*
 * Empirical monotonicity probe: draws seeded random pairs in a ball and
 * reports the worst pairing ratio <op x - op y, x - y> / ||x - y||. A pairing
 * below -1e-12 counts as a violation (the slack absorbs roundoff on exactly
 * monotone operators). For the product map the report also carries the ratio
 * against ||du|| + ||dv||, the quantity a floor min{r1, r2} bounds.
 */
inline ProbeReport monotonicity_probe(const DiscretizedOperators& ops, ProbeTarget target,
                                      std::size_t samples, double radius, std::uint64_t seed) {
  if (samples < 1) throw InvalidConfigError("probe needs at least one sample");
  if (!(radius > 0.0)) throw InvalidConfigError("probe radius must be positive");

  std::optional<double> floor;
  if (target == ProbeTarget::nemytskii) {
    floor = ops.nonlinearity().monotonicity_floor;
  } else if (target == ProbeTarget::integral) {
    floor = ops.kernel_floor();
  } else {
    const auto r1 = ops.nonlinearity().monotonicity_floor;
    const auto r2 = ops.kernel_floor();
    if (r1 && r2) floor = std::min(*r1, *r2);
  }

  struct Partial {
    double min_ratio = std::numeric_limits<double>::infinity();
    double slot_sum_ratio = std::numeric_limits<double>::infinity();
    double max_image = 0.0;
    std::size_t violations = 0;
    std::size_t floor_violations = 0;
    std::exception_ptr error;
  };

  const std::size_t n_chunks = std::min<std::size_t>(64, samples);
  std::vector<Partial> parts(n_chunks);
  const std::size_t per = (samples + n_chunks - 1) / n_chunks;

  detail::parallel_chunks(n_chunks, [&](std::size_t c) {
    Partial& part = parts[c];
    try {
      auto g = rng::engine(seed, c);
      const std::size_t begin = c * per;
      const std::size_t end = std::min(samples, begin + per);
      for (std::size_t s = begin; s < end; ++s) {
        if (target == ProbeTarget::product) {
          const ProductPoint x = rng::product_in_ball(ops.grid_ptr(), ops.p(), radius, g);
          const ProductPoint y = rng::product_in_ball(ops.grid_ptr(), ops.p(), radius, g);
          const ProductDual ax = ops.product_operator_apply(x);
          const ProductDual ay = ops.product_operator_apply(y);
          const ProductDual da = dual_combine(1.0, ax, -1.0, ay);
          const ProductPoint dw = product_sub(x, y);
          const double nd = product_norm(dw);
          if (nd == 0.0) continue;
          const double ip = product_pairing(da, dw);
          part.min_ratio = std::min(part.min_ratio, ip / nd);
          const double slot_sum = lp_norm(dw.u) + lp_norm(dw.v);
          if (slot_sum > 0.0)
            part.slot_sum_ratio = std::min(part.slot_sum_ratio, ip / slot_sum);
          if (ip < -1e-12) ++part.violations;
          if (floor && ip < *floor * slot_sum - 1e-9) ++part.floor_violations;
          part.max_image = std::max(part.max_image, product_dual_norm(ax));
        } else if (target == ProbeTarget::nemytskii) {
          const GridFunction x = rng::in_ball(ops.grid_ptr(), Side::primal, ops.p(), radius, g);
          const GridFunction y = rng::in_ball(ops.grid_ptr(), Side::primal, ops.p(), radius, g);
          const GridFunction dx = x - y;
          const double nd = lp_norm(dx);
          if (nd == 0.0) continue;
          const GridFunction fx = ops.apply_nemytskii(x);
          const double ip = pairing(fx - ops.apply_nemytskii(y), dx);
          part.min_ratio = std::min(part.min_ratio, ip / nd);
          if (ip < -1e-12) ++part.violations;
          if (floor && ip < *floor * nd - 1e-9) ++part.floor_violations;
          part.max_image = std::max(part.max_image, lp_norm(fx));
        } else {
          const GridFunction x = rng::in_ball(ops.grid_ptr(), Side::dual, ops.q(), radius, g);
          const GridFunction y = rng::in_ball(ops.grid_ptr(), Side::dual, ops.q(), radius, g);
          const GridFunction dx = x - y;
          const double nd = lp_norm(dx);
          if (nd == 0.0) continue;
          const GridFunction kx = ops.apply_integral(x);
          const double ip = pairing(dx, kx - ops.apply_integral(y));
          part.min_ratio = std::min(part.min_ratio, ip / nd);
          if (ip < -1e-12) ++part.violations;
          if (floor && ip < *floor * nd - 1e-9) ++part.floor_violations;
          part.max_image = std::max(part.max_image, lp_norm(kx));
        }
      }
    } catch (...) {
      part.error = std::current_exception();
    }
  });

  ProbeReport report;
  report.samples = samples;
  report.radius = radius;
  report.seed = seed;
  report.min_ratio = std::numeric_limits<double>::infinity();
  double slot_sum_ratio = std::numeric_limits<double>::infinity();
  for (const Partial& part : parts) {
    if (part.error) std::rethrow_exception(part.error);
    report.min_ratio = std::min(report.min_ratio, part.min_ratio);
    slot_sum_ratio = std::min(slot_sum_ratio, part.slot_sum_ratio);
    report.max_image_norm = std::max(report.max_image_norm, part.max_image);
    report.violations += part.violations;
    report.floor_violations += part.floor_violations;
  }
  if (target == ProbeTarget::product) report.slot_sum_ratio = slot_sum_ratio;
  if (floor) {
    report.implied_floor = floor;
    report.floor_respected = report.floor_violations == 0;
  }
  return report;
}

inline void DiscretizedOperators::check_floor_claims() const {
  constexpr std::uint64_t kSeed = 0x5eedULL;
  if (f_.monotonicity_floor) {
    const ProbeReport r = monotonicity_probe(*this, ProbeTarget::nemytskii, 256, 1.0, kSeed);
    if (r.floor_violations > 0)
      throw InvalidConfigError("nonlinearity monotonicity floor refuted by probe");
  }
  if (kernel_floor()) {
    const ProbeReport r = monotonicity_probe(*this, ProbeTarget::integral, 256, 1.0, kSeed);
    if (r.floor_violations > 0)
      throw InvalidConfigError("kernel monotonicity floor refuted by probe");
  }
}

}  // namespace hammerkit
