#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "hammerkit/errors.hpp"
#include "hammerkit/lyapunov.hpp"
#include "hammerkit/operators.hpp"
#include "hammerkit/resolvent.hpp"
#include "hammerkit/schedules.hpp"

namespace hammerkit {

enum class Variant { general_p, chidume_idu_p2 };

struct SolverConfig {
  double p = 2.0;
  PowerSchedule schedule{0.6, 0.3};
  std::size_t max_iter = 100000;
  double residual_tol = 1e-3;
  Variant variant = Variant::general_p;
  std::size_t record_every = 100;
  // Guard probe run before iterating; rejected operators abort the run.
  std::size_t probe_samples = 128;
  double probe_radius = 1.0;
  std::uint64_t seed = 0;
  // Compute the distance-to-path diagnostic at record points (p <= 2 only).
  bool track_path = false;

  void validate() const {
    if (!(p > 1.0)) throw InvalidConfigError("solver exponent must exceed 1");
    if (variant == Variant::chidume_idu_p2 && p != 2.0)
      throw VariantMisuseError("the p2 scheme needs p = 2");
    if (!(residual_tol > 0.0)) throw InvalidConfigError("residual tolerance must be positive");
    if (record_every < 1) throw InvalidConfigError("record_every must be at least 1");
    if (max_iter < 1) throw InvalidConfigError("max_iter must be at least 1");
  }
};

// (n, u_n, v_n) together with the immutable anchors (u_1, v_1).
struct IterationState {
  std::size_t n;
  GridFunction u;
  GridFunction v;
  GridFunction u1;
  GridFunction v1;
};

struct TraceRecord {
  std::size_t n = 0;
  double residual_norm = 0.0;
  std::optional<double> err_u;
  std::optional<double> phi_u;
  std::optional<double> wedge_to_path;
  double lambda_n = 0.0;
  double theta_n = 0.0;
};

enum class Termination { converged, max_iter_reached, diverged };

struct RunResult {
  IterationState state;
  std::vector<TraceRecord> trace;
  Termination termination = Termination::max_iter_reached;
  std::size_t iterations = 0;
  double final_residual = 0.0;
  std::optional<double> final_err_u;
};

// By default the dual anchor sits on the solution manifold v = Fu.
inline IterationState make_initial_state(const DiscretizedOperators& ops, const GridFunction& u1,
                                         const std::optional<GridFunction>& v1 = std::nullopt) {
  GridFunction v = v1 ? *v1 : ops.apply_nemytskii(u1);
  return IterationState{1, u1, v, u1, v};
}

/*
 * One step of the coupled scheme:
 *   u_{n+1} = J_q( J_p u_n - lambda_n (F u_n - v_n + theta_n (J_p u_n - J_p u_1)) )
 *   v_{n+1} = J_p( J_q v_n - lambda_n (K v_n + u_n + theta_n (J_q v_n - J_q v_1)) )
 */
inline IterationState step(const IterationState& state, const SolverConfig& cfg,
                           const DiscretizedOperators& ops) {
  const double lam = cfg.schedule.lambda_at(state.n);
  const double th = cfg.schedule.theta_at(state.n);

  const GridFunction jp_u = duality_map_p(state.u);
  const GridFunction jp_u1 = duality_map_p(state.u1);
  const GridFunction grad_u =
      ops.apply_nemytskii(state.u) - state.v + th * (jp_u - jp_u1);
  GridFunction u_next = duality_map_q(jp_u - lam * grad_u);

  const GridFunction jq_v = duality_map_q(state.v);
  const GridFunction jq_v1 = duality_map_q(state.v1);
  const GridFunction grad_v =
      ops.apply_integral(state.v) + state.u + th * (jq_v - jq_v1);
  GridFunction v_next = duality_map_p(jq_v - lam * grad_v);

  if (!u_next.all_finite() || !v_next.all_finite())
    throw DivergenceError("non-finite iterate", state.n);
  return IterationState{state.n + 1, std::move(u_next), std::move(v_next), state.u1, state.v1};
}

/*
 * The p = 2 scheme with normalized duality mappings and the anchor damping
 * split out of the inner bracket:
 *   u_{n+1} = J^{-1}( J u_n - lambda_n (F u_n - v_n) - lambda_n theta_n (J u_n - J u_1) )
 *   v_{n+1} = J( J^{-1} v_n - lambda_n (K v_n + u_n) - lambda_n theta_n (J^{-1} v_n - J^{-1} v_1) )
 * Algebraically identical to step() at p = 2 once lambda_n is distributed.
 */
inline IterationState step_chidume_idu(const IterationState& state, const SolverConfig& cfg,
                                       const DiscretizedOperators& ops) {
  if (cfg.p != 2.0 || ops.p() != 2.0)
    throw VariantMisuseError("the p2 scheme needs p = 2");
  const double lam = cfg.schedule.lambda_at(state.n);
  const double lamth = lam * cfg.schedule.theta_at(state.n);

  const GridFunction j_u = duality_map_p(state.u);
  const GridFunction j_u1 = duality_map_p(state.u1);
  GridFunction u_next = duality_map_q(
      j_u - lam * (ops.apply_nemytskii(state.u) - state.v) - lamth * (j_u - j_u1));

  const GridFunction ji_v = duality_map_q(state.v);
  const GridFunction ji_v1 = duality_map_q(state.v1);
  GridFunction v_next = duality_map_p(
      ji_v - lam * (ops.apply_integral(state.v) + state.u) - lamth * (ji_v - ji_v1));

  if (!u_next.all_finite() || !v_next.all_finite())
    throw DivergenceError("non-finite iterate", state.n);
  return IterationState{state.n + 1, std::move(u_next), std::move(v_next), state.u1, state.v1};
}

/*
 * Per-iteration diagnostics. phi_u is the Lyapunov gap phi_p(u*, u_n); when
 * the space exponent exceeds 2 the functional is evaluated on the dual side
 * (where the conjugate exponent satisfies its 1 < p <= 2 hypothesis) at the
 * dual images of the arguments.
 */
inline TraceRecord diagnostics(const IterationState& state, const DiscretizedOperators& ops,
                               const SolverConfig& cfg,
                               const GridFunction* oracle_u = nullptr,
                               const ProductPoint* path_point = nullptr) {
  TraceRecord rec;
  rec.n = state.n;
  rec.residual_norm = lp_norm(ops.hammerstein_residual(state.u));
  rec.lambda_n = cfg.schedule.lambda_at(state.n);
  rec.theta_n = cfg.schedule.theta_at(state.n);
  if (oracle_u) {
    rec.err_u = lp_norm(state.u - *oracle_u);
    if (cfg.p <= 2.0) {
      const auto ly = LyapunovConfig::from_p(cfg.p);
      rec.phi_u = phi_p(*oracle_u, state.u, ly);
    } else {
      const auto ly = LyapunovConfig::from_p(conjugate_exponent(cfg.p));
      rec.phi_u = phi_dual(duality_map_p(*oracle_u), duality_map_p(state.u), ly);
    }
  }
  if (path_point && cfg.p <= 2.0) {
    const auto ly = LyapunovConfig::from_p(cfg.p);
    rec.wedge_to_path = wedge_p(*path_point, ProductPoint(state.u, state.v), ly);
  }
  return rec;
}

/*
 * Full run: guard probe, then iterate until the Hammerstein residual
 * ||u_n + K F u_n||_p falls below the tolerance or the horizon is reached.
 * Divergence aborts with the partial trace. The trace is recorded every
 * record_every steps and always at termination.
 */
inline RunResult run(const DiscretizedOperators& ops, const SolverConfig& cfg,
                     const GridFunction& u1,
                     const std::optional<GridFunction>& v1 = std::nullopt,
                     const GridFunction* oracle_u = nullptr) {
  cfg.validate();
  const ScheduleReport sched = validate(cfg.schedule, std::max<std::size_t>(1000, cfg.max_iter));
  if (!sched.passed) throw InvalidConfigError("schedule failed validation");

  const ProbeReport pf =
      monotonicity_probe(ops, ProbeTarget::nemytskii, cfg.probe_samples, cfg.probe_radius,
                         cfg.seed);
  const ProbeReport pk = monotonicity_probe(ops, ProbeTarget::integral, cfg.probe_samples,
                                            cfg.probe_radius, cfg.seed);
  if (pf.violations > 0 || pk.violations > 0)
    throw ProbeRejectionError("operators failed the monotonicity probe");

  RunResult result{make_initial_state(ops, u1, v1), {}, Termination::max_iter_reached, 0, 0.0,
                   std::nullopt};
  IterationState& state = result.state;
  const ProductPoint w1(state.u1, state.v1);

  const auto record = [&](double residual) {
    std::optional<ProductPoint> path;
    if (cfg.track_path && cfg.p <= 2.0 && state.n >= 2) {
      const double theta_prev = cfg.schedule.theta_at(state.n - 1);
      path = regularization_path(ops, w1, theta_prev);
    }
    TraceRecord rec = diagnostics(state, ops, cfg, oracle_u, path ? &*path : nullptr);
    rec.residual_norm = residual;
    result.trace.push_back(std::move(rec));
  };

  for (;;) {
    const double residual = lp_norm(ops.hammerstein_residual(state.u));
    if (residual <= cfg.residual_tol) {
      record(residual);
      result.termination = Termination::converged;
      result.final_residual = residual;
      break;
    }
    if (state.n >= cfg.max_iter) {
      record(residual);
      result.termination = Termination::max_iter_reached;
      result.final_residual = residual;
      break;
    }
    if (state.n % cfg.record_every == 0) record(residual);
    try {
      state = (cfg.variant == Variant::chidume_idu_p2) ? step_chidume_idu(state, cfg, ops)
                                                       : step(state, cfg, ops);
    } catch (const DivergenceError&) {
      record(residual);
      result.termination = Termination::diverged;
      result.final_residual = residual;
      break;
    }
  }
  result.iterations = state.n;
  if (oracle_u) result.final_err_u = lp_norm(state.u - *oracle_u);
  return result;
}

}  // namespace hammerkit
