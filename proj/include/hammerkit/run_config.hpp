#pragma once

#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "hammerkit/errors.hpp"
#include "hammerkit/oracle.hpp"
#include "hammerkit/solver.hpp"

namespace hammerkit {

// Grid serialization: {"domain":[a,b],"nodes":[...],"weights":[...]}.
inline nlohmann::json grid_to_json(const QuadratureGrid& g) {
  return nlohmann::json{{"domain", {g.a(), g.b()}}, {"nodes", g.nodes()}, {"weights", g.weights()}};
}

inline GridPtr grid_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("domain") || !j.contains("nodes") || !j.contains("weights"))
    throw ConfigError("grid JSON needs domain, nodes and weights");
  const auto dom = j.at("domain").get<std::vector<double>>();
  if (dom.size() != 2) throw ConfigError("grid domain must be a pair [a,b]");
  return make_custom_grid(dom[0], dom[1], j.at("nodes").get<std::vector<double>>(),
                          j.at("weights").get<std::vector<double>>());
}

/*
 * Data-only problem description for configs. The nonlinearity is restricted
 * to a whitelisted expression family,
 *   f(x,s) = sum_k c_k s^k + ex(x) e^s + ax(x) arctan(s) + fx(x),
 * with ex, ax, fx polynomials in x; anything richer is code-level only.
 */
struct InlineProblem {
  std::vector<double> poly_s;
  std::vector<double> exp_x_poly;
  std::vector<double> atan_x_poly;
  std::vector<double> x_poly;
  std::string kernel = "identity";  // "identity" | "min"
  double kernel_scale = 1.0;
};

struct GridSpecCfg {
  std::string rule = "trapezoid";  // "trapezoid" | "gauss"
  std::size_t n = 33;
};

struct AnchorSpec {
  std::string type;  // u1: "zero" | "constant"; v1: "nemytskii" | "zero" | "constant"
  double value = 0.0;
};

struct OutputSpec {
  std::string trace_csv;
  std::string summary_json;
};

struct RunConfig {
  std::variant<std::string, InlineProblem> problem = std::string("linear-affine");
  double p = 2.0;
  bool p_explicit = false;  // gallery problems pin their own p unless overridden
  GridSpecCfg grid;
  double schedule_a = 0.6;
  double schedule_b = 0.3;
  std::size_t max_iter = 100000;
  double residual_tol = 1e-3;
  Variant variant = Variant::general_p;
  std::size_t record_every = 100;
  OutputSpec output;
  std::uint64_t seed = 0;
  AnchorSpec u1{"zero", 0.0};
  AnchorSpec v1{"nemytskii", 0.0};
  bool track_path = false;

  SolverConfig solver_config() const {
    SolverConfig cfg;
    cfg.p = p;
    cfg.schedule = PowerSchedule(schedule_a, schedule_b);
    cfg.max_iter = max_iter;
    cfg.residual_tol = residual_tol;
    cfg.variant = variant;
    cfg.record_every = record_every;
    cfg.seed = seed;
    cfg.track_path = track_path;
    return cfg;
  }
};

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text,
                                                       std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                       const std::string& where) {
  for (const auto& item : j.items())
    if (!allowed.count(item.key()))
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
}

inline double eval_poly(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
  return acc;
}

}  // namespace detail

inline RunConfig parse_run_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = detail::line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError("config is not valid JSON at line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  detail::check_keys(j,
                     {"problem", "p", "grid", "schedule", "max_iter", "residual_tol", "variant",
                      "record_every", "output", "seed", "u1", "v1", "track_path"},
                     "config");

  RunConfig cfg;
  try {
    if (j.contains("problem")) {
      const auto& jp = j.at("problem");
      if (jp.is_string()) {
        cfg.problem = jp.get<std::string>();
      } else if (jp.is_object()) {
        detail::check_keys(
            jp, {"poly_s", "exp_x_poly", "atan_x_poly", "x_poly", "kernel", "kernel_scale"},
            "problem");
        InlineProblem ip;
        if (jp.contains("poly_s")) ip.poly_s = jp.at("poly_s").get<std::vector<double>>();
        if (jp.contains("exp_x_poly"))
          ip.exp_x_poly = jp.at("exp_x_poly").get<std::vector<double>>();
        if (jp.contains("atan_x_poly"))
          ip.atan_x_poly = jp.at("atan_x_poly").get<std::vector<double>>();
        if (jp.contains("x_poly")) ip.x_poly = jp.at("x_poly").get<std::vector<double>>();
        if (jp.contains("kernel")) ip.kernel = jp.at("kernel").get<std::string>();
        if (jp.contains("kernel_scale")) ip.kernel_scale = jp.at("kernel_scale").get<double>();
        if (ip.kernel != "identity" && ip.kernel != "min")
          throw ConfigError("inline problem kernel must be 'identity' or 'min'");
        cfg.problem = std::move(ip);
      } else {
        throw ConfigError("'problem' must be a gallery name or an inline object");
      }
    }
    if (j.contains("p")) {
      cfg.p = j.at("p").get<double>();
      cfg.p_explicit = true;
    }
    if (j.contains("grid")) {
      detail::check_keys(j.at("grid"), {"rule", "n"}, "grid");
      if (j.at("grid").contains("rule")) cfg.grid.rule = j.at("grid").at("rule").get<std::string>();
      if (j.at("grid").contains("n")) cfg.grid.n = j.at("grid").at("n").get<std::size_t>();
      if (cfg.grid.rule != "trapezoid" && cfg.grid.rule != "gauss")
        throw ConfigError("grid rule must be 'trapezoid' or 'gauss'");
    }
    if (j.contains("schedule")) {
      detail::check_keys(j.at("schedule"), {"a", "b"}, "schedule");
      cfg.schedule_a = j.at("schedule").at("a").get<double>();
      cfg.schedule_b = j.at("schedule").at("b").get<double>();
    }
    if (j.contains("max_iter")) cfg.max_iter = j.at("max_iter").get<std::size_t>();
    if (j.contains("residual_tol")) cfg.residual_tol = j.at("residual_tol").get<double>();
    if (j.contains("variant")) {
      const auto v = j.at("variant").get<std::string>();
      if (v == "general_p")
        cfg.variant = Variant::general_p;
      else if (v == "chidume_idu_p2")
        cfg.variant = Variant::chidume_idu_p2;
      else
        throw ConfigError("variant must be 'general_p' or 'chidume_idu_p2'");
    }
    if (j.contains("record_every")) cfg.record_every = j.at("record_every").get<std::size_t>();
    if (j.contains("output")) {
      detail::check_keys(j.at("output"), {"trace_csv", "summary_json"}, "output");
      if (j.at("output").contains("trace_csv"))
        cfg.output.trace_csv = j.at("output").at("trace_csv").get<std::string>();
      if (j.at("output").contains("summary_json"))
        cfg.output.summary_json = j.at("output").at("summary_json").get<std::string>();
    }
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    const auto parse_anchor = [](const nlohmann::json& ja, const char* who,
                                 std::initializer_list<const char*> kinds) {
      detail::check_keys(ja, {"type", "value"}, who);
      AnchorSpec spec{ja.at("type").get<std::string>(), 0.0};
      if (ja.contains("value")) spec.value = ja.at("value").get<double>();
      bool ok = false;
      for (const char* k : kinds)
        if (spec.type == k) ok = true;
      if (!ok) throw ConfigError(std::string("bad anchor type for ") + who);
      return spec;
    };
    if (j.contains("u1")) cfg.u1 = parse_anchor(j.at("u1"), "u1", {"zero", "constant"});
    if (j.contains("v1"))
      cfg.v1 = parse_anchor(j.at("v1"), "v1", {"nemytskii", "zero", "constant"});
    if (j.contains("track_path")) cfg.track_path = j.at("track_path").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }

  if (!(cfg.p > 1.0)) throw ConfigError("config: p must exceed 1");
  if (!(cfg.schedule_b > 0.0 && cfg.schedule_b < cfg.schedule_a && cfg.schedule_a < 1.0))
    throw ConfigError("config: schedule needs 0 < b < a < 1");
  return cfg;
}

struct BuiltProblem {
  GridPtr grid;
  DiscretizedOperators ops;
  std::optional<GridFunction> oracle_u;
  std::string problem_name;
  IterationState initial_state;
};

inline BuiltProblem build_problem(const RunConfig& cfg) {
  GridPtr grid = cfg.grid.rule == "gauss" ? make_gauss_grid(cfg.grid.n)
                                          : make_trapezoid_grid(cfg.grid.n);

  std::optional<GalleryProblem> gal;
  ScalarNonlinearity nl;
  KernelSpec kernel = IdentityKernel{1.0, std::nullopt};
  std::string name;
  double p = cfg.p;

  if (std::holds_alternative<std::string>(cfg.problem)) {
    gal = find_problem(std::get<std::string>(cfg.problem));
    nl = gal->nonlinearity;
    kernel = gal->kernel;
    name = gal->name;
    if (!cfg.p_explicit) p = gal->p;
  } else {
    const auto& ip = std::get<InlineProblem>(cfg.problem);
    nl.name = "inline";
    nl.f = [ip](double x, double s) {
      double acc = detail::eval_poly(ip.poly_s, s) + detail::eval_poly(ip.x_poly, x);
      if (!ip.exp_x_poly.empty()) acc += detail::eval_poly(ip.exp_x_poly, x) * std::exp(s);
      if (!ip.atan_x_poly.empty()) acc += detail::eval_poly(ip.atan_x_poly, x) * std::atan(s);
      return acc;
    };
    nl.df_ds = [ip](double x, double s) {
      double acc = 0.0;
      for (std::size_t k = 1; k < ip.poly_s.size(); ++k)
        acc += static_cast<double>(k) * ip.poly_s[k] * std::pow(s, static_cast<double>(k - 1));
      if (!ip.exp_x_poly.empty()) acc += detail::eval_poly(ip.exp_x_poly, x) * std::exp(s);
      if (!ip.atan_x_poly.empty())
        acc += detail::eval_poly(ip.atan_x_poly, x) / (1.0 + s * s);
      return acc;
    };
    if (ip.kernel == "identity") {
      kernel = IdentityKernel{ip.kernel_scale, std::nullopt};
    } else {
      kernel = IntegralKernel{"min(x,y)", [](double x, double y) { return std::min(x, y); },
                              true, true, std::nullopt};
    }
    name = "inline";
  }

  DiscretizedOperators ops(grid, p, nl, kernel);

  std::optional<GridFunction> oracle;
  if (gal) {
    oracle = oracle_solution(*gal, ops);
  } else if (nl.df_ds) {
    try {
      oracle = newton_solve(ops);
    } catch (const Error&) {
      oracle.reset();  // inline problems without a reachable reference solution
    }
  }

  GridFunction u1 = cfg.u1.type == "constant"
                        ? GridFunction::constant(grid, Side::primal, p, cfg.u1.value)
                        : GridFunction::zeros(grid, Side::primal, p);
  std::optional<GridFunction> v1;
  if (cfg.v1.type == "zero")
    v1 = GridFunction::zeros(grid, Side::dual, conjugate_exponent(p));
  else if (cfg.v1.type == "constant")
    v1 = GridFunction::constant(grid, Side::dual, conjugate_exponent(p), cfg.v1.value);

  IterationState init = make_initial_state(ops, u1, v1);
  return BuiltProblem{grid, std::move(ops), std::move(oracle), std::move(name), std::move(init)};
}

}  // namespace hammerkit
