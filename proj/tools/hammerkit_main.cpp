// Command-line front end for the Hammerstein solver toolkit.
//
// Subcommands:
//   run <config.json>                 coupled iteration, trace CSV + summary JSON
//   validate-schedule --a --b ...     evidence checks for the iteration conditions
//   path <config.json> --theta ...    regularization path distances to the solution
//   probe <config.json>               empirical monotonicity report for F, K, A
//   gallery                           list built-in problems
//
// Exit codes: 0 success/converged, 1 configuration or validation failure,
// 2 iteration budget exhausted, 3 divergence, probe rejection or resolvent
// failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hammerkit/hammerkit.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw hammerkit::ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw hammerkit::ConfigError("cannot write '" + path + "'");
  out << content;
}

nlohmann::json probe_report_json(const hammerkit::ProbeReport& r) {
  nlohmann::json j;
  j["samples"] = r.samples;
  j["radius"] = r.radius;
  j["seed"] = r.seed;
  j["min_ratio"] = r.min_ratio;
  j["violations"] = r.violations;
  j["max_image_norm"] = r.max_image_norm;
  if (r.slot_sum_ratio) j["slot_sum_ratio"] = *r.slot_sum_ratio;
  if (r.implied_floor) {
    j["implied_floor"] = *r.implied_floor;
    j["floor_respected"] = r.floor_respected;
  }
  return j;
}

int cmd_run(const std::string& config_path) {
  using namespace hammerkit;
  const RunConfig cfg = parse_run_config(read_file(config_path));
  BuiltProblem built = build_problem(cfg);
  SolverConfig scfg = cfg.solver_config();
  scfg.p = built.ops.p();

  std::optional<RunResult> maybe;
  try {
    maybe = run(built.ops, scfg, built.initial_state.u1,
                std::optional<GridFunction>(built.initial_state.v1),
                built.oracle_u ? &*built.oracle_u : nullptr);
  } catch (const ProbeRejectionError& e) {
    std::cerr << "probe rejection: " << e.what() << "\n";
    return 3;
  }
  const RunResult& result = *maybe;

  if (!cfg.output.trace_csv.empty()) {
    std::ostringstream csv;
    write_trace_csv(csv, result.trace);
    write_file(cfg.output.trace_csv, csv.str());
  }
  if (!cfg.output.summary_json.empty())
    write_file(cfg.output.summary_json, summary_json(result).dump(2) + "\n");

  std::cout << summary_json(result).dump() << "\n";
  switch (result.termination) {
    case Termination::converged:
      return 0;
    case Termination::max_iter_reached:
      return 2;
    case Termination::diverged:
      return 3;
  }
  return 3;
}

int cmd_validate_schedule(double a, double b, std::size_t horizon) {
  using namespace hammerkit;
  ScheduleReport rep;
  try {
    rep = validate(PowerSchedule(a, b), horizon);
  } catch (const InvalidConfigError& e) {
    nlohmann::json j{{"passed", false}, {"error", e.what()}};
    std::cout << j.dump(2) << "\n";
    return 1;
  }
  nlohmann::json j;
  j["passed"] = rep.passed;
  j["theta_decreasing"] = rep.theta_decreasing;
  j["divergence_partial_sum"] = rep.divergence_partial_sum;
  j["partial_sum_half"] = rep.partial_sum_half;
  j["ratio_condition_value"] = rep.ratio_condition_value;
  j["ratio_value_early"] = rep.ratio_value_early;
  j["flags"] = rep.flags;
  std::cout << j.dump(2) << "\n";
  return rep.passed ? 0 : 1;
}

int cmd_path(const std::string& config_path, const std::vector<double>& thetas,
             const std::string& output) {
  using namespace hammerkit;
  if (thetas.empty()) {
    std::cerr << "path: empty theta list\n";
    return 1;
  }
  const RunConfig cfg = parse_run_config(read_file(config_path));
  BuiltProblem built = build_problem(cfg);
  if (!built.oracle_u) {
    std::cerr << "path: problem has no reference solution\n";
    return 1;
  }
  const GridFunction& ustar = *built.oracle_u;
  const GridFunction vstar = built.ops.apply_nemytskii(ustar);
  const ProductPoint wstar(ustar, vstar);
  const ProductPoint w1(built.initial_state.u1, built.initial_state.v1);

  std::ostringstream csv;
  csv << "theta,distance\n";
  for (double theta : thetas) {
    ProductPoint x = w1;
    try {
      x = regularization_path(built.ops, w1, theta);
    } catch (const Error& e) {
      std::cerr << "path: resolvent failure at theta=" << theta << ": " << e.what() << "\n";
      return 3;
    }
    csv << fmt17(theta) << ',' << fmt17(product_distance(x, wstar)) << '\n';
  }
  if (output.empty())
    std::cout << csv.str();
  else
    write_file(output, csv.str());
  return 0;
}

int cmd_probe(const std::string& config_path, std::size_t samples, double radius,
              std::uint64_t seed_override, bool seed_given) {
  using namespace hammerkit;
  const RunConfig cfg = parse_run_config(read_file(config_path));
  BuiltProblem built = build_problem(cfg);
  const std::uint64_t seed = seed_given ? seed_override : cfg.seed;
  nlohmann::json j;
  j["problem"] = built.problem_name;
  j["F"] = probe_report_json(
      monotonicity_probe(built.ops, ProbeTarget::nemytskii, samples, radius, seed));
  j["K"] = probe_report_json(
      monotonicity_probe(built.ops, ProbeTarget::integral, samples, radius, seed));
  j["A"] = probe_report_json(
      monotonicity_probe(built.ops, ProbeTarget::product, samples, radius, seed));
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_gallery(bool as_json) {
  using namespace hammerkit;
  const auto problems = gallery();
  if (as_json) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& g : problems) {
      nlohmann::json e;
      e["name"] = g.name;
      e["p"] = g.p;
      e["nonlinearity"] = g.nonlinearity.name;
      e["kernel"] = std::holds_alternative<IdentityKernel>(g.kernel)
                        ? "identity x " + fmt17(std::get<IdentityKernel>(g.kernel).scale)
                        : std::get<IntegralKernel>(g.kernel).name;
      e["closed_form_solution"] = static_cast<bool>(g.known_solution);
      e["notes"] = g.notes;
      j.push_back(e);
    }
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  for (const auto& g : problems) {
    std::cout << g.name << "  (p = " << g.p << ", f = " << g.nonlinearity.name << ", K = "
              << (std::holds_alternative<IdentityKernel>(g.kernel)
                      ? "identity"
                      : std::get<IntegralKernel>(g.kernel).name)
              << (g.known_solution ? ", closed-form solution" : ", reference Newton solution")
              << ")\n    " << g.notes << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solver toolkit for Hammerstein-type integral equations u + KFu = 0"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "run the coupled iteration from a JSON config");
  run_cmd->add_option("config", config_path, "path to the run config JSON")->required();

  double sa = 0.6, sb = 0.3;
  std::size_t horizon = 1000000;
  auto* val_cmd = app.add_subcommand("validate-schedule", "check the iteration conditions");
  val_cmd->add_option("--a", sa, "lambda exponent")->required();
  val_cmd->add_option("--b", sb, "theta exponent")->required();
  val_cmd->add_option("--horizon", horizon, "evidence horizon N (default 1e6)");

  std::string path_config, path_output;
  std::vector<double> thetas;
  auto* path_cmd = app.add_subcommand("path", "regularization path distances");
  path_cmd->add_option("config", path_config, "path to the run config JSON")->required();
  path_cmd->add_option("--theta", thetas, "path parameters in (0,1]");
  path_cmd->add_option("--output", path_output, "write CSV here instead of stdout");

  std::string probe_config;
  std::size_t samples = 10000;
  double radius = 1.0;
  std::uint64_t probe_seed = 0;
  auto* probe_cmd = app.add_subcommand("probe", "empirical monotonicity report");
  probe_cmd->add_option("config", probe_config, "path to the run config JSON")->required();
  probe_cmd->add_option("--samples", samples, "number of sampled pairs");
  probe_cmd->add_option("--radius", radius, "sampling ball radius");
  auto* seed_opt = probe_cmd->add_option("--seed", probe_seed, "override the config seed");

  bool gallery_json = false;
  auto* gal_cmd = app.add_subcommand("gallery", "list built-in problems");
  gal_cmd->add_flag("--json", gallery_json, "emit JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(config_path);
    if (val_cmd->parsed()) return cmd_validate_schedule(sa, sb, horizon);
    if (path_cmd->parsed()) return cmd_path(path_config, thetas, path_output);
    if (probe_cmd->parsed())
      return cmd_probe(probe_config, samples, radius, probe_seed, seed_opt->count() > 0);
    if (gal_cmd->parsed()) return cmd_gallery(gallery_json);
  } catch (const hammerkit::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const hammerkit::InvalidConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 1;
  } catch (const hammerkit::ProbeRejectionError& e) {
    std::cerr << "probe rejection: " << e.what() << "\n";
    return 3;
  } catch (const hammerkit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
