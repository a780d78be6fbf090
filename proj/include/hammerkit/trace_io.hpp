#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hammerkit/solver.hpp"

namespace hammerkit {

// 17 significant digits round-trip a 64-bit real exactly; the C locale keeps
// the '.' decimal point.
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

inline const char* termination_name(Termination t) {
  switch (t) {
    case Termination::converged:
      return "converged";
    case Termination::max_iter_reached:
      return "max_iter";
    case Termination::diverged:
      return "diverged";
  }
  return "unknown";
}

// Trace CSV: one row per record, empty fields for absent diagnostics.
inline void write_trace_csv(std::ostream& os, const std::vector<TraceRecord>& trace) {
  os << "n,residual,err_u,phi_u,wedge_to_path,lambda_n,theta_n\n";
  for (const TraceRecord& r : trace) {
    os << r.n << ',' << fmt17(r.residual_norm) << ',';
    if (r.err_u) os << fmt17(*r.err_u);
    os << ',';
    if (r.phi_u) os << fmt17(*r.phi_u);
    os << ',';
    if (r.wedge_to_path) os << fmt17(*r.wedge_to_path);
    os << ',' << fmt17(r.lambda_n) << ',' << fmt17(r.theta_n) << '\n';
  }
}

inline nlohmann::json summary_json(const RunResult& result) {
  nlohmann::json j;
  j["termination"] = termination_name(result.termination);
  j["iterations"] = result.iterations;
  j["final_residual"] = result.final_residual;
  j["final_err_u"] = result.final_err_u ? nlohmann::json(*result.final_err_u)
                                        : nlohmann::json(nullptr);
  return j;
}

}  // namespace hammerkit
