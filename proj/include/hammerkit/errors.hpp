#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hammerkit {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Norm/pairing exponent outside (1, inf).
class InvalidExponentError final : public Error {
 public:
  using Error::Error;
};

// Mismatched grids, lengths, or sides.
class DimensionError final : public Error {
 public:
  using Error::Error;
};

// Violated configuration invariant (exponent range, schedule shape, ...).
class InvalidConfigError final : public Error {
 public:
  using Error::Error;
};

// Argument outside the required ball B_d(0).
class BallMembershipError final : public Error {
 public:
  using Error::Error;
};

// Non-finite value while evaluating a pointwise operator; carries the node.
class EvaluationError final : public Error {
 public:
  EvaluationError(const std::string& what, std::size_t node)
      : Error(what + " (node " + std::to_string(node) + ")"), node_(node) {}
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

// Bracket expansion exhausted in a scalar monotone solve.
class NoRootError final : public Error {
 public:
  using Error::Error;
};

// Inner iteration of a resolvent solve failed to converge.
class ResolventFailureError final : public Error {
 public:
  using Error::Error;
};

// Extension step requested with t <= t0/2, where the map is not contractive.
class ContractionFactorError final : public Error {
 public:
  using Error::Error;
};

// Non-finite iterate in the main scheme; carries the step index.
class DivergenceError final : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t n)
      : Error(what + " (iteration " + std::to_string(n) + ")"), n_(n) {}
  std::size_t iteration() const noexcept { return n_; }

 private:
  std::size_t n_;
};

// p2-only scheme invoked with p != 2.
class VariantMisuseError final : public Error {
 public:
  using Error::Error;
};

// Reference Newton solve did not reach its tolerance.
class OracleFailureError final : public Error {
 public:
  using Error::Error;
};

// Operators failed the monotonicity probe required before a solver run.
class ProbeRejectionError final : public Error {
 public:
  using Error::Error;
};

// Malformed or out-of-schema configuration input.
class ConfigError final : public Error {
 public:
  using Error::Error;
};

}  // namespace hammerkit
