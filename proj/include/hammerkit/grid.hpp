#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <utility>
#include <vector>

#include "hammerkit/errors.hpp"

namespace hammerkit {

/*
 * Quadrature grid on an interval [a,b]: strictly increasing nodes x_i and
 * strictly positive weights w_i realizing  int_a^b f(x) dx ~ sum_i w_i f(x_i).
 * The grid is the discrete measure every norm, pairing and operator in this
 * library is taken against.
 */
class QuadratureGrid {
 public:
  // Composite trapezoid rule with n >= 2 nodes.
  static QuadratureGrid trapezoid(std::size_t n, double a = 0.0, double b = 1.0) {
    if (n < 2) throw InvalidConfigError("trapezoid rule needs at least 2 nodes");
    if (!(a < b)) throw InvalidConfigError("grid domain must satisfy a < b");
    const double h = (b - a) / static_cast<double>(n - 1);
    std::vector<double> nodes(n), weights(n, h);
    for (std::size_t i = 0; i < n; ++i) nodes[i] = a + h * static_cast<double>(i);
    nodes.back() = b;
    weights.front() = 0.5 * h;
    weights.back() = 0.5 * h;
    return QuadratureGrid(a, b, std::move(nodes), std::move(weights));
  }

  // Gauss-Legendre rule with n >= 1 interior nodes.
  static QuadratureGrid gauss_legendre(std::size_t n, double a = 0.0, double b = 1.0) {
    if (n < 1) throw InvalidConfigError("gauss rule needs at least 1 node");
    if (!(a < b)) throw InvalidConfigError("grid domain must satisfy a < b");
    std::vector<double> nodes(n), weights(n);
    // Roots of P_n on [-1,1] by Newton from the Chebyshev guess; symmetric pairs.
    const std::size_t m = (n + 1) / 2;
    for (std::size_t i = 0; i < m; ++i) {
      double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                          (static_cast<double>(n) + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        if (n == 1) p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
          const double pk = ((2.0 * static_cast<double>(k) - 1.0) * x * p1 -
                             (static_cast<double>(k) - 1.0) * p0) /
                            static_cast<double>(k);
          p0 = p1;
          p1 = pk;
        }
        const double pn = (n == 1) ? x : p1;
        const double pn1 = (n == 1) ? 1.0 : p0;
        dp = static_cast<double>(n) * (x * pn - pn1) / (x * x - 1.0);
        const double dx = pn / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      nodes[i] = -x;
      nodes[n - 1 - i] = x;
      weights[i] = w;
      weights[n - 1 - i] = w;
    }
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < n; ++i) {
      nodes[i] = mid + half * nodes[i];
      weights[i] *= half;
    }
    return QuadratureGrid(a, b, std::move(nodes), std::move(weights));
  }

  // Grid from explicit data (e.g. deserialized); invariants are validated.
  static QuadratureGrid custom(double a, double b, std::vector<double> nodes,
                               std::vector<double> weights) {
    return QuadratureGrid(a, b, std::move(nodes), std::move(weights));
  }

  std::size_t size() const noexcept { return nodes_.size(); }
  double node(std::size_t i) const { return nodes_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }

 private:
  QuadratureGrid(double a, double b, std::vector<double> nodes, std::vector<double> weights)
      : a_(a), b_(b), nodes_(std::move(nodes)), weights_(std::move(weights)) {
    if (nodes_.empty() || nodes_.size() != weights_.size())
      throw DimensionError("grid nodes/weights size mismatch");
    if (!(a_ < b_)) throw InvalidConfigError("grid domain must satisfy a < b");
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (!(weights_[i] > 0.0)) throw InvalidConfigError("grid weights must be positive");
      if (nodes_[i] < a_ || nodes_[i] > b_)
        throw InvalidConfigError("grid nodes must lie in [a,b]");
      if (i > 0 && !(nodes_[i] > nodes_[i - 1]))
        throw InvalidConfigError("grid nodes must be strictly increasing");
      sum += weights_[i];
    }
    if (std::abs(sum - (b_ - a_)) > 1e-12 * (b_ - a_))
      throw InvalidConfigError("grid weights must sum to b - a");
  }

  double a_, b_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const QuadratureGrid>;

inline GridPtr make_trapezoid_grid(std::size_t n, double a = 0.0, double b = 1.0) {
  return std::make_shared<const QuadratureGrid>(QuadratureGrid::trapezoid(n, a, b));
}

inline GridPtr make_gauss_grid(std::size_t n, double a = 0.0, double b = 1.0) {
  return std::make_shared<const QuadratureGrid>(QuadratureGrid::gauss_legendre(n, a, b));
}

inline GridPtr make_custom_grid(double a, double b, std::vector<double> nodes,
                                std::vector<double> weights) {
  return std::make_shared<const QuadratureGrid>(
      QuadratureGrid::custom(a, b, std::move(nodes), std::move(weights)));
}

}  // namespace hammerkit
