#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "hammerkit/errors.hpp"
#include "hammerkit/grid.hpp"

namespace hammerkit {

// Which leg of the duality a sampled function lives on: E (primal, exponent p)
// or E* (dual, exponent q = p/(p-1)).
enum class Side { primal, dual };

inline double conjugate_exponent(double p) {
  if (!(p > 1.0)) throw InvalidExponentError("exponent must exceed 1");
  return p / (p - 1.0);
}

inline bool exponents_conjugate(double p, double q) {
  return p > 1.0 && q > 1.0 && std::abs(1.0 / p + 1.0 / q - 1.0) <= 1e-12;
}

/*
 * A function sampled on a quadrature grid together with the side of the
 * duality it belongs to and the exponent of its space. Values are immutable
 * after construction; all operations hand back fresh objects.
 */
class GridFunction {
 public:
  static GridFunction primal(GridPtr grid, double p, std::vector<double> values) {
    return GridFunction(std::move(grid), Side::primal, p, std::move(values));
  }

  static GridFunction dual(GridPtr grid, double q, std::vector<double> values) {
    return GridFunction(std::move(grid), Side::dual, q, std::move(values));
  }

  static GridFunction zeros(GridPtr grid, Side side, double exponent) {
    std::vector<double> v(grid->size(), 0.0);
    return GridFunction(std::move(grid), side, exponent, std::move(v));
  }

  static GridFunction constant(GridPtr grid, Side side, double exponent, double c) {
    std::vector<double> v(grid->size(), c);
    return GridFunction(std::move(grid), side, exponent, std::move(v));
  }

  template <class F>
  static GridFunction sample(GridPtr grid, Side side, double exponent, F&& fn) {
    std::vector<double> v(grid->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid->node(i));
    return GridFunction(std::move(grid), side, exponent, std::move(v));
  }

  std::size_t size() const noexcept { return values_.size(); }
  Side side() const noexcept { return side_; }
  double exponent() const noexcept { return exponent_; }
  const QuadratureGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  GridFunction with_values(std::vector<double> values) const {
    return GridFunction(grid_, side_, exponent_, std::move(values));
  }

  bool all_finite() const noexcept {
    for (double v : values_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  friend GridFunction operator+(const GridFunction& a, const GridFunction& b) {
    require_compatible(a, b);
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values_[i] + b.values_[i];
    return a.with_values(std::move(v));
  }

  friend GridFunction operator-(const GridFunction& a, const GridFunction& b) {
    require_compatible(a, b);
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values_[i] - b.values_[i];
    return a.with_values(std::move(v));
  }

  friend GridFunction operator*(double s, const GridFunction& a) {
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = s * a.values_[i];
    return a.with_values(std::move(v));
  }

  static void require_compatible(const GridFunction& a, const GridFunction& b) {
    if (a.grid_ != b.grid_ || a.size() != b.size())
      throw DimensionError("grid functions live on different grids");
    if (a.side_ != b.side_ || std::abs(a.exponent_ - b.exponent_) > 1e-12)
      throw DimensionError("grid functions live on different sides or exponents");
  }

 private:
  GridFunction(GridPtr grid, Side side, double exponent, std::vector<double> values)
      : grid_(std::move(grid)), side_(side), exponent_(exponent), values_(std::move(values)) {
    if (!grid_) throw DimensionError("grid function needs a grid");
    if (values_.size() != grid_->size())
      throw DimensionError("grid function length does not match its grid");
    if (!(exponent_ > 1.0)) throw InvalidExponentError("space exponent must exceed 1");
  }

  GridPtr grid_;
  Side side_;
  double exponent_;
  std::vector<double> values_;
};

inline void require_same_grid(const GridFunction& a, const GridFunction& b) {
  if (a.grid_ptr() != b.grid_ptr() || a.size() != b.size())
    throw DimensionError("grid functions live on different grids");
}

// w = (u, v) in W = E x E*; components share a grid and conjugate exponents.
struct ProductPoint {
  GridFunction u;
  GridFunction v;

  ProductPoint(GridFunction u_, GridFunction v_) : u(std::move(u_)), v(std::move(v_)) {
    require_same_grid(u, v);
    if (u.side() != Side::primal || v.side() != Side::dual)
      throw DimensionError("product point needs a (primal, dual) pair");
    if (!exponents_conjugate(u.exponent(), v.exponent()))
      throw DimensionError("product point components must carry conjugate exponents");
  }
};

// Element of W* = E* x E; `du` pairs with the u-component, `dv` with v.
struct ProductDual {
  GridFunction du;
  GridFunction dv;

  ProductDual(GridFunction du_, GridFunction dv_) : du(std::move(du_)), dv(std::move(dv_)) {
    require_same_grid(du, dv);
    if (du.side() != Side::dual || dv.side() != Side::primal)
      throw DimensionError("product dual needs a (dual, primal) pair");
    if (!exponents_conjugate(dv.exponent(), du.exponent()))
      throw DimensionError("product dual components must carry conjugate exponents");
  }
};

}  // namespace hammerkit
