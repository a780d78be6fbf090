#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hammerkit/grid.hpp"
#include "hammerkit/grid_function.hpp"
#include "hammerkit/lp_space.hpp"
#include "hammerkit/run_config.hpp"

using namespace hammerkit;

TEST_CASE("trapezoid grid invariants") {
  const auto g = QuadratureGrid::trapezoid(33);
  REQUIRE(g.size() == 33);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    REQUIRE(g.weight(i) > 0.0);
    if (i > 0) REQUIRE(g.node(i) > g.node(i - 1));
    sum += g.weight(i);
  }
  REQUIRE_THAT(sum, Catch::Matchers::WithinRel(1.0, 1e-12));
  REQUIRE(g.node(0) == 0.0);
  REQUIRE(g.node(32) == 1.0);
}

TEST_CASE("gauss-legendre grid integrates polynomials exactly") {
  const auto g = QuadratureGrid::gauss_legendre(5, 0.0, 1.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) sum += g.weight(i);
  REQUIRE_THAT(sum, Catch::Matchers::WithinRel(1.0, 1e-12));
  // Degree up to 2n-1 = 9 is integrated exactly.
  for (int deg = 0; deg <= 9; ++deg) {
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      acc += g.weight(i) * std::pow(g.node(i), deg);
    REQUIRE_THAT(acc, Catch::Matchers::WithinAbs(1.0 / (deg + 1.0), 1e-13));
  }
}

TEST_CASE("invalid grids are rejected") {
  REQUIRE_THROWS_AS(QuadratureGrid::custom(0.0, 1.0, {0.0, 0.5}, {0.5, -0.5}),
                    InvalidConfigError);
  REQUIRE_THROWS_AS(QuadratureGrid::custom(0.0, 1.0, {0.5, 0.4}, {0.5, 0.5}),
                    InvalidConfigError);
  REQUIRE_THROWS_AS(QuadratureGrid::custom(0.0, 1.0, {0.0, 0.5}, {0.5, 0.6}),
                    InvalidConfigError);
  REQUIRE_THROWS_AS(QuadratureGrid::custom(0.0, 1.0, {0.0, 1.5}, {0.5, 0.5}),
                    InvalidConfigError);
  REQUIRE_THROWS_AS(QuadratureGrid::trapezoid(1), InvalidConfigError);
}

TEST_CASE("quadrature error of the L2 norm decays at second order") {
  const auto norm_err = [](std::size_t n) {
    auto grid = make_trapezoid_grid(n);
    auto f = GridFunction::sample(grid, Side::primal, 2.0, [](double x) { return x; });
    return std::abs(lp_norm(f, 2.0) - 1.0 / std::sqrt(3.0));
  };
  const double e33 = norm_err(33);
  const double e65 = norm_err(65);
  REQUIRE(e33 < 1e-3);
  const double ratio = e33 / e65;
  REQUIRE(ratio > 3.5);
  REQUIRE(ratio < 4.5);
}

TEST_CASE("grid JSON round trip") {
  const auto g = QuadratureGrid::gauss_legendre(7, -1.0, 2.0);
  const auto j = grid_to_json(g);
  REQUIRE(j.at("domain").size() == 2);
  const GridPtr back = grid_from_json(j);
  REQUIRE(back->size() == g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    REQUIRE(back->node(i) == g.node(i));
    REQUIRE(back->weight(i) == g.weight(i));
  }
  REQUIRE_THROWS_AS(grid_from_json(nlohmann::json{{"nodes", {0.0}}}), ConfigError);
}
