#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hammerkit/lyapunov.hpp"
#include "hammerkit/random.hpp"

using namespace hammerkit;

namespace {

GridPtr unit_weight_pair() { return make_custom_grid(0.0, 2.0, {0.5, 1.5}, {1.0, 1.0}); }

// Straight-line recomputation of the three-term formula, independent of the
// library's norm/pairing/duality plumbing.
double phi_reference(const GridFunction& x, const GridFunction& y, double p) {
  const double q = p / (p - 1.0);
  double nx = 0.0, ny = 0.0, ip = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = x.grid().weight(i);
    nx += w * std::pow(std::abs(x[i]), p);
    ny += w * std::pow(std::abs(y[i]), p);
    const double jy = std::pow(std::abs(y[i]), p - 1.0) * (y[i] > 0 ? 1.0 : (y[i] < 0 ? -1.0 : 0.0));
    ip += w * x[i] * jy;
  }
  nx = std::pow(nx, 1.0 / p);
  ny = std::pow(ny, 1.0 / p);
  return (p / q) * std::pow(nx, q) - p * ip + std::pow(ny, p);
}

}  // namespace

TEST_CASE("lyapunov config rejects p outside (1, 2]") {
  REQUIRE_THROWS_AS(LyapunovConfig::from_p(3.0), InvalidConfigError);
  REQUIRE_THROWS_AS(LyapunovConfig::from_p(1.0), InvalidConfigError);
  REQUIRE_NOTHROW(LyapunovConfig::from_p(2.0));
  REQUIRE_NOTHROW(LyapunovConfig::from_p(1.5));
}

TEST_CASE("phi at p = 2 is the squared distance") {
  auto grid = unit_weight_pair();
  const auto ly = LyapunovConfig::from_p(2.0);
  auto x = GridFunction::primal(grid, 2.0, {1.0, 0.0});
  auto y = GridFunction::primal(grid, 2.0, {0.0, 1.0});
  REQUIRE_THAT(phi_p(x, y, ly), Catch::Matchers::WithinRel(2.0, 1e-12));
}

TEST_CASE("phi vanishes on the diagonal at unit norm") {
  auto grid = make_trapezoid_grid(33);
  for (double p : {1.5, 2.0}) {
    const auto ly = LyapunovConfig::from_p(p);
    auto x = GridFunction::constant(grid, Side::primal, p, 1.0);  // ||x|| = 1
    REQUIRE_THAT(phi_p(x, x, ly), Catch::Matchers::WithinAbs(0.0, 1e-12));
  }
}

TEST_CASE("phi at p = 1.5 matches an independent recomputation") {
  auto grid = unit_weight_pair();
  const auto ly = LyapunovConfig::from_p(1.5);
  auto x = GridFunction::primal(grid, 1.5, {1.0, 0.0});
  auto y = GridFunction::primal(grid, 1.5, {0.0, 1.0});
  REQUIRE_THAT(phi_p(x, y, ly),
               Catch::Matchers::WithinRel(phi_reference(x, y, 1.5), 1e-12));

  auto g = rng::engine(7);
  for (int rep = 0; rep < 100; ++rep) {
    auto a = rng::components(grid, Side::primal, 1.5, 2.0, g);
    auto b = rng::components(grid, Side::primal, 1.5, 2.0, g);
    REQUIRE_THAT(phi_p(a, b, ly),
                 Catch::Matchers::WithinAbs(phi_reference(a, b, 1.5), 1e-10));
  }
}

TEST_CASE("v_p examples and the inverse-map identity") {
  auto grid = make_trapezoid_grid(33);
  for (double p : {1.5, 2.0}) {
    const auto ly = LyapunovConfig::from_p(p);
    const double q = ly.q;

    auto x = GridFunction::constant(grid, Side::primal, p, 1.0);
    REQUIRE_THAT(v_p(x, duality_map_p(x), ly), Catch::Matchers::WithinAbs(0.0, 1e-12));

    auto g = rng::engine(11, static_cast<std::uint64_t>(10 * p));
    for (int rep = 0; rep < 300; ++rep) {
      auto a = rng::components(grid, Side::primal, p, 2.0, g);
      auto astar = rng::components(grid, Side::dual, q, 2.0, g);
      const double lhs = v_p(a, astar, ly);
      const double rhs = phi_p(a, duality_map_q(astar), ly);
      REQUIRE_THAT(lhs, Catch::Matchers::WithinAbs(rhs, 1e-10 * std::max(1.0, std::abs(lhs))));
    }
  }
  // x = 0 kills the first two terms (p = 2 case, where the power is classical)
  const auto ly2 = LyapunovConfig::from_p(2.0);
  auto zero = GridFunction::zeros(grid, Side::primal, 2.0);
  auto vstar = GridFunction::constant(grid, Side::dual, 2.0, 0.7);
  REQUIRE_THAT(v_p(zero, vstar, ly2),
               Catch::Matchers::WithinRel(std::pow(lp_norm(vstar), 2.0), 1e-12));
}

TEST_CASE("norm bounds hold on random pairs") {
  auto grid = make_trapezoid_grid(33);
  for (double p : {1.5, 2.0}) {
    const auto ly = LyapunovConfig::from_p(p);
    auto g = rng::engine(13, static_cast<std::uint64_t>(10 * p));
    for (int rep = 0; rep < 1000; ++rep) {
      auto x = rng::components(grid, Side::primal, p, 1.0, g);
      auto y = rng::components(grid, Side::primal, p, 1.0, g);
      REQUIRE(check_phi_bounds(x, y, ly, 1e-9));
    }
  }
}

TEST_CASE("three-point inequality") {
  auto grid = make_trapezoid_grid(33);
  for (double p : {1.5, 2.0}) {
    const auto ly = LyapunovConfig::from_p(p);
    auto g = rng::engine(17, static_cast<std::uint64_t>(10 * p));
    auto x = rng::components(grid, Side::primal, p, 1.0, g);
    auto y = rng::components(grid, Side::primal, p, 1.0, g);
    REQUIRE(check_three_point(x, y, x, ly));  // x = z: both sides vanish
    for (int rep = 0; rep < 500; ++rep) {
      auto a = rng::components(grid, Side::primal, p, 1.0, g);
      auto b = rng::components(grid, Side::primal, p, 1.0, g);
      auto c = rng::components(grid, Side::primal, p, 1.0, g);
      REQUIRE(check_three_point(a, b, c, ly));
    }
  }
}

TEST_CASE("dual perturbation inequality") {
  auto grid = make_trapezoid_grid(33);
  for (double p : {1.5, 2.0}) {
    const auto ly = LyapunovConfig::from_p(p);
    auto g = rng::engine(19, static_cast<std::uint64_t>(10 * p));
    auto x = rng::components(grid, Side::primal, p, 1.0, g);
    auto xstar = rng::components(grid, Side::dual, ly.q, 1.0, g);
    auto zero = GridFunction::zeros(grid, Side::dual, ly.q);
    REQUIRE(check_vp_perturbation(x, xstar, zero, ly));  // y* = 0: equality
    for (int rep = 0; rep < 500; ++rep) {
      auto a = rng::components(grid, Side::primal, p, 1.0, g);
      auto astar = rng::components(grid, Side::dual, ly.q, 1.0, g);
      auto ystar = rng::components(grid, Side::dual, ly.q, 1.0, g);
      REQUIRE(check_vp_perturbation(a, astar, ystar, ly));
    }
  }
}

TEST_CASE("ball lower bound") {
  auto grid = make_trapezoid_grid(33);
  for (double p : {1.5, 2.0}) {
    const auto ly = LyapunovConfig::from_p(p);
    auto x1 = GridFunction::constant(grid, Side::primal, p, 1.0);
    REQUIRE(check_norm_lower_bound(x1, x1, 1.0, ly));
    auto g = rng::engine(23, static_cast<std::uint64_t>(10 * p));
    for (int rep = 0; rep < 500; ++rep) {
      auto a = rng::in_ball(grid, Side::primal, p, 1.0, g);
      auto b = rng::in_ball(grid, Side::primal, p, 1.0, g);
      REQUIRE(check_norm_lower_bound(a, b, 1.0, ly));
    }
    auto big = GridFunction::constant(grid, Side::primal, p, 3.0);
    REQUIRE_THROWS_AS(check_norm_lower_bound(big, x1, 1.0, ly), BallMembershipError);
  }
}

TEST_CASE("wedge functional") {
  auto grid = make_trapezoid_grid(33);
  const auto ly2 = LyapunovConfig::from_p(2.0);

  auto u = GridFunction::constant(grid, Side::primal, 2.0, 1.0);
  auto v = GridFunction::constant(grid, Side::dual, 2.0, 1.0);
  ProductPoint w(u, v);
  REQUIRE_THAT(wedge_p(w, w, ly2), Catch::Matchers::WithinAbs(0.0, 1e-12));

  auto g = rng::engine(29);
  auto u1 = rng::components(grid, Side::primal, 2.0, 1.0, g);
  auto v1 = rng::components(grid, Side::dual, 2.0, 1.0, g);
  auto u2 = rng::components(grid, Side::primal, 2.0, 1.0, g);
  auto v2 = rng::components(grid, Side::dual, 2.0, 1.0, g);
  const double expected = std::pow(lp_norm(u1 - u2), 2.0) + std::pow(lp_norm(v1 - v2), 2.0);
  REQUIRE_THAT(wedge_p(ProductPoint(u1, v1), ProductPoint(u2, v2), ly2),
               Catch::Matchers::WithinAbs(expected, 1e-10));

  // p = 1.5: the product functional is the sum of its two component pieces
  const auto ly15 = LyapunovConfig::from_p(1.5);
  auto a1 = rng::components(grid, Side::primal, 1.5, 0.5, g);
  auto b1 = rng::components(grid, Side::dual, 3.0, 0.5, g);
  auto a2 = rng::components(grid, Side::primal, 1.5, 0.5, g);
  auto b2 = rng::components(grid, Side::dual, 3.0, 0.5, g);
  const double sum = phi_p(a1, a2, ly15) + phi_dual(b1, b2, ly15);
  REQUIRE_THAT(wedge_p(ProductPoint(a1, b1), ProductPoint(a2, b2), ly15),
               Catch::Matchers::WithinAbs(sum, 1e-12));
}
