#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>

#include <Eigen/Dense>

#include "hammerkit/oracle.hpp"
#include "hammerkit/random.hpp"
#include "hammerkit/resolvent.hpp"

using namespace hammerkit;

namespace {

// Plain bisection, independent of the library's scalar solver.
double bisect_oracle(const std::function<double(double)>& g, double lo, double hi,
                     double tol = 1e-13) {
  double flo = g(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = g(mid);
    if (std::abs(fm) <= tol || hi - lo < 1e-15) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ScalarNonlinearity identity_nl() {
  return {"s", [](double, double s) { return s; }, [](double, double) { return 1.0; },
          std::nullopt};
}

}  // namespace

TEST_CASE("scalar monotone solve") {
  // p = 2, f(s) = s, t = 1, h = 2: z + z = 2
  REQUIRE_THAT(scalar_monotone_solve(2.0, 1.0, [](double s) { return s; }, 2.0),
               Catch::Matchers::WithinAbs(1.0, 1e-12));
  // f = 0: z = h (p = 2)
  REQUIRE_THAT(scalar_monotone_solve(2.0, 1.0, [](double) { return 0.0; }, -3.25),
               Catch::Matchers::WithinAbs(-3.25, 1e-12));
  // p = 3, f(s) = s^3, t = 1, h = 9: root of s^2 sgn(s) + s^3 = 9
  const double z = scalar_monotone_solve(3.0, 1.0, [](double s) { return s * s * s; }, 9.0);
  const double zo = bisect_oracle(
      [](double s) { return std::abs(s) * s + s * s * s - 9.0; }, 0.0, 3.0);
  REQUIRE_THAT(z, Catch::Matchers::WithinAbs(zo, 1e-10));
  REQUIRE_THAT(z, Catch::Matchers::WithinAbs(1.7945804943325356, 1e-10));

  // Newton acceleration agrees with pure bisection
  const double zn = scalar_monotone_solve(3.0, 1.0, [](double s) { return s * s * s; }, 9.0,
                                          [](double s) { return 3.0 * s * s; });
  REQUIRE_THAT(zn, Catch::Matchers::WithinAbs(zo, 1e-10));

  // a bounded nonlinearity cannot produce a root for large h at tiny gauge power
  REQUIRE_THROWS_AS(scalar_monotone_solve(2.0, 1.0, [](double) { return 0.0; },
                                          std::numeric_limits<double>::infinity()),
                    NoRootError);
}

TEST_CASE("nemytskii resolvent") {
  auto grid = make_trapezoid_grid(33);
  DiscretizedOperators ops(grid, 2.0, identity_nl(), IdentityKernel{1.0, std::nullopt});

  auto g = rng::engine(3);
  auto x = rng::components(grid, Side::primal, 2.0, 2.0, g);
  ResolventConfig tiny{1e-12, 1e-14, 200};
  REQUIRE(lp_norm(resolvent_nemytskii(ops, x, tiny) - x) <= 1e-8);

  ResolventConfig unit{1.0, 1e-12, 200};
  auto two = GridFunction::constant(grid, Side::primal, 2.0, 2.0);
  auto z = resolvent_nemytskii(ops, two, unit);
  for (std::size_t i = 0; i < z.size(); ++i)
    REQUIRE_THAT(z[i], Catch::Matchers::WithinAbs(1.0, 1e-12));

  DiscretizedOperators cubic(
      grid, 2.0,
      {"s^3+s", [](double, double s) { return s * s * s + s; },
       [](double, double s) { return 3.0 * s * s + 1.0; }, std::nullopt},
      IdentityKernel{1.0, std::nullopt});
  ResolventConfig half{0.5, 1e-12, 200};
  auto ones = GridFunction::constant(grid, Side::primal, 2.0, 1.0);
  auto zc = resolvent_nemytskii(cubic, ones, half);
  const double zref = bisect_oracle(
      [](double s) { return s + 0.5 * (s * s * s + s) - 1.0; }, 0.0, 1.0);
  for (std::size_t i = 0; i < zc.size(); ++i)
    REQUIRE_THAT(zc[i], Catch::Matchers::WithinAbs(zref, 1e-10));
}

TEST_CASE("integral resolvent") {
  auto grid = make_trapezoid_grid(33);

  // identity kernel at q = 2: w = y / (1 + t c)
  DiscretizedOperators idk(grid, 2.0, identity_nl(), IdentityKernel{2.0, std::nullopt});
  auto g = rng::engine(9);
  auto y = rng::components(grid, Side::dual, 2.0, 1.5, g);
  ResolventConfig cfg{1.0, 1e-12, 200};
  auto w = resolvent_integral(idk, y, cfg);
  REQUIRE(lp_norm(w - (1.0 / 3.0) * y) <= 1e-11);

  ResolventConfig tiny{1e-12, 1e-14, 200};
  REQUIRE(lp_norm(resolvent_integral(idk, y, tiny) - y) <= 1e-8);

  // dense kernel at q = 2: (I + t M) w = y, checked against a direct solve
  DiscretizedOperators green(
      grid, 2.0, identity_nl(),
      IntegralKernel{"min(x,y)", [](double x, double y_) { return std::min(x, y_); }, true, true,
                     std::nullopt});
  auto ones = GridFunction::constant(grid, Side::dual, 2.0, 1.0);
  auto wd = resolvent_integral(green, ones, cfg);
  const auto n = static_cast<Eigen::Index>(grid->size());
  Eigen::MatrixXd sys = Eigen::MatrixXd::Identity(n, n) + green.kernel_matrix();
  Eigen::VectorXd rhs = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd direct = sys.partialPivLu().solve(rhs);
  for (Eigen::Index i = 0; i < n; ++i)
    REQUIRE_THAT(wd[static_cast<std::size_t>(i)],
                 Catch::Matchers::WithinAbs(direct(i), 1e-10));

  // q = 1.5 exercises the clamped gauge derivative (p = 3 problem)
  DiscretizedOperators green3(
      grid, 3.0, identity_nl(),
      IntegralKernel{"min(x,y)", [](double x, double y_) { return std::min(x, y_); }, true, true,
                     std::nullopt});
  auto y3 = rng::components(grid, Side::dual, 1.5, 1.0, g);
  auto w3 = resolvent_integral(green3, y3, cfg);
  // verify the defining equation J_q w + t K w = J_q y directly
  auto lhs = duality_map_q(w3) + 1.0 * green3.apply_integral(w3);
  auto rhs3 = duality_map_q(y3);
  REQUIRE(lp_norm(lhs - rhs3) <= 1e-10);
}

TEST_CASE("product resolvent against a per-node block solve") {
  auto grid = make_trapezoid_grid(33);
  // F = identity, K = identity, p = 2: per node the system is
  //   (1+t) u - t v = h1,  t u + (1+t) v = h2.
  DiscretizedOperators ops(grid, 2.0, identity_nl(), IdentityKernel{1.0, std::nullopt});
  auto g = rng::engine(15);
  auto u0 = rng::components(grid, Side::primal, 2.0, 1.0, g);
  auto v0 = rng::components(grid, Side::dual, 2.0, 1.0, g);
  ProductPoint w(u0, v0);

  for (double t : {0.4, 1.0, 7.0}) {
    ResolventConfig cfg{t, 1e-12, 200};
    auto z = resolvent_product(ops, w, cfg);
    const double det = (1.0 + t) * (1.0 + t) + t * t;
    for (std::size_t i = 0; i < grid->size(); ++i) {
      const double h1 = u0[i], h2 = v0[i];
      const double ui = ((1.0 + t) * h1 + t * h2) / det;
      const double vi = (-t * h1 + (1.0 + t) * h2) / det;
      REQUIRE_THAT(z.u[i], Catch::Matchers::WithinAbs(ui, 1e-10));
      REQUIRE_THAT(z.v[i], Catch::Matchers::WithinAbs(vi, 1e-10));
    }
  }
}

TEST_CASE("product resolvent fixes zeros and the t -> 0 limit") {
  auto grid = make_trapezoid_grid(33);
  const auto lin = find_problem("linear-affine");
  auto ops = lin.discretize(grid);
  auto ustar = GridFunction::sample(grid, Side::primal, 2.0, lin.known_solution);
  ProductPoint wstar(ustar, ops.apply_nemytskii(ustar));

  for (double t : {0.1, 1.0, 10.0, 1e5}) {
    ResolventConfig cfg{t, 1e-12, 200};
    auto z = resolvent_product(ops, wstar, cfg);
    REQUIRE(product_distance(z, wstar) <= 1e-9);
  }

  auto g = rng::engine(21);
  ProductPoint w(rng::components(grid, Side::primal, 2.0, 1.0, g),
                 rng::components(grid, Side::dual, 2.0, 1.0, g));
  ResolventConfig tiny{1e-12, 1e-14, 200};
  REQUIRE(product_distance(resolvent_product(ops, w, tiny), w) <= 1e-8);
}

TEST_CASE("range extension") {
  const ScalarPSpace sp{2.0};
  ResolventConfig cfg{1.0, 1e-13, 200};

  // base solver for A = identity at t0 = 1: (1 + t0) z = h
  const auto base = [](double h) { return h / 2.0; };

  // t = t0: one inner solve, identical value
  REQUIRE(resolvent_extend(sp, base, 3.0, 1.0, 1.0, cfg) == base(3.0));

  // t = 4 from t0 = 1: x = h/(1+4)
  REQUIRE_THAT(resolvent_extend(sp, base, 5.0, 4.0, 1.0, cfg),
               Catch::Matchers::WithinAbs(1.0, 1e-12));

  // cascade reaches parameters below t0/2
  const auto via_cascade =
      resolvent_extend_cascade<ScalarPSpace>(sp, base, 5.0, 0.2, 1.0, cfg);
  REQUIRE_THAT(via_cascade, Catch::Matchers::WithinAbs(5.0 / 1.2, 1e-11));

  // contraction precondition
  REQUIRE_THROWS_AS(resolvent_extend(sp, base, 1.0, 0.4, 1.0, cfg), ContractionFactorError);

  // scalar cubic: solve z + 10 z^3 = h through the extension, against bisection
  const auto cubic_base = [&](double h) {
    return scalar_monotone_solve(2.0, 1.0, [](double s) { return s * s * s; }, h,
                                 [](double s) { return 3.0 * s * s; }, 1e-14);
  };
  const double h = 2.0;
  const double via_ext = resolvent_extend(sp, cubic_base, h, 10.0, 1.0, cfg);
  const double direct = bisect_oracle([h](double s) { return s + 10.0 * s * s * s - h; }, 0.0, 2.0);
  REQUIRE_THAT(via_ext, Catch::Matchers::WithinAbs(direct, 1e-9));
}

TEST_CASE("extension consistency for the product resolvent") {
  auto grid = make_trapezoid_grid(33);
  const auto lin = find_problem("linear-affine");
  auto ops = lin.discretize(grid);
  auto g = rng::engine(27);
  ProductPoint w(rng::components(grid, Side::primal, 2.0, 1.0, g),
                 rng::components(grid, Side::dual, 2.0, 1.0, g));
  const ProductDual h = product_duality_map(w);
  ResolventConfig cfg{0.8, 1e-12, 200};

  // direct fixed point at t = 0.8 (the resolvent takes this branch itself)
  const ProductPoint direct = resolvent_product(ops, w, cfg);

  // same parameter reached by extension over the t0 = 0.5 base
  ResolventConfig base_cfg{0.5, 1e-13, 200};
  const auto base = [&](const ProductDual& rhs) {
    return detail::product_base_solve(ops, rhs, 0.5, base_cfg);
  };
  const ProductPoint extended =
      resolvent_extend(ProductWSpace{}, base, h, 0.8, 0.5, cfg);
  REQUIRE(product_distance(direct, extended) <= 1e-8);

  // and by a downward cascade to t = 0.2
  ResolventConfig cfg02{0.2, 1e-12, 200};
  const ProductPoint direct02 = resolvent_product(ops, w, cfg02);
  const ProductPoint cascaded = resolvent_extend_cascade<ProductWSpace>(
      ProductWSpace{}, base, h, 0.2, 0.5, cfg02);
  REQUIRE(product_distance(direct02, cascaded) <= 1e-8);
}

TEST_CASE("resolvents are nonexpansive and of firmly nonexpansive type") {
  auto grid = make_trapezoid_grid(33);
  const auto lin = find_problem("linear-affine");
  auto ops = lin.discretize(grid);
  auto g = rng::engine(33);

  for (double t : {0.1, 1.0, 10.0}) {
    ResolventConfig cfg{t, 1e-12, 200};
    for (int rep = 0; rep < 60; ++rep) {
      auto x1 = rng::components(grid, Side::primal, 2.0, 1.0, g);
      auto x2 = rng::components(grid, Side::primal, 2.0, 1.0, g);
      auto z1 = resolvent_nemytskii(ops, x1, cfg);
      auto z2 = resolvent_nemytskii(ops, x2, cfg);
      REQUIRE(lp_norm(z1 - z2) <= lp_norm(x1 - x2) + 1e-9);
      const double lhs = pairing(duality_map_p(z1) - duality_map_p(z2), z1 - z2);
      const double rhs = pairing(duality_map_p(x1) - duality_map_p(x2), z1 - z2);
      REQUIRE(lhs <= rhs + 1e-9);

      auto y1 = rng::components(grid, Side::dual, 2.0, 1.0, g);
      auto y2 = rng::components(grid, Side::dual, 2.0, 1.0, g);
      auto w1 = resolvent_integral(ops, y1, cfg);
      auto w2 = resolvent_integral(ops, y2, cfg);
      REQUIRE(lp_norm(w1 - w2) <= lp_norm(y1 - y2) + 1e-9);
      const double lhs2 = pairing(w1 - w2, duality_map_q(w1) - duality_map_q(w2));
      const double rhs2 = pairing(w1 - w2, duality_map_q(y1) - duality_map_q(y2));
      REQUIRE(lhs2 <= rhs2 + 1e-9);
    }
  }
}

TEST_CASE("regularization path on the linear-affine problem") {
  auto grid = make_trapezoid_grid(33);
  const auto lin = find_problem("linear-affine");
  auto ops = lin.discretize(grid);
  auto ustar = GridFunction::sample(grid, Side::primal, 2.0, lin.known_solution);
  ProductPoint wstar(ustar, ops.apply_nemytskii(ustar));

  // starting at the zero of A, the path sits at the zero for every theta
  for (double theta : {1.0, 1e-2, 1e-5})
    REQUIRE(product_distance(regularization_path(ops, wstar, theta), wstar) <= 1e-9);

  // from the default start, distances decrease monotonically along the ladder
  ProductPoint w1(GridFunction::zeros(grid, Side::primal, 2.0),
                  ops.apply_nemytskii(GridFunction::zeros(grid, Side::primal, 2.0)));
  double prev = std::numeric_limits<double>::infinity();
  for (double theta : {1e-1, 1e-2, 1e-3, 1e-4}) {
    auto x = regularization_path(ops, w1, theta);
    const auto [r1, r2] = path_equation_residuals(ops, w1, theta, x);
    REQUIRE(r1 <= 1e-8);
    REQUIRE(r2 <= 1e-8);
    const double dist = product_distance(x, wstar);
    REQUIRE(dist < prev + 1e-9);
    prev = dist;
  }

  REQUIRE_THROWS_AS(regularization_path(ops, w1, 0.0), InvalidConfigError);
  REQUIRE_THROWS_AS(regularization_path(ops, w1, 1.5), InvalidConfigError);
}
