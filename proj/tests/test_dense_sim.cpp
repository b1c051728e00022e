#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "contnet/dense_sim.hpp"
#include "contnet/error.hpp"
#include "contnet/hjb.hpp"
#include "support/instances.hpp"
#include "support/oracles.hpp"

using namespace contnet;

TEST_CASE("density 2 with unit costs: four nodes, four unit-spacing hops") {
  const Grid g(1.0, 1.0, 8, 8);
  const ScalarField one = ScalarField::constant(g, 1.0);
  const NodeNetwork net = build_network(2, one, one);
  CHECK(net.node_count() == 4);
  CHECK(net.edge_count() == 4);
  for (double c : net.east) CHECK(c == doctest::Approx(0.5).epsilon(1e-15));
  for (double c : net.south) CHECK(c == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(build_network(1, one, one), ParameterError);
}

TEST_CASE("edge count is 2n(n-1)") {
  const Grid g(2.0, 1.0, 10, 10);
  const ScalarField one = ScalarField::constant(g, 1.0);
  for (int n = 2; n <= 12; ++n) CHECK(build_network(n, one, one).edge_count() == static_cast<std::size_t>(2 * n * (n - 1)));
}

TEST_CASE("edge costs match fine quadrature on a nonuniform field") {
  // Hop ends and cell edges all lie on a 1/(2 n N) lattice, so 2N midpoint
  // samples per hop never straddle a cell edge.
  const int n = 7, N = 21;
  oracle::Rng rng(61);
  const Grid g(1.0, 1.0, N, N);
  const ScalarField c1 = oracle::random_cells(g, rng, 0.2, 3.0), c2 = oracle::random_cells(g, rng, 0.2, 3.0);
  const NodeNetwork net = build_network(n, c1, c2);
  const Grid& lat = net.lattice;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i + 1 < n; ++i)
      CHECK(std::abs(net.east[lat.t1_face(i, j)] -
                     oracle::fine_segment(c1, c2, lat.center(i, j), lat.center(i + 1, j), 2 * N)) <= 1e-8);
  for (int j = 0; j + 1 < n; ++j)
    for (int i = 0; i < n; ++i)
      CHECK(std::abs(net.south[lat.t2_face(i, j)] -
                     oracle::fine_segment(c1, c2, lat.center(i, j), lat.center(i, j + 1), 2 * N)) <= 1e-8);
}

TEST_CASE("constant costs: route cost is c1 dx1 + c2 dx2") {
  const Grid g(2.0, 1.0, 16, 16);
  const double a = 1.7, b = 0.6;
  const NodeNetwork net = build_network(10, ScalarField::constant(g, a), ScalarField::constant(g, b));
  oracle::Rng rng(62);
  for (int trial = 0; trial < 20; ++trial) {
    const NodeIndex o{rng.integer(0, 5), rng.integer(0, 5)};
    const NodeIndex d{rng.integer(o.i, 9), rng.integer(o.j, 9)};
    const Route r = route(net, o, d);
    const Point po = net.position(o), pd = net.position(d);
    CHECK(r.cost == doctest::Approx(a * (pd.x1 - po.x1) + b * (pd.x2 - po.x2)).epsilon(1e-12));
    CHECK(r.path == StaircasePath::east_then_south(net.lattice, {o.i, o.j}, {d.i, d.j}));
  }
  CHECK_THROWS_AS(route(net, {5, 5}, {4, 9}), DomainError);
  CHECK_THROWS_AS(route(net, {0, 0}, {10, 3}), DomainError);
}

TEST_CASE("property: route equals the cell DP when lattice and grid coincide") {
  oracle::Rng rng(63);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = rng.integer(8, 40);
    const Grid g(1.0, 1.0, n, n);
    const instances::CostPair c = instances::uniform_sign(g, rng, +1);
    const NodeNetwork net = build_network(n, c.c1, c.c2);
    const CellIndex dest{rng.integer(n / 2, n - 1), rng.integer(n / 2, n - 1)};
    const ValueField v = solve_value(c.c1, c.c2, mask_of_cells(g, std::vector<CellIndex>{dest}));
    for (int k = 0; k < 5; ++k) {
      const NodeIndex o{rng.integer(0, dest.i), rng.integer(0, dest.j)};
      const Route r = route(net, o, {dest.i, dest.j});
      CHECK(std::abs(r.cost - v.value.at(o.i, o.j)) <= 1e-10);
      CHECK(std::abs(line_integral(c.c1, c.c2, r.path) - r.cost) <= 1e-10);
    }
  }
}

TEST_CASE("5x5 random costs: route matches enumeration") {
  oracle::Rng rng(64);
  const Grid g(1.0, 1.0, 5, 5);
  for (int trial = 0; trial < 30; ++trial) {
    const ScalarField c1 = oracle::random_cells(g, rng, 0.1, 2.0), c2 = oracle::random_cells(g, rng, 0.1, 2.0);
    const NodeNetwork net = build_network(5, c1, c2);
    double best = kUnreachable;
    oracle::enumerate_staircases({0, 0}, {4, 4}, [&](const std::vector<Step>& s) {
      best = std::min(best, oracle::staircase_cost(c1, c2, {0, 0}, s));
    });
    const Route r = route(net, {0, 0}, {4, 4});
    CHECK(std::abs(r.cost - best) <= 1e-12);
  }
}

TEST_CASE("Hausdorff distance on simple polylines") {
  const Polyline a{{0.0, 0.0}, {1.0, 0.0}};
  const Polyline b{{0.0, 0.5}, {1.0, 0.5}};
  CHECK(hausdorff(a, b, 0.01) == doctest::Approx(0.5));
  CHECK(hausdorff(a, a, 0.01) == 0.0);
  const Polyline l{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}};
  const Polyline diag{{0.0, 0.0}, {1.0, 1.0}};
  CHECK(hausdorff(l, diag, 0.001) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
  CHECK_THROWS_AS(hausdorff({}, a, 0.1), ParameterError);
  CHECK_THROWS_AS(hausdorff(a, b, 0.0), ParameterError);
}

TEST_CASE("constant costs: every route is the matching East-first L-path") {
  const Grid g(1.0, 1.0, 64, 64);
  const ScalarField one = ScalarField::constant(g, 1.0);
  const Point o{0.3, 0.2}, d{0.8, 0.7};
  const int dens[] = {8, 16, 32, 64, 128};
  const ConvergenceStudy st = convergence_study(one, one, o, d, dens);
  REQUIRE(st.rows.size() == 5);
  CHECK_FALSE(st.fallback);
  for (const RouteComparison& row : st.rows) {
    const NodeNetwork net = build_network(row.density, one, one);
    const NodeIndex no = net.nearest(o), nd = net.nearest(d);
    const Polyline l = StaircasePath::east_then_south(net.lattice, {no.i, no.j}, {nd.i, nd.j}).vertices();
    CHECK(hausdorff(row.route, l, 1e-3) == 0.0);
    // endpoints snap to the nearest node
    CHECK(row.hausdorff <= std::sqrt(0.5) * net.lattice.h1() + 1e-12);
  }
}

TEST_CASE("attractor field: routes close in on the continuum path") {
  const Grid g(1.0, 1.0, 1024, 1024);
  const ScalarField c1 = ScalarField::sample(g, [](Point p) { return 1.0 + p.x2 * p.x2; });
  const ScalarField c2 = ScalarField::sample(g, [](Point p) { return 1.0 + p.x1 * p.x1; });
  const int dens[] = {8, 16, 32, 64, 128};
  const ConvergenceStudy st = convergence_study(c1, c2, {0.375, 0.125}, {0.625, 0.875}, dens);
  CHECK_FALSE(st.fallback);
  for (std::size_t k = 0; k < st.rows.size(); ++k) {
    const RouteComparison& row = st.rows[k];
    CHECK(row.hausdorff >= 0.0);
    CHECK(row.hausdorff * row.density <= 1.0);
    // a lattice route is a feasible path: not cheaper than the optimum by more than O(h)
    CHECK(row.cost_ratio >= 1.0 - 2.0 / row.density);
    if (k > 0) CHECK(row.hausdorff <= st.rows[k - 1].hausdorff + 1e-12);
  }
  CHECK(std::abs(st.rows.back().cost_ratio - 1.0) <= 0.02);
}
