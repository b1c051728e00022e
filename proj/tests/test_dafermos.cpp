#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "contnet/assignment.hpp"
#include "contnet/dafermos.hpp"
#include "contnet/error.hpp"
#include "support/oracles.hpp"

using namespace contnet;

namespace {

SeparableSolution two_mode() {
  return SeparableSolution(1.0, 1.0, 1.0, 2.0,
                           {{ModeKind::kHyperbolicX1, 1.0, 0.5, 0.2, 1.0, 0.5},
                            {ModeKind::kHyperbolicX2, 0.8, 0.3, -0.2, 1.0, 0.4}},
                           {0.0, -4.0, 4.0});
}

double phi(const SeparableSolution& s, double x1, double x2) { return s.eval({x1, x2}).phi; }

// Sources along the North and West edges, one sink in the South-East corner;
// constant linear costs, so the interior is source free.
Scenario edge_fed(int n) {
  const Grid g(1.0, 1.0, n, n);
  std::vector<double> rho(g.cell_count(), 0.0);
  double total = 0.0;
  for (int i = 0; i + 1 < n; ++i) rho[g.cell(i, 0)] += 1.0, total += 1.0;
  for (int j = 1; j + 1 < n; ++j) rho[g.cell(0, j)] += 1.0, total += 1.0;
  rho[g.cell(n - 1, n - 1)] = -total;
  const ScalarField k1 = ScalarField::constant(g, 1.0), k2 = ScalarField::constant(g, 2.0);
  const ScalarField h = ScalarField::constant(g, 0.5);
  Scenario s{g, CostModel::affine(k1, k2, h, h), {ScalarField(g, rho)}, {}};
  s.options.tol = 1e-5;
  return s;
}

}  // namespace

TEST_CASE("single mode solves the PDE by finite differences on a 33x33 sample") {
  for (ModeKind kind : {ModeKind::kHyperbolicX1, ModeKind::kHyperbolicX2}) {
    const SeparableSolution s(1.0, 1.0, 1.0, 3.0, {{kind, 1.0, 1.0, 0.0, 0.0, 1.0}});
    const double d = 1e-4;
    double worst = 0.0, norm = 0.0;
    for (int q = 0; q < 33; ++q)
      for (int p = 0; p < 33; ++p) {
        const double x1 = d + (1.0 - 2 * d) * p / 32.0, x2 = d + (1.0 - 2 * d) * q / 32.0;
        const double c = phi(s, x1, x2);
        const double xx = (phi(s, x1 + d, x2) - 2 * c + phi(s, x1 - d, x2)) / (d * d);
        const double yy = (phi(s, x1, x2 + d) - 2 * c + phi(s, x1, x2 - d)) / (d * d);
        worst = std::max(worst, std::abs(s.k1() * yy + s.k2() * xx));
        norm = std::max(norm, std::abs(c));
      }
    CHECK(worst <= 1e-6 * norm);
  }
}

TEST_CASE("affine term gives uniform flow") {
  const Grid g(1.0, 1.0, 8, 8);
  const StreamFlows up = flows_from_stream(SeparableSolution(1.0, 1.0, 1.0, 1.0, {}, {0.0, 1.0, 0.0}), g);
  for (double v : up.flow.t1()) CHECK(v == 0.0);
  for (double v : up.flow.t2()) CHECK(v == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(up.negative_faces == static_cast<int>(g.t2_count()));
  CHECK(up.min_flow == doctest::Approx(-1.0));

  const double r = 2.5;
  const StreamFlows down = flows_from_stream(SeparableSolution(1.0, 1.0, 1.0, 1.0, {}, {0.0, -r, 0.0}), g);
  for (double v : down.flow.t2()) CHECK(v == doctest::Approx(r).epsilon(1e-14));
  CHECK(down.negative_faces == 0);
  CHECK(interior_divergence(down.flow).max_abs <= 1e-12);
}

TEST_CASE("two-mode gradient matches centered differences") {
  const SeparableSolution s = two_mode();
  oracle::Rng rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    const double x1 = rng.uniform(0.01, 0.99), x2 = rng.uniform(0.01, 0.99);
    const StreamValue v = stream_function(s, {x1, x2});
    const double d = 1e-5;
    const double f1 = (phi(s, x1 + d, x2) - phi(s, x1 - d, x2)) / (2 * d);
    const double f2 = (phi(s, x1, x2 + d) - phi(s, x1, x2 - d)) / (2 * d);
    CHECK(oracle::rel_diff(v.d1, f1) <= 1e-6);
    CHECK(oracle::rel_diff(v.d2, f2) <= 1e-6);
  }
}

TEST_CASE("equal k and a swap-symmetric stream function give mirrored flows") {
  const double sv = 1.3;
  const SeparableSolution s(1.0, 1.0, 2.0, 2.0,
                            {{ModeKind::kHyperbolicX1, sv, 0.7, 0.1, 1.0, 0.3},
                             {ModeKind::kHyperbolicX2, sv, 1.0, 0.3, 0.7, 0.1}});
  const Grid g(1.0, 1.0, 12, 12);
  for (FaceSampling fs : {FaceSampling::kMidpoint, FaceSampling::kFaceAverage}) {
    const FlowField f = flows_from_stream(s, g, fs).flow;
    // phi(x1,x2) = phi(x2,x1) turns T1 at (i,j) into -T2 at (j,i)
    for (int j = 0; j < 12; ++j)
      for (int i = 0; i + 1 < 12; ++i)
        CHECK(f.t1()[g.t1_face(i, j)] == doctest::Approx(-f.t2()[g.t2_face(j, i)]).epsilon(1e-12));
  }
}

TEST_CASE("refinement: PDE, divergence and equalized residuals are second order") {
  const std::vector<SeparableSolution> sols = {
      two_mode(),
      SeparableSolution(1.0, 1.0, 1.0, 1.0, {{ModeKind::kHyperbolicX1, 1.0, 1.0, 0.0, 0.0, 1.0}}, {0.0, -3.0, 3.0}),
      SeparableSolution(2.0, 1.0, 0.5, 1.5, {{ModeKind::kHyperbolicX2, 1.2, 0.4, 0.4, 0.5, 0.2}}, {1.0, -2.0, 3.0})};
  const int sizes[] = {16, 32, 64};
  for (const SeparableSolution& s : sols) {
    const RefinementStudy st = refinement_study(s, sizes);
    REQUIRE(st.rows.size() == 3);
    CHECK(st.pde_order >= 1.8);
    CHECK(st.divergence_order >= 1.8);
    CHECK(st.equalized_order >= 1.8);
    for (std::size_t r = 1; r < st.rows.size(); ++r) {
      CHECK(st.rows[r].pde < st.rows[r - 1].pde);
      CHECK(st.rows[r].equalized < st.rows[r - 1].equalized);
    }
  }
  const int bad[] = {16, 24};
  CHECK_THROWS(refinement_study(two_mode(), bad));
}

TEST_CASE("face-average sampling is divergence free and inverts through stream_from_flow") {
  const SeparableSolution s = two_mode();
  const Grid g(1.0, 1.0, 20, 20);
  const StreamFlows sf = flows_from_stream(s, g);
  CHECK(sf.negative_faces == 0);
  const FieldResidual div = interior_divergence(sf.flow);
  CHECK(div.relative <= 1e-8);
  const std::vector<double> nodes = stream_from_flow(sf.flow);
  REQUIRE(nodes.size() == 19u * 19u);
  const double base = phi(s, g.h1(), g.h2());
  for (int q = 0; q < 19; ++q)
    for (int p = 0; p < 19; ++p)
      CHECK(nodes[static_cast<std::size_t>(q * 19 + p)] ==
            doctest::Approx(phi(s, (p + 1) * g.h1(), (q + 1) * g.h2()) - base).epsilon(1e-10).scale(1.0));
}

TEST_CASE("mode fit recovers a solution built from the same s values") {
  const SeparableSolution s = two_mode();
  const Grid g(1.0, 1.0, 24, 24);
  const std::vector<double> nodes = stream_from_flow(flows_from_stream(s, g).flow);
  const double sv[] = {1.0, 0.8};
  const ModeFit fit = fit_modes(g, nodes, s.k1(), s.k2(), sv);
  CHECK(fit.relative_l2 <= 1e-8);
}

TEST_CASE("uniform flow has zero equalized residual") {
  const Grid g(1.0, 1.0, 9, 7);
  const FlowField f(g, 0, std::vector<double>(g.t1_count(), 2.0), std::vector<double>(g.t2_count(), 3.0));
  const FieldResidual r = equalized_cost_residual(f, 1.5, 0.5);
  CHECK(r.max_abs == 0.0);
  CHECK(r.relative == 0.0);
}

TEST_CASE("Wardrop flows on an edge-fed instance satisfy the equalized identity") {
  // At a discrete equilibrium using every face the packet cost k T/2 + h is
  // minus the difference of V, so its discrete curl vanishes; what remains
  // is the Frank-Wolfe error.
  std::vector<double> eq;
  for (double tol : {1e-4, 1e-5, 1e-6, 1e-7}) {
    Scenario s = edge_fed(32);
    s.options.tol = tol;
    const AssignmentResult r = solve_wardrop(s);
    REQUIRE(r.converged);
    CHECK(r.flows[0].min_value() > 0.0);
    eq.push_back(equalized_cost_residual(r.flows[0], 0.5, 1.0).relative);
  }
  for (std::size_t k = 1; k < eq.size(); ++k) CHECK(eq[k] < eq[k - 1]);
  CHECK(eq.back() <= 1e-4);

  const Scenario s = edge_fed(64);
  const AssignmentResult r = solve_wardrop(s);
  REQUIRE(r.flows[0].min_value() > 0.0);
  const std::vector<double> nodes = stream_from_flow(r.flows[0]);
  std::vector<double> sv;
  for (int m = 1; m <= 2; ++m) sv.push_back(m * std::numbers::pi / std::sqrt(2.0));
  CHECK(fit_modes(s.grid, nodes, 0.5, 1.0, sv).relative_l2 <= 5e-2);
}

TEST_CASE("evaluation outside the rectangle is a domain error") {
  const SeparableSolution s = two_mode();
  CHECK_THROWS_AS(stream_function(s, {1.01, 0.5}), DomainError);
  CHECK_THROWS_AS(stream_function(s, {0.5, -0.01}), DomainError);
  CHECK_NOTHROW(stream_function(s, {1.0, 1.0}));
  CHECK_THROWS(flows_from_stream(s, Grid(2.0, 1.0, 8, 8)));
}
