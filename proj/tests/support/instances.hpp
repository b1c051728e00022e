#pragma once

// Generated problem instances shared by the module tests and the acceptance
// runner. Every generator is a pure function of its seed.

#include <cmath>
#include <utility>
#include <vector>

#include "contnet/cost_model.hpp"
#include "contnet/grid.hpp"
#include "contnet/scenario.hpp"
#include "support/oracles.hpp"

namespace instances {

using contnet::CellIndex;
using contnet::CostModel;
using contnet::Grid;
using contnet::Point;
using contnet::ScalarField;
using contnet::Scenario;

struct CostPair {
  ScalarField c1, c2;
};

// U = (g + d x2) - (al + be x1) has one sign with |U| >= margin on [0,1]^2.
// Extra terms in x1 only (c1) and x2 only (c2) leave U unchanged.
inline CostPair uniform_sign(const Grid& g, oracle::Rng& rng, int sign, double margin = 0.1) {
  double al, be, ga, de;
  for (;;) {
    al = rng.uniform(-1, 1), be = rng.uniform(-1, 1), ga = rng.uniform(-1, 1), de = rng.uniform(-1, 1);
    double lo = 1e300;
    for (double x1 : {0.0, g.a()})
      for (double x2 : {0.0, g.b()}) lo = std::min(lo, sign * ((ga + de * x2) - (al + be * x1)));
    if (lo >= margin) break;
  }
  const double amp = rng.uniform(0.0, 0.5), f1 = rng.uniform(1, 5), f2 = rng.uniform(1, 5);
  const double p1 = rng.uniform(0, 6.3), p2 = rng.uniform(0, 6.3);
  const double base = 1.0 + 2.0 * (std::abs(al) + std::abs(be) + std::abs(ga) + std::abs(de)) + amp;
  return {ScalarField::sample(g, [=](Point p) { return base + amp * std::sin(f1 * p.x1 + p1) + al * p.x2 + be * p.x1 * p.x2; }),
          ScalarField::sample(g, [=](Point p) { return base + amp * std::sin(f2 * p.x2 + p2) + ga * p.x1 + de * p.x1 * p.x2; })};
}

// Zero curve x2 = L(x1), increasing from near the North-West corner to near
// the South-East corner.
struct Curve {
  double y0, slope, amp, freq, phase;
  double operator()(double x1) const { return y0 + slope * x1 + amp * std::sin(freq * x1 + phase); }
};

inline Curve random_curve(oracle::Rng& rng) {
  Curve c;
  c.y0 = rng.uniform(0.05, 0.25);
  c.slope = rng.uniform(0.5, 0.9 - c.y0);
  c.freq = rng.uniform(1.0, 4.0);
  // L' > 0 and the curve stays inside (0, 1)
  c.amp = rng.uniform(0.0, 0.5) * std::min(c.slope / c.freq, std::min(c.y0, 1.0 - c.y0 - c.slope));
  c.phase = rng.uniform(0, 6.3);
  return c;
}

// c1 = A + s*kappa/2 (x2 - L(x1))^2 gives U = s*kappa (L(x1) - x2): s = +1 is
// the attractor (U > 0 north of the curve), s = -1 the repeller.
inline CostPair split_field(const Grid& g, const Curve& curve, double kappa, int s, oracle::Rng& rng) {
  const double amp = rng.uniform(0.0, 0.5), f2 = rng.uniform(1, 5), p2 = rng.uniform(0, 6.3);
  const double base = 1.0 + kappa;
  return {ScalarField::sample(g, [=](Point p) {
            const double d = p.x2 - curve(p.x1);
            return base + s * 0.5 * kappa * d * d;
          }),
          ScalarField::sample(g, [=](Point p) { return 1.0 + amp * std::sin(f2 * p.x2 + p2); })};
}

inline ScalarField smooth_positive(const Grid& g, oracle::Rng& rng, double lo, double hi) {
  const oracle::SmoothField f = oracle::random_smooth(rng, 0.5 * (lo + hi), 2, 0.25 * (hi - lo));
  return ScalarField::sample(g, f);
}

// Sources spread over every cell (random positive rates) and a single sink at
// the South-East corner; `total` is the total rate in bps.
inline ScalarField corner_demand(const Grid& g, oracle::Rng& rng, double total) {
  std::vector<double> w(g.cell_count());
  double sum = 0.0;
  for (std::size_t c = 0; c + 1 < w.size(); ++c) sum += (w[c] = rng.uniform(0.5, 1.5));
  for (std::size_t c = 0; c + 1 < w.size(); ++c) w[c] *= total / sum / g.cell_area();
  w.back() = 0.0;
  double s = 0.0;
  for (std::size_t c = 0; c + 1 < w.size(); ++c) s += w[c];
  w.back() = -s;
  return ScalarField(g, std::move(w));
}

inline Scenario affine_corner(int n, oracle::Rng& rng) {
  const Grid g(1.0, 1.0, n, n);
  CostModel cost = CostModel::affine(smooth_positive(g, rng, 0.5, 2.0), smooth_positive(g, rng, 0.5, 2.0),
                                     smooth_positive(g, rng, 0.0, 0.2), smooth_positive(g, rng, 0.0, 0.2));
  Scenario s{g, std::move(cost), {corner_demand(g, rng, 4.0)}, {}};
  return s;
}

// Two classes, each with sources in its own band and a sink in the
// South-East quarter.
inline Scenario monomial_two_class(int n, double beta, oracle::Rng& rng) {
  const Grid g(1.0, 1.0, n, n);
  CostModel cost = CostModel::monomial(smooth_positive(g, rng, 0.5, 2.0), smooth_positive(g, rng, 0.5, 2.0), beta);
  std::vector<ScalarField> rho;
  for (int k = 0; k < 2; ++k) {
    std::vector<double> v(g.cell_count(), 0.0);
    const CellIndex sink{rng.integer(3 * n / 4, n - 1), rng.integer(3 * n / 4, n - 1)};
    double total = 0.0;
    for (int m = 0; m < 6; ++m) {
      const CellIndex c = k == 0 ? CellIndex{rng.integer(0, n / 2), rng.integer(0, n / 4)}
                                 : CellIndex{rng.integer(0, n / 4), rng.integer(0, n / 2)};
      const double r = rng.uniform(0.5, 1.5);
      v[g.cell(c)] += r / g.cell_area();
      total += r;
    }
    v[g.cell(sink)] -= total / g.cell_area();
    rho.emplace_back(g, std::move(v));
  }
  return Scenario{g, std::move(cost), std::move(rho), {}};
}

}  // namespace instances
