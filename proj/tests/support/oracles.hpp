#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the solver code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "contnet/grid.hpp"
#include "contnet/path.hpp"

namespace oracle {

using contnet::CellIndex;
using contnet::Grid;
using contnet::Point;
using contnet::ScalarField;
using contnet::Step;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  bool coin() { return integer(0, 1) == 1; }

 private:
  std::mt19937_64 eng_;
};

// Low-frequency trigonometric field: offset + sum of a few random waves.
struct SmoothField {
  double offset = 1.0;
  struct Wave {
    double amp, f1, f2, p1, p2;
  };
  std::vector<Wave> waves;

  double operator()(Point p) const {
    double v = offset;
    for (const Wave& w : waves) v += w.amp * std::sin(w.f1 * p.x1 + w.p1) * std::cos(w.f2 * p.x2 + w.p2);
    return v;
  }
};

inline SmoothField random_smooth(Rng& rng, double offset = 2.0, int waves = 3, double amp = 0.5) {
  SmoothField f;
  f.offset = offset;
  for (int k = 0; k < waves; ++k)
    f.waves.push_back({rng.uniform(-amp, amp), rng.uniform(0.5, 4.0), rng.uniform(0.5, 4.0),
                       rng.uniform(0.0, 6.3), rng.uniform(0.0, 6.3)});
  return f;
}

inline ScalarField random_cells(const Grid& g, Rng& rng, double lo, double hi) {
  std::vector<double> v(g.cell_count());
  for (double& x : v) x = rng.uniform(lo, hi);
  return ScalarField(g, std::move(v));
}

// Calls visit(steps) for every East/South staircase from `from` to `to`.
inline void enumerate_staircases(CellIndex from, CellIndex to,
                                 const std::function<void(const std::vector<Step>&)>& visit) {
  const int e = to.i - from.i;
  const int s = to.j - from.j;
  std::vector<Step> steps;
  std::function<void(int, int)> rec = [&](int ei, int si) {
    if (ei == e && si == s) {
      visit(steps);
      return;
    }
    if (ei < e) {
      steps.push_back(Step::kEast);
      rec(ei + 1, si);
      steps.pop_back();
    }
    if (si < s) {
      steps.push_back(Step::kSouth);
      rec(ei, si + 1);
      steps.pop_back();
    }
  };
  rec(0, 0);
}

// Cost of a staircase between cell centers: each move costs the mean of the
// two cells it joins times the spacing.
inline double staircase_cost(const ScalarField& c1, const ScalarField& c2, CellIndex from,
                             const std::vector<Step>& steps) {
  const Grid& g = c1.grid();
  double total = 0.0;
  CellIndex c = from;
  for (Step st : steps) {
    if (st == Step::kEast) {
      total += 0.5 * (c1.at(c.i, c.j) + c1.at(c.i + 1, c.j)) * g.h1();
      ++c.i;
    } else {
      total += 0.5 * (c2.at(c.i, c.j) + c2.at(c.i, c.j + 1)) * g.h2();
      ++c.j;
    }
  }
  return total;
}

// Minimum over all staircases from `from` to any cell of `targets` that stay
// on the grid (exhaustive; infinity when none reaches).
inline double brute_force_value(const ScalarField& c1, const ScalarField& c2, CellIndex from,
                                const std::vector<std::uint8_t>& target) {
  const Grid& g = c1.grid();
  if (target[g.cell(from)]) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int j = from.j; j < g.ny(); ++j)
    for (int i = from.i; i < g.nx(); ++i) {
      if (!target[g.cell(i, j)]) continue;
      enumerate_staircases(from, {i, j}, [&](const std::vector<Step>& steps) {
        // Paths pass through earlier targets only if those are absorbing; the
        // DP stops at the first target, so skip paths that touch one early.
        CellIndex c = from;
        for (std::size_t k = 0; k < steps.size(); ++k) {
          steps[k] == Step::kEast ? ++c.i : ++c.j;
          if (k + 1 < steps.size() && target[g.cell(c)]) return;
        }
        best = std::min(best, staircase_cost(c1, c2, from, steps));
      });
    }
  return best;
}

// Value of a piecewise-constant cell field at p; on a cell boundary the
// adjacent cells are averaged.
inline double cell_value(const ScalarField& f, Point p) {
  const Grid& g = f.grid();
  auto spans = [](double x, double h, int n, int& lo, int& hi) {
    const double u = x / h;
    const double r = std::round(u);
    if (std::abs(u - r) < 1e-9 && r > 0 && r < n) {
      lo = static_cast<int>(r) - 1;
      hi = static_cast<int>(r);
    } else {
      lo = hi = std::clamp(static_cast<int>(std::floor(u)), 0, n - 1);
    }
  };
  int i0, i1, j0, j1;
  spans(p.x1, g.h1(), g.nx(), i0, i1);
  spans(p.x2, g.h2(), g.ny(), j0, j1);
  return 0.25 * (f.at(i0, j0) + f.at(i1, j0) + f.at(i0, j1) + f.at(i1, j1));
}

// Midpoint rule with `n` subintervals on an axis-aligned segment.
inline double fine_segment(const ScalarField& c1, const ScalarField& c2, Point a, Point b, int n) {
  if (n <= 0 || a == b) return 0.0;
  const bool horizontal = a.x2 == b.x2;
  const double len = horizontal ? b.x1 - a.x1 : b.x2 - a.x2;
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    const double t = (k + 0.5) / n;
    const Point m{a.x1 + t * (b.x1 - a.x1), a.x2 + t * (b.x2 - a.x2)};
    total += horizontal ? cell_value(c1, m) : cell_value(c2, m);
  }
  return total * len / n;
}

inline double fine_polyline(const ScalarField& c1, const ScalarField& c2, const contnet::Polyline& p,
                            int per_segment) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < p.size(); ++k) total += fine_segment(c1, c2, p[k], p[k + 1], per_segment);
  return total;
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

// Sum of x_f^2 over both face arrays of a flow.
inline double l2(const contnet::FlowField& f) {
  double s = 0.0;
  for (double v : f.t1()) s += v * v;
  for (double v : f.t2()) s += v * v;
  return std::sqrt(s);
}

inline double rel_l2(const contnet::FlowField& f, const contnet::FlowField& g) {
  double d = 0.0;
  for (std::size_t k = 0; k < f.t1().size(); ++k) d += std::pow(f.t1()[k] - g.t1()[k], 2);
  for (std::size_t k = 0; k < f.t2().size(); ++k) d += std::pow(f.t2()[k] - g.t2()[k], 2);
  return std::sqrt(d) / std::max(l2(g), 1e-300);
}

// Divergence recomputed from the face definition, without the kernels.
inline std::vector<double> face_divergence(const contnet::FlowField& f) {
  const Grid& g = f.grid();
  std::vector<double> out(g.cell_count(), 0.0);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const double e = i + 1 < g.nx() ? f.t1()[g.t1_face(i, j)] : 0.0;
      const double w = i > 0 ? f.t1()[g.t1_face(i - 1, j)] : 0.0;
      const double s = j + 1 < g.ny() ? f.t2()[g.t2_face(i, j)] : 0.0;
      const double n = j > 0 ? f.t2()[g.t2_face(i, j - 1)] : 0.0;
      out[g.cell(i, j)] = (e - w) / g.h1() + (s - n) / g.h2();
    }
  return out;
}

inline double conservation_rel(const contnet::FlowField& f, const ScalarField& rho) {
  const std::vector<double> d = face_divergence(f);
  double num = 0.0, den = 0.0;
  for (std::size_t c = 0; c < d.size(); ++c) {
    num += std::pow(d[c] - rho[c], 2);
    den += rho[c] * rho[c];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace oracle
