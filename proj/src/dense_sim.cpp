#include "contnet/dense_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "contnet/error.hpp"
#include "contnet/geometry.hpp"

namespace contnet {

namespace {

double point_segment_distance(Point p, Point a, Point b) {
  const double dx = b.x1 - a.x1;
  const double dy = b.x2 - a.x2;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((p.x1 - a.x1) * dx + (p.x2 - a.x2) * dy) / len2, 0.0, 1.0);
  return std::hypot(p.x1 - (a.x1 + t * dx), p.x2 - (a.x2 + t * dy));
}

double distance_to(const Polyline& line, Point p) {
  if (line.size() == 1) return std::hypot(p.x1 - line[0].x1, p.x2 - line[0].x2);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < line.size(); ++k)
    best = std::min(best, point_segment_distance(p, line[k - 1], line[k]));
  return best;
}

// Largest distance from samples of `a` (vertices plus points every `step`).
double directed(const Polyline& a, const Polyline& b, double step) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    worst = std::max(worst, distance_to(b, a[k]));
    if (k + 1 == a.size()) break;
    const double len = std::hypot(a[k + 1].x1 - a[k].x1, a[k + 1].x2 - a[k].x2);
    const int pieces = static_cast<int>(std::ceil(len / step));
    for (int s = 1; s < pieces; ++s) {
      const double t = static_cast<double>(s) / pieces;
      worst = std::max(worst, distance_to(b, {a[k].x1 + t * (a[k + 1].x1 - a[k].x1),
                                              a[k].x2 + t * (a[k + 1].x2 - a[k].x2)}));
    }
  }
  return worst;
}

}  // namespace

NodeIndex NodeNetwork::nearest(Point p) const {
  const CellIndex c = lattice.nearest_cell(p);
  return {c.i, c.j};
}

NodeNetwork build_network(int density, const ScalarField& c1, const ScalarField& c2) {
  if (density < 2) throw ParameterError("network density must be at least 2");
  if (!(c1.grid() == c2.grid())) throw ParameterError("cost fields live on different grids");
  const Grid& fine = c1.grid();
  NodeNetwork net{Grid(fine.a(), fine.b(), density, density), {}, {}};
  const Grid& g = net.lattice;
  net.east.resize(g.t1_count());
  net.south.resize(g.t2_count());
  for (int j = 0; j < density; ++j)
    for (int i = 0; i + 1 < density; ++i)
      net.east[g.t1_face(i, j)] = segment_integral(c1, c2, g.center(i, j), g.center(i + 1, j));
  for (int j = 0; j + 1 < density; ++j)
    for (int i = 0; i < density; ++i)
      net.south[g.t2_face(i, j)] = segment_integral(c1, c2, g.center(i, j), g.center(i, j + 1));
  return net;
}

Route route(const NodeNetwork& net, NodeIndex origin, NodeIndex dest) {
  const Grid& g = net.lattice;
  const int n = net.density();
  auto inside = [n](NodeIndex v) { return v.i >= 0 && v.j >= 0 && v.i < n && v.j < n; };
  if (!inside(origin) || !inside(dest)) throw DomainError("route endpoint outside the lattice");
  if (dest.i < origin.i || dest.j < origin.j)
    throw DomainError("destination is not South-East of the origin");

  // Cost-to-go over the rectangle spanned by the endpoints; nodes outside it
  // cannot reach dest.
  const int w = dest.i - origin.i + 1;
  const int hgt = dest.j - origin.j + 1;
  std::vector<double> v(static_cast<std::size_t>(w) * hgt);
  std::vector<Step> choice(v.size(), Step::kEast);
  auto at = [w](int di, int dj) { return static_cast<std::size_t>(dj) * w + di; };
  for (int dj = hgt - 1; dj >= 0; --dj)
    for (int di = w - 1; di >= 0; --di) {
      const int i = origin.i + di;
      const int j = origin.j + dj;
      if (di == w - 1 && dj == hgt - 1) {
        v[at(di, dj)] = 0.0;
        continue;
      }
      const double e = di + 1 < w ? net.east[g.t1_face(i, j)] + v[at(di + 1, dj)] : 0.0;
      const double s = dj + 1 < hgt ? net.south[g.t2_face(i, j)] + v[at(di, dj + 1)] : 0.0;
      const bool take_east =
          dj + 1 == hgt || (di + 1 < w && e <= s + 1e-12 * std::max(std::abs(e), std::abs(s)));
      v[at(di, dj)] = take_east ? e : s;
      choice[at(di, dj)] = take_east ? Step::kEast : Step::kSouth;
    }

  std::vector<Step> steps;
  int di = 0, dj = 0;
  while (di != w - 1 || dj != hgt - 1) {
    const Step st = choice[at(di, dj)];
    steps.push_back(st);
    (st == Step::kEast ? di : dj) += 1;
  }
  return {StaircasePath(g, {origin.i, origin.j}, std::move(steps)), v[0]};
}

double hausdorff(const Polyline& a, const Polyline& b, double step) {
  if (a.empty() || b.empty()) throw ParameterError("Hausdorff distance of an empty polyline");
  if (!(step > 0.0)) throw ParameterError("sampling step must be positive");
  return std::max(directed(a, b, step), directed(b, a, step));
}

ConvergenceStudy convergence_study(const ScalarField& c1, const ScalarField& c2, Point origin,
                                   Point dest, std::span<const int> densities) {
  if (densities.empty()) throw ParameterError("no densities given");
  ConvergenceStudy out;
  const CurlGapField field = curl_gap(c1, c2);
  try {
    out.reference = continuum_path(field, origin, dest);
  } catch (const UnsupportedGeometry& e) {
    out.fallback = true;
    out.fallback_reason = e.what();
  }

  std::vector<NodeNetwork> nets;
  std::vector<Route> routes;
  for (int n : densities) {
    nets.push_back(build_network(n, c1, c2));
    routes.push_back(route(nets.back(), nets.back().nearest(origin), nets.back().nearest(dest)));
  }
  if (out.fallback) {
    const auto finest = std::max_element(densities.begin(), densities.end()) - densities.begin();
    out.reference = routes[finest].path.vertices();
  }
  const double reference_cost = line_integral(c1, c2, out.reference);

  for (std::size_t k = 0; k < nets.size(); ++k) {
    RouteComparison row;
    row.density = densities[k];
    row.route = routes[k].path.vertices();
    row.route_cost = routes[k].cost;
    row.reference_cost = reference_cost;
    const Grid& g = nets[k].lattice;
    row.hausdorff = hausdorff(row.route, out.reference, std::min(g.h1(), g.h2()) / 4.0);
    row.cost_ratio = row.route_cost / reference_cost;
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace contnet
