#include "contnet/path.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "contnet/error.hpp"

namespace contnet {

StaircasePath::StaircasePath(Grid grid, CellIndex origin, std::vector<Step> steps)
    : grid_(grid), origin_(origin), steps_(std::move(steps)) {
  if (origin.i < 0 || origin.j < 0 || origin.i >= grid.nx() || origin.j >= grid.ny())
    throw DomainError("path origin outside the grid");
  const CellIndex end = destination();
  if (end.i >= grid.nx() || end.j >= grid.ny()) throw DomainError("path leaves the grid");
}

StaircasePath StaircasePath::east_then_south(const Grid& grid, CellIndex from, CellIndex to) {
  if (to.i < from.i || to.j < from.j)
    throw DomainError("destination is not South-East of the origin");
  std::vector<Step> steps(to.i - from.i, Step::kEast);
  steps.insert(steps.end(), to.j - from.j, Step::kSouth);
  return StaircasePath(grid, from, std::move(steps));
}

StaircasePath StaircasePath::south_then_east(const Grid& grid, CellIndex from, CellIndex to) {
  if (to.i < from.i || to.j < from.j)
    throw DomainError("destination is not South-East of the origin");
  std::vector<Step> steps(to.j - from.j, Step::kSouth);
  steps.insert(steps.end(), to.i - from.i, Step::kEast);
  return StaircasePath(grid, from, std::move(steps));
}

StaircasePath StaircasePath::from_east_rows(const Grid& grid, CellIndex from, CellIndex to,
                                            const std::vector<int>& east_row) {
  if (to.i < from.i || to.j < from.j)
    throw DomainError("destination is not South-East of the origin");
  if (east_row.size() != static_cast<std::size_t>(to.i - from.i))
    throw ParameterError("one east row per crossed column required");
  std::vector<Step> steps;
  int row = from.j;
  for (int r : east_row) {
    if (r < row || r > to.j) throw ParameterError("east rows must be nondecreasing and in range");
    steps.insert(steps.end(), r - row, Step::kSouth);
    steps.push_back(Step::kEast);
    row = r;
  }
  steps.insert(steps.end(), to.j - row, Step::kSouth);
  return StaircasePath(grid, from, std::move(steps));
}

CellIndex StaircasePath::destination() const {
  CellIndex c = origin_;
  for (Step s : steps_) (s == Step::kEast ? c.i : c.j)++;
  return c;
}

std::vector<CellIndex> StaircasePath::cells() const {
  std::vector<CellIndex> out{origin_};
  CellIndex c = origin_;
  for (Step s : steps_) {
    (s == Step::kEast ? c.i : c.j)++;
    out.push_back(c);
  }
  return out;
}

std::vector<Point> StaircasePath::vertices() const {
  std::vector<Point> out{grid_.center(origin_)};
  CellIndex c = origin_;
  for (std::size_t k = 0; k < steps_.size(); ++k) {
    (steps_[k] == Step::kEast ? c.i : c.j)++;
    const bool corner = k + 1 == steps_.size() || steps_[k + 1] != steps_[k];
    if (corner) out.push_back(grid_.center(c));
  }
  return out;
}

std::vector<int> StaircasePath::east_rows() const {
  std::vector<int> rows;
  int row = origin_.j;
  for (Step s : steps_) {
    if (s == Step::kEast)
      rows.push_back(row);
    else
      ++row;
  }
  return rows;
}

int StaircasePath::turns() const {
  int t = 0;
  for (std::size_t k = 1; k < steps_.size(); ++k) t += steps_[k] != steps_[k - 1];
  return t;
}

namespace {

// Candidate cell indices along one axis for coordinate u (in cell units):
// two cells when u sits on an interior cell boundary.
int axis_cells(double u, int n, int out[2]) {
  const double k = std::round(u);
  if (std::abs(u - k) <= 1e-9 && k > 0 && k < n) {
    out[0] = static_cast<int>(k) - 1;
    out[1] = static_cast<int>(k);
    return 2;
  }
  out[0] = std::clamp(static_cast<int>(std::floor(u)), 0, n - 1);
  return 1;
}

double piecewise_value(const ScalarField& f, Point p) {
  const Grid& g = f.grid();
  int is[2], js[2];
  const int ni = axis_cells(p.x1 / g.h1(), g.nx(), is);
  const int nj = axis_cells(p.x2 / g.h2(), g.ny(), js);
  double s = 0.0;
  for (int a = 0; a < ni; ++a)
    for (int b = 0; b < nj; ++b) s += f.at(is[a], js[b]);
  return s / (ni * nj);
}

void require_inside(const Grid& g, Point p) {
  if (!g.contains(p))
    throw DomainError("path point (" + std::to_string(p.x1) + ", " + std::to_string(p.x2) +
                      ") lies outside the domain");
}

}  // namespace

double segment_integral(const ScalarField& c1, const ScalarField& c2, Point from, Point to) {
  const Grid& g = c1.grid();
  if (!(c2.grid() == g)) throw ParameterError("cost fields live on different grids");
  const double d1 = to.x1 - from.x1;
  const double d2 = to.x2 - from.x2;
  if (d1 == 0.0 && d2 == 0.0) return 0.0;

  std::vector<double> ts{0.0, 1.0};
  auto add_crossings = [&](double p0, double d, double h, int n) {
    if (d == 0.0) return;
    const double lo = std::min(p0, p0 + d);
    const double hi = std::max(p0, p0 + d);
    for (int k = std::max(1, static_cast<int>(std::ceil(lo / h))); k < n && k * h < hi; ++k) {
      const double t = (k * h - p0) / d;
      if (t > 0.0 && t < 1.0) ts.push_back(t);
    }
  };
  add_crossings(from.x1, d1, g.h1(), g.nx());
  add_crossings(from.x2, d2, g.h2(), g.ny());
  std::sort(ts.begin(), ts.end());

  double total = 0.0;
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    const double dt = ts[k + 1] - ts[k];
    if (dt <= 0.0) continue;
    const double tm = 0.5 * (ts[k] + ts[k + 1]);
    const Point m{from.x1 + tm * d1, from.x2 + tm * d2};
    double v = 0.0;
    if (d1 != 0.0) v += piecewise_value(c1, m) * d1;
    if (d2 != 0.0) v += piecewise_value(c2, m) * d2;
    total += v * dt;
  }
  return total;
}

double line_integral(const ScalarField& c1, const ScalarField& c2, const Polyline& path) {
  const Grid& g = c1.grid();
  for (const Point& p : path) require_inside(g, p);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    if (path[k + 1].x1 < path[k].x1 || path[k + 1].x2 < path[k].x2)
      throw PreconditionError("path segment " + std::to_string(k) + " is not monotone (moves West or North)");
    total += segment_integral(c1, c2, path[k], path[k + 1]);
  }
  return total;
}

double line_integral(const ScalarField& c1, const ScalarField& c2, const StaircasePath& path) {
  if (!(path.grid() == c1.grid()))
    // A lattice path can still be integrated against a field on another grid
    // as long as its vertices fall inside that domain.
    for (const Point& p : path.vertices()) require_inside(c1.grid(), p);
  return line_integral(c1, c2, path.vertices());
}

void check_simple_loop(const Polyline& loop) {
  const std::size_t m = loop.size();
  if (m < 4) throw PreconditionError("a closed axis-aligned loop needs at least 4 corners");
  struct Seg {
    Point a, b;
    bool horizontal;
  };
  std::vector<Seg> segs;
  for (std::size_t k = 0; k < m; ++k) {
    const Point a = loop[k];
    const Point b = loop[(k + 1) % m];
    const bool h = a.x2 == b.x2;
    const bool v = a.x1 == b.x1;
    if (h && v) throw PreconditionError("loop has a zero-length segment");
    if (!h && !v) throw PreconditionError("loop segment is not axis-aligned");
    segs.push_back({a, b, h});
  }
  auto overlap = [](const Seg& s, const Seg& t) {
    const double sx0 = std::min(s.a.x1, s.b.x1), sx1 = std::max(s.a.x1, s.b.x1);
    const double sy0 = std::min(s.a.x2, s.b.x2), sy1 = std::max(s.a.x2, s.b.x2);
    const double tx0 = std::min(t.a.x1, t.b.x1), tx1 = std::max(t.a.x1, t.b.x1);
    const double ty0 = std::min(t.a.x2, t.b.x2), ty1 = std::max(t.a.x2, t.b.x2);
    return sx0 <= tx1 && tx0 <= sx1 && sy0 <= ty1 && ty0 <= sy1;
  };
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t l = k + 1; l < m; ++l) {
      const bool adjacent = l == k + 1 || (k == 0 && l == m - 1);
      if (!adjacent) {
        if (overlap(segs[k], segs[l])) throw PreconditionError("loop is not simple (self-intersection)");
        continue;
      }
      // Adjacent collinear segments pointing in opposite directions backtrack.
      const Seg& s = segs[k];
      const Seg& t = segs[l];
      if (s.horizontal == t.horizontal) {
        const double ds = s.horizontal ? s.b.x1 - s.a.x1 : s.b.x2 - s.a.x2;
        const double dt = t.horizontal ? t.b.x1 - t.a.x1 : t.b.x2 - t.a.x2;
        if (ds * dt < 0.0) throw PreconditionError("loop is not simple (backtracking segment)");
      }
    }
  }
}

int winding_number(const Polyline& loop, Point p) {
  int w = 0;
  const std::size_t m = loop.size();
  for (std::size_t k = 0; k < m; ++k) {
    const Point a = loop[k];
    const Point b = loop[(k + 1) % m];
    if (a.x1 != b.x1 || a.x1 <= p.x1) continue;
    if (a.x2 <= p.x2 && p.x2 < b.x2) ++w;
    if (b.x2 <= p.x2 && p.x2 < a.x2) --w;
  }
  return w;
}

namespace {

// d/dx of samples f(0..n-1) at index k: centered inside, second-order
// one-sided at the ends when three samples exist.
template <class F>
double diff3(F f, int k, int n, double h) {
  if (n < 2) return 0.0;
  if (k > 0 && k + 1 < n) return (f(k + 1) - f(k - 1)) / (2.0 * h);
  if (n == 2) return (f(1) - f(0)) / h;
  if (k == 0) return (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h);
  return (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * h);
}

}  // namespace

ScalarField curl_gap_values(const ScalarField& c1, const ScalarField& c2) {
  const Grid& g = c1.grid();
  if (!(c2.grid() == g)) throw ParameterError("cost fields live on different grids");
  const int nx = g.nx();
  const int ny = g.ny();
  std::vector<double> u(g.cell_count());
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double dc2 = diff3([&](int k) { return c2.at(k, j); }, i, nx, g.h1());
      const double dc1 = diff3([&](int k) { return c1.at(i, k); }, j, ny, g.h2());
      u[g.cell(i, j)] = dc2 - dc1;
    }
  }
  return ScalarField(g, std::move(u));
}

GreenCheck green_check(const ScalarField& c1, const ScalarField& c2, const Polyline& loop) {
  const Grid& g = c1.grid();
  check_simple_loop(loop);
  for (const Point& p : loop) require_inside(g, p);

  GreenCheck out;
  for (std::size_t k = 0; k < loop.size(); ++k)
    out.loop_integral += segment_integral(c1, c2, loop[k], loop[(k + 1) % loop.size()]);

  const ScalarField u = curl_gap_values(c1, c2);
  double lo1 = loop[0].x1, hi1 = lo1, lo2 = loop[0].x2, hi2 = lo2;
  for (const Point& p : loop) {
    lo1 = std::min(lo1, p.x1), hi1 = std::max(hi1, p.x1);
    lo2 = std::min(lo2, p.x2), hi2 = std::max(hi2, p.x2);
  }
  auto breaks = [](double lo, double hi, double h, int n, const std::vector<double>& extra) {
    std::vector<double> b{lo, hi};
    for (int k = 1; k < n; ++k)
      if (k * h > lo && k * h < hi) b.push_back(k * h);
    for (double e : extra) b.push_back(e);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
  };
  std::vector<double> xs, ys;
  for (const Point& p : loop) xs.push_back(p.x1), ys.push_back(p.x2);
  const auto bx = breaks(lo1, hi1, g.h1(), g.nx(), xs);
  const auto by = breaks(lo2, hi2, g.h2(), g.ny(), ys);
  for (std::size_t a = 0; a + 1 < by.size(); ++a) {
    for (std::size_t b = 0; b + 1 < bx.size(); ++b) {
      const Point m{0.5 * (bx[b] + bx[b + 1]), 0.5 * (by[a] + by[a + 1])};
      const int w = winding_number(loop, m);
      if (w == 0) continue;
      const CellIndex c = g.nearest_cell(m);
      out.area_integral += w * u.at(c.i, c.j) * (bx[b + 1] - bx[b]) * (by[a + 1] - by[a]);
    }
  }
  return out;
}

}  // namespace contnet
