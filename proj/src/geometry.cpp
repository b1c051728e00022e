#include "contnet/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "contnet/error.hpp"

namespace contnet {

namespace {

void require_south_east(const Grid& g, CellIndex o, CellIndex d) {
  auto inside = [&](CellIndex c) { return c.i >= 0 && c.j >= 0 && c.i < g.nx() && c.j < g.ny(); };
  if (!inside(o) || !inside(d)) throw DomainError("endpoint outside the grid");
  if (d.i < o.i || d.j < o.j)
    throw DomainError("destination is not reachable with East/South moves from the origin");
}

// Column pattern test: every `first` sign appears above every `second` sign.
bool ordered(const std::vector<int>& signs, int first, int second) {
  bool seen_second = false;
  for (int s : signs) {
    if (s == second) seen_second = true;
    if (s == first && seen_second) return false;
  }
  return true;
}

}  // namespace

const char* geometry_case_name(GeometryCase c) {
  switch (c) {
    case GeometryCase::kDegenerate: return "degenerate";
    case GeometryCase::kAllPositive: return "all_positive";
    case GeometryCase::kAllNegative: return "all_negative";
    case GeometryCase::kAttractorSplit: return "attractor_split";
    case GeometryCase::kRepellerSplit: return "repeller_split";
  }
  return "degenerate";
}

Polyline CurlGapField::ell() const {
  const Grid& g = u.grid();
  Polyline out;
  if (ell_x2.empty()) return out;
  out.push_back({0.0, ell_x2.front()});
  for (int i = 0; i < g.nx(); ++i) out.push_back({g.center(i, 0).x1, ell_x2[i]});
  out.push_back({g.a(), ell_x2.back()});
  return out;
}

double CurlGapField::ell_at(double x1) const {
  const Grid& g = u.grid();
  if (ell_x2.empty()) throw PreconditionError("no zero curve in this geometry");
  const double s = x1 / g.h1() - 0.5;
  if (s <= 0.0) return ell_x2.front();
  if (s >= g.nx() - 1) return ell_x2.back();
  const int i = static_cast<int>(std::floor(s));
  const double t = s - i;
  return (1.0 - t) * ell_x2[i] + t * ell_x2[i + 1];
}

CurlGapField curl_gap(const ScalarField& c1, const ScalarField& c2, double band_rel) {
  CurlGapField out(curl_gap_values(c1, c2));
  const Grid& g = out.u.grid();
  double umax = 0.0;
  for (double v : out.u.values()) umax = std::max(umax, std::abs(v));
  out.zero_band = band_rel * umax;
  out.sign.resize(g.cell_count());
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    const double v = out.u[c];
    out.sign[c] = std::abs(v) <= out.zero_band ? 0 : (v > 0 ? 1 : -1);
    out.positive += out.sign[c] > 0;
    out.negative += out.sign[c] < 0;
    out.zero += out.sign[c] == 0;
  }
  if (out.positive == 0 && out.negative == 0) {
    out.kind = GeometryCase::kDegenerate;
    return out;
  }
  if (out.negative == 0) {
    out.kind = GeometryCase::kAllPositive;
    return out;
  }
  if (out.positive == 0) {
    out.kind = GeometryCase::kAllNegative;
    return out;
  }

  bool attractor = true;
  bool repeller = true;
  std::vector<std::vector<int>> cols(g.nx());
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j < g.ny(); ++j) cols[i].push_back(out.sign[g.cell(i, j)]);
    attractor = attractor && ordered(cols[i], 1, -1);
    repeller = repeller && ordered(cols[i], -1, 1);
  }
  if (attractor) {
    out.kind = GeometryCase::kAttractorSplit;
  } else if (repeller) {
    out.kind = GeometryCase::kRepellerSplit;
  } else {
    // Classify by which sign dominates the northern half and flag it.
    int north = 0;
    for (int j = 0; j < g.ny() / 2; ++j)
      for (int i = 0; i < g.nx(); ++i) north += out.sign[g.cell(i, j)];
    out.kind = north >= 0 ? GeometryCase::kAttractorSplit : GeometryCase::kRepellerSplit;
    out.supported = false;
    out.reason = "the sign regions are not separated by a single curve";
    return out;
  }

  const int upper = out.kind == GeometryCase::kAttractorSplit ? 1 : -1;
  out.ell_x2.resize(g.nx());
  out.ell_row.resize(g.nx());
  for (int i = 0; i < g.nx(); ++i) {
    int last_upper = -1;
    int first_lower = g.ny();
    for (int j = 0; j < g.ny(); ++j) {
      if (cols[i][j] == upper) last_upper = j;
      if (cols[i][j] == -upper && first_lower == g.ny()) first_lower = j;
    }
    double x2;
    if (last_upper < 0 && first_lower == g.ny()) {
      x2 = std::nan("");
    } else if (last_upper < 0) {
      x2 = 0.0;
    } else if (first_lower == g.ny()) {
      x2 = g.b();
    } else if (first_lower == last_upper + 1) {
      const double ua = out.u.at(i, last_upper);
      const double ub = out.u.at(i, first_lower);
      const double xa = g.center(i, last_upper).x2;
      x2 = xa + g.h2() * ua / (ua - ub);
    } else {
      x2 = 0.5 * (g.center(i, last_upper + 1).x2 + g.center(i, first_lower - 1).x2);
    }
    out.ell_x2[i] = x2;
  }
  // Columns entirely inside the zero band take their neighbours' value.
  for (int i = 0; i < g.nx(); ++i) {
    if (!std::isnan(out.ell_x2[i])) continue;
    int l = i - 1, r = i + 1;
    while (l >= 0 && std::isnan(out.ell_x2[l])) --l;
    while (r < g.nx() && std::isnan(out.ell_x2[r])) ++r;
    if (l >= 0 && r < g.nx())
      out.ell_x2[i] = 0.5 * (out.ell_x2[l] + out.ell_x2[r]);
    else
      out.ell_x2[i] = l >= 0 ? out.ell_x2[l] : out.ell_x2[r];
  }
  for (int i = 0; i < g.nx(); ++i) {
    out.ell_row[i] = std::clamp(static_cast<int>(std::lround(out.ell_x2[i] / g.h2() - 0.5)), 0, g.ny() - 1);
    if (i > 0 && out.ell_x2[i] < out.ell_x2[i - 1] - 1e-12 * g.b()) {
      out.supported = false;
      out.reason = "zero curve is not monotone from North-West to South-East";
    }
  }
  return out;
}

StaircasePath point_to_point_path(const CurlGapField& f, CellIndex o, CellIndex d) {
  const Grid& g = f.u.grid();
  require_south_east(g, o, d);
  switch (f.kind) {
    case GeometryCase::kDegenerate:
    case GeometryCase::kAllNegative:
      return StaircasePath::east_then_south(g, o, d);
    case GeometryCase::kAllPositive:
      return StaircasePath::south_then_east(g, o, d);
    case GeometryCase::kRepellerSplit:
      return repeller_same_region_path(f, o, d);
    case GeometryCase::kAttractorSplit:
      break;
  }
  if (!f.supported) throw UnsupportedGeometry(f.reason);
  std::vector<int> rows;
  for (int i = o.i; i < d.i; ++i) rows.push_back(std::clamp(f.ell_row[i], o.j, d.j));
  return StaircasePath::from_east_rows(g, o, d, rows);
}

BoundaryCosts boundary_costs(const ScalarField& c1, const ScalarField& c2) {
  const Grid& g = c1.grid();
  BoundaryCosts b;
  for (int i = 0; i < g.nx(); ++i) b.south.push_back(c1.at(i, g.ny() - 1));
  for (int j = 0; j < g.ny(); ++j) b.east.push_back(c2.at(g.nx() - 1, j));
  return b;
}

BoundaryCosts zero_boundary_costs(const Grid& g) {
  return {std::vector<double>(g.nx(), 0.0), std::vector<double>(g.ny(), 0.0)};
}

StaircasePath point_to_boundary_path(const CurlGapField& f, CellIndex o, const BoundaryCosts& costs) {
  const Grid& g = f.u.grid();
  if (o.i < 0 || o.j < 0 || o.i >= g.nx() || o.j >= g.ny()) throw DomainError("origin outside the grid");
  if (costs.south.size() != static_cast<std::size_t>(g.nx()) ||
      costs.east.size() != static_cast<std::size_t>(g.ny()))
    throw ParameterError("boundary costs do not match the grid");
  auto all = [](const std::vector<double>& v, bool nonneg) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return nonneg ? x >= 0.0 : x <= 0.0; });
  };
  if (f.kind == GeometryCase::kAllPositive) {
    if (!all(costs.south, true))
      throw PreconditionError("U > 0 requires a nonnegative cost along the South boundary");
    if (!all(costs.east, false))
      throw PreconditionError("U > 0 requires a nonpositive cost along the East boundary");
    return StaircasePath::south_then_east(g, o, {o.i, g.ny() - 1});
  }
  if (f.kind == GeometryCase::kAllNegative || f.kind == GeometryCase::kDegenerate) {
    if (!all(costs.south, false))
      throw PreconditionError("U < 0 requires a nonpositive cost along the South boundary");
    if (!all(costs.east, true))
      throw PreconditionError("U < 0 requires a nonnegative cost along the East boundary");
    return StaircasePath::east_then_south(g, o, {g.nx() - 1, o.j});
  }
  throw UnsupportedGeometry("point-to-boundary paths need U of one sign");
}

int region_sign(const CurlGapField& f, CellIndex c) { return f.sign[f.u.grid().cell(c)]; }

StaircasePath repeller_same_region_path(const CurlGapField& f, CellIndex o, CellIndex d) {
  const Grid& g = f.u.grid();
  require_south_east(g, o, d);
  if (f.kind != GeometryCase::kRepellerSplit)
    throw PreconditionError("repeller paths need a repeller split geometry");
  const int so = region_sign(f, o);
  const int sd = region_sign(f, d);
  if (so == 0 || so != sd)
    throw UnsupportedGeometry("endpoints lie in different sign regions of a repeller split");
  StaircasePath p = so > 0 ? StaircasePath::south_then_east(g, o, d)
                           : StaircasePath::east_then_south(g, o, d);
  for (const CellIndex& c : p.cells())
    if (region_sign(f, c) == -so)
      throw UnsupportedGeometry("the L-path leaves the endpoints' sign region");
  return p;
}

Polyline continuum_path(const CurlGapField& f, Point o, Point d) {
  const Grid& g = f.u.grid();
  if (!g.contains(o) || !g.contains(d)) throw DomainError("endpoint outside the domain");
  if (d.x1 < o.x1 || d.x2 < o.x2)
    throw DomainError("destination is not South-East of the origin");
  Polyline p;
  auto push = [&](Point q) {
    if (p.empty() || !(p.back() == q)) p.push_back(q);
  };
  GeometryCase kind = f.kind;
  if (kind == GeometryCase::kRepellerSplit) {
    const int so = region_sign(f, g.nearest_cell(o));
    const int sd = region_sign(f, g.nearest_cell(d));
    if (so == 0 || so != sd)
      throw UnsupportedGeometry("endpoints lie in different sign regions of a repeller split");
    kind = so > 0 ? GeometryCase::kAllPositive : GeometryCase::kAllNegative;
  }
  switch (kind) {
    case GeometryCase::kDegenerate:
    case GeometryCase::kAllNegative:
      push(o);
      push({d.x1, o.x2});
      push(d);
      return p;
    case GeometryCase::kAllPositive:
      push(o);
      push({o.x1, d.x2});
      push(d);
      return p;
    default:
      break;
  }
  if (!f.supported) throw UnsupportedGeometry(f.reason);
  auto y = [&](double x1) { return std::clamp(f.ell_at(x1), o.x2, d.x2); };
  std::vector<double> xs{o.x1, d.x1};
  for (int i = 0; i < g.nx(); ++i) {
    const double xc = g.center(i, 0).x1;
    if (xc > o.x1 && xc < d.x1) xs.push_back(xc);
    // Kinks where the curve crosses the endpoint rows.
    if (i + 1 < g.nx()) {
      const double xa = xc, xb = g.center(i + 1, 0).x1;
      const double la = f.ell_x2[i], lb = f.ell_x2[i + 1];
      for (double level : {o.x2, d.x2}) {
        if ((la - level) * (lb - level) < 0.0) {
          const double xk = xa + (xb - xa) * (level - la) / (lb - la);
          if (xk > o.x1 && xk < d.x1) xs.push_back(xk);
        }
      }
    }
  }
  std::sort(xs.begin(), xs.end());
  push(o);
  for (double x : xs) push({x, y(x)});
  push(d);
  return p;
}

}  // namespace contnet
