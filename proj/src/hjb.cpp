#include "contnet/hjb.hpp"

#include <string>

#include "contnet/error.hpp"

namespace contnet {

CellMask mask_of_cells(const Grid& grid, std::span<const CellIndex> cells) {
  CellMask m(grid.cell_count(), 0);
  for (const CellIndex& c : cells) {
    if (c.i < 0 || c.j < 0 || c.i >= grid.nx() || c.j >= grid.ny())
      throw DomainError("mask cell outside the grid");
    m[grid.cell(c)] = 1;
  }
  return m;
}

CellMask south_east_boundary_mask(const Grid& grid) {
  CellMask m(grid.cell_count(), 0);
  for (int i = 0; i < grid.nx(); ++i) m[grid.cell(i, grid.ny() - 1)] = 1;
  for (int j = 0; j < grid.ny(); ++j) m[grid.cell(grid.nx() - 1, j)] = 1;
  return m;
}

ValueField solve_value_faces(const Grid& g, std::span<const double> dir1,
                             std::span<const double> dir2, const CellMask& target,
                             const CellMask* passable) {
  if (dir1.size() != g.t1_count() || dir2.size() != g.t2_count())
    throw ParameterError("edge weights do not match the grid faces");
  if (target.size() != g.cell_count()) throw ParameterError("target mask size mismatch");
  if (passable && passable->size() != g.cell_count())
    throw ParameterError("passable mask size mismatch");
  bool any = false;
  for (std::size_t c = 0; c < target.size(); ++c)
    any = any || (target[c] && (!passable || (*passable)[c]));
  if (!any) throw PreconditionError("target set is empty");

  const int nx = g.nx();
  const int ny = g.ny();
  std::vector<double> v(g.cell_count(), kUnreachable);
  std::vector<Move> policy(g.cell_count(), Move::kNone);
  CellMask tied(g.cell_count(), 0);
  int ties = 0;
  for (int j = ny - 1; j >= 0; --j) {
    for (int i = nx - 1; i >= 0; --i) {
      const std::size_t c = g.cell(i, j);
      if (passable && !(*passable)[c]) continue;
      if (target[c]) {
        v[c] = 0.0;
        continue;
      }
      const double ve = i + 1 < nx ? v[c + 1] : kUnreachable;
      const double vs = j + 1 < ny ? v[c + nx] : kUnreachable;
      const double ce = ve == kUnreachable ? kUnreachable : dir1[g.t1_face(i, j)] * g.h1() + ve;
      const double cs = vs == kUnreachable ? kUnreachable : dir2[g.t2_face(i, j)] * g.h2() + vs;
      if (ce == kUnreachable && cs == kUnreachable) continue;
      if (ce <= cs) {
        tied[c] = ce == cs;
        ties += tied[c];
        v[c] = ce;
        policy[c] = Move::kEast;
      } else {
        v[c] = cs;
        policy[c] = Move::kSouth;
      }
    }
  }
  return ValueField{ScalarField(g, std::move(v), true), target, std::move(policy), std::move(tied), ties};
}

ValueField solve_value(const ScalarField& c1, const ScalarField& c2, const CellMask& target,
                       const CellMask* passable) {
  const Grid& g = c1.grid();
  if (!(c2.grid() == g)) throw ParameterError("cost fields live on different grids");
  for (std::size_t c = 0; c < g.cell_count(); ++c)
    if (c1[c] < 0.0 || c2[c] < 0.0) throw ParameterError("DP costs must be nonnegative");
  std::vector<double> w1(g.t1_count()), w2(g.t2_count());
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i + 1 < g.nx(); ++i)
      w1[g.t1_face(i, j)] = 0.5 * (c1.at(i, j) + c1.at(i + 1, j));
  for (int j = 0; j + 1 < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) w2[g.t2_face(i, j)] = 0.5 * (c2.at(i, j) + c2.at(i, j + 1));
  return solve_value_faces(g, w1, w2, target, passable);
}

StaircasePath extract_path(const ValueField& value, CellIndex origin) {
  const Grid& g = value.value.grid();
  if (origin.i < 0 || origin.j < 0 || origin.i >= g.nx() || origin.j >= g.ny())
    throw DomainError("origin outside the grid");
  if (!value.reachable(origin))
    throw DomainError("origin (" + std::to_string(origin.i) + ", " + std::to_string(origin.j) +
                      ") cannot reach the target");
  std::vector<Step> steps;
  int ties = 0;
  CellIndex c = origin;
  while (!value.target[g.cell(c)]) {
    const std::size_t k = g.cell(c);
    ties += value.tied[k];
    if (value.policy[k] == Move::kEast) {
      steps.push_back(Step::kEast);
      ++c.i;
    } else {
      steps.push_back(Step::kSouth);
      ++c.j;
    }
  }
  StaircasePath path(g, origin, std::move(steps));
  path.east_ties = ties;
  return path;
}

FlowField all_or_nothing(const ValueField& value, const ScalarField& rho, int cls,
                         std::vector<double>* absorbed) {
  const Grid& g = value.value.grid();
  if (!(rho.grid() == g)) throw ParameterError("density lives on a different grid");
  const int nx = g.nx();
  std::vector<double> load(g.cell_count(), 0.0);
  std::vector<double> t1(g.t1_count(), 0.0), t2(g.t2_count(), 0.0);
  if (absorbed) absorbed->assign(g.cell_count(), 0.0);
  std::string stranded;
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    if (rho[c] > 0.0) load[c] += rho[c] * g.cell_area();
    if (load[c] == 0.0) continue;
    const CellIndex ci = g.cell_of(c);
    if (value.target[c] && value.value[c] == 0.0) {
      if (absorbed) (*absorbed)[c] += load[c];
      continue;
    }
    switch (value.policy[c]) {
      case Move::kEast:
        t1[g.t1_face(ci.i, ci.j)] += load[c] / g.h2();
        load[c + 1] += load[c];
        break;
      case Move::kSouth:
        t2[g.t2_face(ci.i, ci.j)] += load[c] / g.h1();
        load[c + nx] += load[c];
        break;
      case Move::kNone:
        if (stranded.size() < 200)
          stranded += " (" + std::to_string(ci.i) + "," + std::to_string(ci.j) + ")";
        break;
    }
  }
  if (!stranded.empty()) throw DomainError("demand cannot reach the target from cells" + stranded);
  return FlowField(g, cls, std::move(t1), std::move(t2));
}

}  // namespace contnet
