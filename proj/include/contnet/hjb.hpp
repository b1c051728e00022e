#pragma once

// Discrete dynamic programming for East/South moves:
//   V(i,j) = min(w1(i,j) + V(i+1,j), w2(i,j) + V(i,j+1)),  V = 0 on the target.
// The move graph is acyclic, so one reverse sweep solves it exactly.

#include <cstdint>
#include <span>
#include <vector>

#include "contnet/grid.hpp"
#include "contnet/path.hpp"

namespace contnet {

using CellMask = std::vector<std::uint8_t>;

CellMask mask_of_cells(const Grid& grid, std::span<const CellIndex> cells);
// Cells along the South (max x2) and East (max x1) edges.
CellMask south_east_boundary_mask(const Grid& grid);

enum class Move : std::uint8_t { kNone, kEast, kSouth };

struct ValueField {
  ScalarField value;     // kUnreachable where the target cannot be reached
  CellMask target;
  std::vector<Move> policy;  // kNone on targets and unreachable cells
  CellMask tied;         // 1 where both moves cost the same (East taken)
  int east_ties = 0;

  bool reachable(CellIndex c) const { return value.at(c.i, c.j) != kUnreachable; }
};

// Edge weights per unit length on interior faces (dir1 like FlowField::t1,
// dir2 like t2). An East move across face f costs dir1[f] * h1.
ValueField solve_value_faces(const Grid& grid, std::span<const double> dir1,
                             std::span<const double> dir2, const CellMask& target,
                             const CellMask* passable = nullptr);

// Cell cost fields; the cost of a move is the mean of the two cells times the
// spacing, i.e. the midpoint line integral between the two centers. Cells
// with passable[c] == 0 are neither entered nor left.
ValueField solve_value(const ScalarField& c1, const ScalarField& c2, const CellMask& target,
                       const CellMask* passable = nullptr);

// Follows the stored policy (East on ties) from origin to the target.
StaircasePath extract_path(const ValueField& value, CellIndex origin);

// Loads every source cell (rho > 0, rate rho * h1 * h2) onto its optimal path.
// Flow is absorbed at the first target cell reached; `absorbed` receives the
// absorbed rate per cell when given.
FlowField all_or_nothing(const ValueField& value, const ScalarField& rho, int cls = 0,
                         std::vector<double>* absorbed = nullptr);

}  // namespace contnet
