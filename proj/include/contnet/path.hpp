#pragma once

#include <cstddef>
#include <vector>

#include "contnet/grid.hpp"

namespace contnet {

enum class Step : unsigned char { kEast, kSouth };

// Monotone lattice path through cell centers: every step moves one cell East
// (+x1) or South (+x2).
class StaircasePath {
 public:
  StaircasePath(Grid grid, CellIndex origin, std::vector<Step> steps);

  // Horizontal run first, then vertical (or the reverse).
  static StaircasePath east_then_south(const Grid& grid, CellIndex from, CellIndex to);
  static StaircasePath south_then_east(const Grid& grid, CellIndex from, CellIndex to);
  // Path that leaves column i (from < i < to.i) at row east_row[i - from.i];
  // rows must be nondecreasing and within [from.j, to.j].
  static StaircasePath from_east_rows(const Grid& grid, CellIndex from, CellIndex to,
                                      const std::vector<int>& east_row);

  const Grid& grid() const { return grid_; }
  CellIndex origin() const { return origin_; }
  CellIndex destination() const;
  const std::vector<Step>& steps() const { return steps_; }
  std::vector<CellIndex> cells() const;
  // Cell centers at every corner of the path, including both ends.
  std::vector<Point> vertices() const;
  // Row at which the path leaves each column it crosses eastwards.
  std::vector<int> east_rows() const;
  int turns() const;

  // Number of DP decisions resolved by the East-first tie rule while this path
  // was extracted (0 for constructed paths).
  int east_ties = 0;

  friend bool operator==(const StaircasePath& x, const StaircasePath& y) {
    return x.origin_ == y.origin_ && x.steps_ == y.steps_;
  }

 private:
  Grid grid_;
  CellIndex origin_;
  std::vector<Step> steps_;
};

// Sequence of points joined by straight segments.
using Polyline = std::vector<Point>;

// Integral of c1 dx1 + c2 dx2 along one segment with c1, c2 piecewise constant
// per cell. Where the segment runs exactly along a cell boundary the two
// adjacent cells are averaged.
double segment_integral(const ScalarField& c1, const ScalarField& c2, Point from, Point to);

// Cost of a monotone path (every segment moves in +x1 and/or +x2). Throws
// DomainError if a vertex leaves the domain, PreconditionError if a segment
// moves West or North.
double line_integral(const ScalarField& c1, const ScalarField& c2, const Polyline& path);
double line_integral(const ScalarField& c1, const ScalarField& c2, const StaircasePath& path);

// Closed axis-aligned loop given by its corners (the closing segment back to
// the first point is implied). Throws PreconditionError for diagonal segments
// and for loops that touch or cross themselves.
void check_simple_loop(const Polyline& loop);

// Winding number of the loop around p (positive orientation: x1 then x2).
int winding_number(const Polyline& loop, Point p);

// Curl gap U = d(c2)/dx1 - d(c1)/dx2 by centered differences, one-sided on
// the boundary (second order when the row or column has three cells).
ScalarField curl_gap_values(const ScalarField& c1, const ScalarField& c2);

struct GreenCheck {
  double loop_integral = 0.0;
  double area_integral = 0.0;
};

// Circulation of c around the loop and the integral of U over the region it
// encloses (winding-weighted). For a positively oriented loop both agree up to
// quadrature error.
GreenCheck green_check(const ScalarField& c1, const ScalarField& c2, const Polyline& loop);

}  // namespace contnet
