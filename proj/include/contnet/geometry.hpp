#pragma once

// Closed-form optimal staircase paths for congestion-independent costs, read
// off the sign of the curl gap U = dc2/dx1 - dc1/dx2. With x1 pointing East
// and x2 pointing South, a loop that goes East, then South, then back is
// positively oriented, so Green's theorem gives
//   cost(East-first) - cost(South-first) = integral of U over the rectangle.
// Hence:
//   U < 0 everywhere   East first, then South
//   U > 0 everywhere   South first, then East
//   U > 0 north of a curve l and U < 0 south of it (attractor): paths are
//     drawn onto l and follow it between the endpoints' rows
//   U < 0 north of l, U > 0 south (repeller): only same-region queries.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "contnet/grid.hpp"
#include "contnet/path.hpp"

namespace contnet {

enum class GeometryCase { kDegenerate, kAllPositive, kAllNegative, kAttractorSplit, kRepellerSplit };

const char* geometry_case_name(GeometryCase c);

struct CurlGapField {
  explicit CurlGapField(ScalarField field) : u(std::move(field)) {}

  ScalarField u;
  std::vector<std::int8_t> sign;  // -1, 0 (inside the zero band), +1 per cell
  double zero_band = 0.0;
  GeometryCase kind = GeometryCase::kDegenerate;
  int positive = 0;
  int negative = 0;
  int zero = 0;
  // Split cases: x2 of the zero curve at each column center (0 or b when the
  // column has a single sign) and the row whose center is nearest to it.
  std::vector<double> ell_x2;
  std::vector<int> ell_row;
  // False when the split is not a single monotone North-West to South-East
  // curve; `reason` says why.
  bool supported = true;
  std::string reason;

  // Zero curve through the column centers, extended flat to both sides.
  Polyline ell() const;
  // Linear interpolation of the zero curve at abscissa x1.
  double ell_at(double x1) const;
};

// Zero band is band_rel * max|U|.
CurlGapField curl_gap(const ScalarField& c1, const ScalarField& c2, double band_rel = 1e-9);

// Lattice path between cell centers. Throws DomainError when dest is not
// South-East of origin and UnsupportedGeometry for cross-region repeller
// queries and unsupported curves. The degenerate case (U within the zero band
// everywhere, all staircases cost the same) returns the East-first path.
StaircasePath point_to_point_path(const CurlGapField& field, CellIndex origin, CellIndex dest);

// Costs of travelling along the two exit boundaries: c1 along the South edge
// (row ny-1, one value per column) and c2 along the East edge (column nx-1,
// one value per row).
struct BoundaryCosts {
  std::vector<double> south;
  std::vector<double> east;
};

BoundaryCosts boundary_costs(const ScalarField& c1, const ScalarField& c2);
BoundaryCosts zero_boundary_costs(const Grid& grid);

// Straight path from origin to the South edge (U > 0; needs cost >= 0 along
// the South edge and <= 0 along the East edge) or to the East edge (U < 0 or
// degenerate; signs reversed). PreconditionError names the violated sign
// condition; split cases are unsupported.
StaircasePath point_to_boundary_path(const CurlGapField& field, CellIndex origin,
                                     const BoundaryCosts& costs);

// Repeller case with both endpoints strictly inside one sign region: the
// L-path for that region's sign. Throws UnsupportedGeometry when the
// endpoints lie in different regions or the L-path leaves the region.
StaircasePath repeller_same_region_path(const CurlGapField& field, CellIndex origin,
                                        CellIndex dest);

// Sign (+1, -1, 0 inside the zero band) of a cell.
int region_sign(const CurlGapField& field, CellIndex c);

// Continuum counterpart of point_to_point_path between arbitrary points:
// L-paths for uniform sign, and x2(x1) = clamp(l(x1), x2o, x2d) joined to the
// endpoints by South-going segments in the attractor case.
Polyline continuum_path(const CurlGapField& field, Point origin, Point dest);

}  // namespace contnet
