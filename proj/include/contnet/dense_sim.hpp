#pragma once

// Microscopic model: n x n relay nodes on a regular lattice, each forwarding
// only East or South. Edge cost is the line integral of the cost field along
// the hop, so as n grows the cheapest relay chains approach continuum paths.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "contnet/grid.hpp"
#include "contnet/path.hpp"

namespace contnet {

struct NodeIndex {
  int i = 0;
  int j = 0;
  friend bool operator==(const NodeIndex&, const NodeIndex&) = default;
};

// Nodes sit at the cell centers of an n x n grid over the domain, so a
// network of density n routes exactly like the cell DP on that grid.
struct NodeNetwork {
  Grid lattice;
  std::vector<double> east;   // hop (i,j) -> (i+1,j), indexed like Grid::t1_face
  std::vector<double> south;  // hop (i,j) -> (i,j+1), indexed like Grid::t2_face

  int density() const { return lattice.nx(); }
  Point position(NodeIndex v) const { return lattice.center(v.i, v.j); }
  std::size_t node_count() const { return lattice.cell_count(); }
  std::size_t edge_count() const { return east.size() + south.size(); }
  // Lattice node nearest to p.
  NodeIndex nearest(Point p) const;
};

// c1, c2 are the (fine) cost fields over the domain; density >= 2.
NodeNetwork build_network(int density, const ScalarField& c1, const ScalarField& c2);

struct Route {
  StaircasePath path;
  double cost = 0.0;
};

// Cheapest East/South relay chain by one reverse topological sweep. Ties
// within 1e-12 relative are resolved East first. DomainError when dest is not
// South-East of origin.
Route route(const NodeNetwork& net, NodeIndex origin, NodeIndex dest);

// Symmetric Hausdorff distance, with each polyline sampled at spacing `step`
// and every sample measured exactly against the other polyline's segments.
double hausdorff(const Polyline& a, const Polyline& b, double step);

struct RouteComparison {
  int density = 0;
  Polyline route;
  double route_cost = 0.0;
  double reference_cost = 0.0;
  double hausdorff = 0.0;
  double cost_ratio = 0.0;  // route_cost / reference_cost
};

struct ConvergenceStudy {
  std::vector<RouteComparison> rows;  // in the order of `densities`
  Polyline reference;
  // True when the geometry oracle had no closed form and the finest route
  // served as reference instead.
  bool fallback = false;
  std::string fallback_reason;
};

// Runs route() for every density and compares against the continuum path of
// the geometry oracle on the cost fields' own grid.
ConvergenceStudy convergence_study(const ScalarField& c1, const ScalarField& c2, Point origin,
                                   Point dest, std::span<const int> densities);

}  // namespace contnet
