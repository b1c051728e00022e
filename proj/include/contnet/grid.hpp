#pragma once

// Rectangular domain [0,a] x [0,b] split into nx-by-ny cells. x1 runs West to
// East, x2 runs North to South. Scalars live at cell centers; directional
// flows live on interior faces (staggered layout), so the boundary carries no
// flux.

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace contnet {

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct CellIndex {
  int i = 0;
  int j = 0;
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

class Grid {
 public:
  Grid(double a, double b, int nx, int ny);

  double a() const { return a_; }
  double b() const { return b_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double h1() const { return h1_; }
  double h2() const { return h2_; }
  double cell_area() const { return h1_ * h2_; }

  std::size_t cell_count() const { return static_cast<std::size_t>(nx_) * ny_; }
  // Interior vertical faces (carry T1) and interior horizontal faces (carry T2).
  std::size_t t1_count() const { return static_cast<std::size_t>(nx_ - 1) * ny_; }
  std::size_t t2_count() const { return static_cast<std::size_t>(nx_) * (ny_ - 1); }

  std::size_t cell(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }
  std::size_t cell(CellIndex c) const { return cell(c.i, c.j); }
  CellIndex cell_of(std::size_t index) const {
    return {static_cast<int>(index % nx_), static_cast<int>(index / nx_)};
  }
  // Face between (i,j) and (i+1,j).
  std::size_t t1_face(int i, int j) const { return static_cast<std::size_t>(j) * (nx_ - 1) + i; }
  // Face between (i,j) and (i,j+1).
  std::size_t t2_face(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }

  Point center(int i, int j) const { return {(i + 0.5) * h1_, (j + 0.5) * h2_}; }
  Point center(CellIndex c) const { return center(c.i, c.j); }

  bool contains(Point p) const;
  // Cell whose center is nearest to p (p clamped into the domain).
  CellIndex nearest_cell(Point p) const;

  // Same extents and counts, up to rounding in the extents.
  bool same_shape(const Grid& other) const;
  friend bool operator==(const Grid& x, const Grid& y) { return x.same_shape(y); }

 private:
  double a_, b_;
  int nx_, ny_;
  double h1_, h2_;
};

// Marks cells of a value field from which the target set cannot be reached.
inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

// One real per cell, row-major (row = constant x2).
class ScalarField {
 public:
  ScalarField(Grid grid, std::vector<double> values, bool allow_unreachable = false);

  static ScalarField constant(const Grid& grid, double v);
  // Samples f at cell centers.
  static ScalarField sample(const Grid& grid, const std::function<double(Point)>& f);

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t c) const { return values_[c]; }
  double at(int i, int j) const { return values_[grid_.cell(i, j)]; }
  bool allows_unreachable() const { return allow_unreachable_; }

  double min() const;
  double max() const;

 private:
  Grid grid_;
  std::vector<double> values_;
  bool allow_unreachable_;
};

// Per-class directional flows on interior faces, in bps/m. t1 flows West to
// East through vertical faces, t2 North to South through horizontal faces.
// Nonnegativity is a solver postcondition checked with `min_value()`; raw
// fields (e.g. an unconstrained elliptic solve) may hold negative entries.
class FlowField {
 public:
  FlowField(Grid grid, int cls, std::vector<double> t1, std::vector<double> t2);
  static FlowField zero(const Grid& grid, int cls = 0);

  const Grid& grid() const { return grid_; }
  int cls() const { return cls_; }
  std::span<const double> t1() const { return t1_; }
  std::span<const double> t2() const { return t2_; }

  double min_value() const;
  double l2_norm() const;

 private:
  Grid grid_;
  int cls_;
  std::vector<double> t1_, t2_;
};

// Cell value (t1_east - t1_west)/h1 + (t2_south - t2_north)/h2, zero flux
// through the outer boundary. Units bps/m^2.
ScalarField divergence(const FlowField& flow);

// alpha*f + beta*g, face by face.
FlowField combine(double alpha, const FlowField& f, double beta, const FlowField& g);

// Relative L2 distance ||f - g|| / max(||g||, tiny).
double relative_l2(const FlowField& f, const FlowField& g);

// ||div(flow) - rho||_2 / ||rho||_2, or the absolute norm when rho is zero.
double conservation_error(const FlowField& flow, const ScalarField& rho);

}  // namespace contnet
