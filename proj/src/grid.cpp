#include "contnet/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "contnet/error.hpp"
#include "contnet/kernels.hpp"

namespace contnet {

Grid::Grid(double a, double b, int nx, int ny) : a_(a), b_(b), nx_(nx), ny_(ny) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw ParameterError("grid extents must be positive and finite");
  if (nx < 2 || ny < 2) throw ParameterError("grid needs at least 2 cells per side");
  h1_ = a / nx;
  h2_ = b / ny;
}

bool Grid::contains(Point p) const {
  const double e1 = 1e-12 * a_;
  const double e2 = 1e-12 * b_;
  return p.x1 >= -e1 && p.x1 <= a_ + e1 && p.x2 >= -e2 && p.x2 <= b_ + e2;
}

CellIndex Grid::nearest_cell(Point p) const {
  const int i = std::clamp(static_cast<int>(std::floor(p.x1 / h1_)), 0, nx_ - 1);
  const int j = std::clamp(static_cast<int>(std::floor(p.x2 / h2_)), 0, ny_ - 1);
  return {i, j};
}

bool Grid::same_shape(const Grid& other) const {
  auto close = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(std::abs(x), std::abs(y)); };
  return nx_ == other.nx_ && ny_ == other.ny_ && close(a_, other.a_) && close(b_, other.b_);
}

ScalarField::ScalarField(Grid grid, std::vector<double> values, bool allow_unreachable)
    : grid_(grid), values_(std::move(values)), allow_unreachable_(allow_unreachable) {
  if (values_.size() != grid_.cell_count())
    throw ParameterError("scalar field has " + std::to_string(values_.size()) + " values, grid has " +
                         std::to_string(grid_.cell_count()) + " cells");
  for (double v : values_) {
    if (std::isfinite(v)) continue;
    if (allow_unreachable_ && v == kUnreachable) continue;
    throw ParameterError("scalar field contains a non-finite value");
  }
}

ScalarField ScalarField::constant(const Grid& grid, double v) {
  return ScalarField(grid, std::vector<double>(grid.cell_count(), v));
}

ScalarField ScalarField::sample(const Grid& grid, const std::function<double(Point)>& f) {
  std::vector<double> v(grid.cell_count());
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) v[grid.cell(i, j)] = f(grid.center(i, j));
  return ScalarField(grid, std::move(v));
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

FlowField::FlowField(Grid grid, int cls, std::vector<double> t1, std::vector<double> t2)
    : grid_(grid), cls_(cls), t1_(std::move(t1)), t2_(std::move(t2)) {
  if (t1_.size() != grid_.t1_count() || t2_.size() != grid_.t2_count())
    throw ParameterError("flow field face counts do not match the grid");
  for (double v : t1_)
    if (!std::isfinite(v)) throw ParameterError("flow field contains a non-finite value");
  for (double v : t2_)
    if (!std::isfinite(v)) throw ParameterError("flow field contains a non-finite value");
}

FlowField FlowField::zero(const Grid& grid, int cls) {
  return FlowField(grid, cls, std::vector<double>(grid.t1_count(), 0.0),
                   std::vector<double>(grid.t2_count(), 0.0));
}

double FlowField::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : t1_) m = std::min(m, v);
  for (double v : t2_) m = std::min(m, v);
  return m;
}

double FlowField::l2_norm() const {
  return std::sqrt(kernels::dot(t1_, t1_) + kernels::dot(t2_, t2_));
}

ScalarField divergence(const FlowField& flow) {
  const Grid& g = flow.grid();
  std::vector<double> out(g.cell_count());
  kernels::divergence(g.nx(), g.ny(), g.h1(), g.h2(), flow.t1(), flow.t2(), out);
  return ScalarField(g, std::move(out));
}

FlowField combine(double alpha, const FlowField& f, double beta, const FlowField& g) {
  if (!(f.grid() == g.grid())) throw ParameterError("flow fields live on different grids");
  std::vector<double> t1(f.t1().begin(), f.t1().end());
  std::vector<double> t2(f.t2().begin(), f.t2().end());
  for (std::size_t k = 0; k < t1.size(); ++k) t1[k] = alpha * t1[k] + beta * g.t1()[k];
  for (std::size_t k = 0; k < t2.size(); ++k) t2[k] = alpha * t2[k] + beta * g.t2()[k];
  return FlowField(f.grid(), f.cls(), std::move(t1), std::move(t2));
}

double relative_l2(const FlowField& f, const FlowField& g) {
  const double diff = combine(1.0, f, -1.0, g).l2_norm();
  return diff / std::max(g.l2_norm(), 1e-300);
}

double conservation_error(const FlowField& flow, const ScalarField& rho) {
  const ScalarField div = divergence(flow);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t c = 0; c < div.values().size(); ++c) {
    const double d = div[c] - rho[c];
    num += d * d;
    den += rho[c] * rho[c];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace contnet
