#include <cmath>
#include <string>

#include "cg.hpp"
#include "contnet/assignment.hpp"
#include "contnet/error.hpp"
#include "contnet/field_io.hpp"
#include "contnet/kernels.hpp"

namespace contnet {

AssignmentResult solve_affine_direct(const Scenario& s) {
  check_balance(s);
  if (s.cost.kind() != CostKind::kAffine)
    throw PreconditionError("the direct elliptic solve needs an affine cost model");
  if (s.rho.size() != 1)
    throw PreconditionError("the direct elliptic solve handles a single demand class");
  const Grid& g = s.grid;
  const int nx = g.nx();
  const int ny = g.ny();
  const FaceCoefficients fc = s.cost.face_coefficients();

  std::vector<double> a1(g.t1_count()), b1(g.t1_count()), a2(g.t2_count()), b2(g.t2_count());
  for (std::size_t f = 0; f < a1.size(); ++f) {
    a1[f] = 1.0 / fc.dir1[f].k;
    b1[f] = fc.dir1[f].h / fc.dir1[f].k;
  }
  for (std::size_t f = 0; f < a2.size(); ++f) {
    a2[f] = 1.0 / fc.dir2[f].k;
    b2[f] = fc.dir2[f].h / fc.dir2[f].k;
  }

  // div(-a grad zeta) = rho + div(b) with zero flux through the boundary.
  kernels::Stencil5 op;
  op.nx = nx;
  op.ny = ny;
  const std::size_t n = g.cell_count();
  op.diag.assign(n, 0.0);
  op.west.assign(n, 0.0);
  op.east.assign(n, 0.0);
  op.north.assign(n, 0.0);
  op.south.assign(n, 0.0);
  const double s1 = 1.0 / (g.h1() * g.h1());
  const double s2 = 1.0 / (g.h2() * g.h2());
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t c = g.cell(i, j);
      if (i > 0) op.west[c] = a1[g.t1_face(i - 1, j)] * s1;
      if (i + 1 < nx) op.east[c] = a1[g.t1_face(i, j)] * s1;
      if (j > 0) op.north[c] = a2[g.t2_face(i, j - 1)] * s2;
      if (j + 1 < ny) op.south[c] = a2[g.t2_face(i, j)] * s2;
      op.diag[c] = op.west[c] + op.east[c] + op.north[c] + op.south[c];
    }
  }
  std::vector<double> rhs(n);
  kernels::divergence(nx, ny, g.h1(), g.h2(), b1, b2, rhs);
  for (std::size_t c = 0; c < n; ++c) rhs[c] += s.rho[0][c];
  double mean = 0.0;
  for (double v : rhs) mean += v;
  mean /= static_cast<double>(n);
  for (double& v : rhs) v -= mean;

  std::vector<double> zeta(n, 0.0);
  const double tol = std::min(s.options.tol, 1e-10);
  const detail::CgResult cg =
      detail::conjugate_gradient(op, rhs, zeta, tol, std::max(s.options.max_iters, 20 * static_cast<int>(n)));
  if (!cg.converged)
    throw NumericalError("conjugate gradients stalled at relative residual " +
                         format_double(cg.relative_residual) + " after " +
                         std::to_string(cg.iterations) + " iterations");
  mean = 0.0;
  for (double v : zeta) mean += v;
  mean /= static_cast<double>(n);
  for (double& v : zeta) v -= mean;

  std::vector<double> t1(g.t1_count()), t2(g.t2_count());
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) {
      const std::size_t f = g.t1_face(i, j);
      t1[f] = -(a1[f] * (zeta[g.cell(i + 1, j)] - zeta[g.cell(i, j)]) / g.h1() + b1[f]);
    }
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const std::size_t f = g.t2_face(i, j);
      t2[f] = -(a2[f] * (zeta[g.cell(i, j + 1)] - zeta[g.cell(i, j)]) / g.h2() + b2[f]);
    }

  AssignmentResult res;
  res.objective = Objective::kGlobal;
  res.flows.push_back(FlowField(g, 0, std::move(t1), std::move(t2)));
  res.objective_value = objective_value(fc, res.flows[0], Objective::kGlobal);
  res.total_cost = res.objective_value;
  res.multiplier = ScalarField(g, std::move(zeta));
  res.iterations = 1;
  res.converged = true;
  res.cg_iterations = cg.iterations;
  res.cg_residual = cg.relative_residual;
  res.min_flow = std::min(0.0, res.flows[0].min_value());
  if (res.min_flow < 0.0)
    res.notes.push_back("recovered flow is negative on some faces (min " +
                        format_double(res.min_flow) + "); the positive-flow assumption fails");
  return res;
}

}  // namespace contnet
