#include <algorithm>
#include <cmath>

#include "cg.hpp"
#include "contnet/assignment.hpp"
#include "contnet/error.hpp"

namespace contnet {

ResidualReport stationarity_residual(const FlowField& flow, const FaceValues& cost,
                                     const ScalarField& p, ResidualOptions opt) {
  const Grid& g = flow.grid();
  if (!(p.grid() == g)) throw ParameterError("potential lives on a different grid");
  if (cost.dir1.size() != g.t1_count() || cost.dir2.size() != g.t2_count())
    throw ParameterError("link costs do not match the grid faces");

  double tmax = 0.0;
  for (double v : flow.t1()) tmax = std::max(tmax, v);
  for (double v : flow.t2()) tmax = std::max(tmax, v);
  const double used_floor = opt.used_rel * tmax;

  ResidualReport rep;
  double csum = 0.0;
  for (double c : cost.dir1) csum += c;
  for (double c : cost.dir2) csum += c;
  rep.mean_cost = csum / static_cast<double>(cost.dir1.size() + cost.dir2.size());
  rep.tol = opt.tol > 0.0 ? opt.tol : 1e-3 * rep.mean_cost;

  int above = 0;
  double used_sum = 0.0;
  auto visit = [&](double t, double c, double here, double next, double h) {
    if (here == kUnreachable || next == kUnreachable) return;
    const double r = c + (next - here) / h;
    if (t > used_floor && t > 0.0) {
      ++rep.used_faces;
      used_sum += std::abs(r);
      rep.max_used = std::max(rep.max_used, std::abs(r));
      above += std::abs(r) > rep.tol;
    } else {
      ++rep.unused_faces;
      rep.max_unused_violation = std::max(rep.max_unused_violation, -r);
    }
  };
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i + 1 < g.nx(); ++i) {
      const std::size_t f = g.t1_face(i, j);
      visit(flow.t1()[f], cost.dir1[f], p.at(i, j), p.at(i + 1, j), g.h1());
    }
  for (int j = 0; j + 1 < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const std::size_t f = g.t2_face(i, j);
      visit(flow.t2()[f], cost.dir2[f], p.at(i, j), p.at(i, j + 1), g.h2());
    }
  if (rep.used_faces) {
    rep.mean_used = used_sum / rep.used_faces;
    rep.frac_used_above = static_cast<double>(above) / rep.used_faces;
  }
  return rep;
}

ResidualReport kkt_residual(const FlowField& flow, const CostModel& model, const ScalarField& zeta,
                            ResidualOptions opt) {
  return stationarity_residual(flow, link_costs(model.face_coefficients(), flow, Objective::kGlobal),
                               zeta, opt);
}

ResidualReport wardrop_residual(const FlowField& flow, const FlowField& total,
                                const CostModel& model, const ScalarField& value,
                                ResidualOptions opt) {
  return stationarity_residual(
      flow, link_costs(model.face_coefficients(), total, Objective::kWardrop), value, opt);
}

ScalarField estimate_multiplier(const FlowField& flow, const CostModel& model, double used_rel) {
  const Grid& g = flow.grid();
  const FaceValues cost = link_costs(model.face_coefficients(), flow, Objective::kGlobal);
  double tmax = 0.0;
  for (double v : flow.t1()) tmax = std::max(tmax, v);
  for (double v : flow.t2()) tmax = std::max(tmax, v);
  const double floor = used_rel * tmax;

  // Normal equations of min sum_used (c_f + dzeta/h)^2 + eps |zeta|^2.
  const std::size_t n = g.cell_count();
  kernels::Stencil5 op;
  op.nx = g.nx();
  op.ny = g.ny();
  op.diag.assign(n, 0.0);
  op.west.assign(n, 0.0);
  op.east.assign(n, 0.0);
  op.north.assign(n, 0.0);
  op.south.assign(n, 0.0);
  std::vector<double> rhs(n, 0.0);
  const double w1 = 1.0 / (g.h1() * g.h1());
  const double w2 = 1.0 / (g.h2() * g.h2());
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i + 1 < g.nx(); ++i) {
      const std::size_t f = g.t1_face(i, j);
      if (!(flow.t1()[f] > floor && flow.t1()[f] > 0.0)) continue;
      const std::size_t l = g.cell(i, j), r = g.cell(i + 1, j);
      op.diag[l] += w1;
      op.diag[r] += w1;
      op.east[l] += w1;
      op.west[r] += w1;
      rhs[l] += cost.dir1[f] / g.h1();
      rhs[r] -= cost.dir1[f] / g.h1();
    }
  for (int j = 0; j + 1 < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const std::size_t f = g.t2_face(i, j);
      if (!(flow.t2()[f] > floor && flow.t2()[f] > 0.0)) continue;
      const std::size_t u = g.cell(i, j), d = g.cell(i, j + 1);
      op.diag[u] += w2;
      op.diag[d] += w2;
      op.south[u] += w2;
      op.north[d] += w2;
      rhs[u] += cost.dir2[f] / g.h2();
      rhs[d] -= cost.dir2[f] / g.h2();
    }
  const double eps = 1e-10 * std::max(w1, w2);
  for (double& d : op.diag) d += eps;
  std::vector<double> zeta(n, 0.0);
  const auto cg = detail::conjugate_gradient(op, rhs, zeta, 1e-12, 50 * static_cast<int>(n));
  if (!cg.converged && cg.relative_residual > 1e-6)
    throw NumericalError("multiplier least squares did not converge");
  return ScalarField(g, std::move(zeta));
}

}  // namespace contnet
