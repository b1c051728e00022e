#pragma once

// Dense reference solve for affine costs, used as an independent oracle for
// the elliptic direct solver.

#include <Eigen/Dense>
#include <vector>

#include "contnet/grid.hpp"

namespace oracle {

using contnet::FlowField;
using contnet::Grid;
using contnet::ScalarField;

struct DenseAffine {
  std::vector<double> zeta;
  FlowField flow;
  double objective;
};

// Dense solve of the zero-flux affine optimality system, built from the cell
// coefficients: sum over neighbours a (z_c - z_n) / h^2 = rho + div b.
inline DenseAffine dense_affine(const ScalarField& k1, const ScalarField& k2, const ScalarField& h1,
                                const ScalarField& h2, const ScalarField& rho) {
  const Grid& g = rho.grid();
  const int nx = g.nx(), ny = g.ny();
  const int n = static_cast<int>(g.cell_count());
  auto mean = [](const ScalarField& f, int i, int j, int i2, int j2) { return 0.5 * (f.at(i, j) + f.at(i2, j2)); };
  Eigen::MatrixXd A = Eigen::MatrixXd::Ones(n, n);  // the ones fix the gauge
  Eigen::VectorXd rhs(n);
  std::vector<double> fa1(g.t1_count()), fb1(g.t1_count()), fa2(g.t2_count()), fb2(g.t2_count());
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) {
      const std::size_t f = g.t1_face(i, j);
      fa1[f] = 1.0 / mean(k1, i, j, i + 1, j);
      fb1[f] = mean(h1, i, j, i + 1, j) * fa1[f];
    }
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const std::size_t f = g.t2_face(i, j);
      fa2[f] = 1.0 / mean(k2, i, j, i, j + 1);
      fb2[f] = mean(h2, i, j, i, j + 1) * fa2[f];
    }
  const double s1 = 1.0 / (g.h1() * g.h1()), s2 = 1.0 / (g.h2() * g.h2());
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int c = static_cast<int>(g.cell(i, j));
      auto couple = [&](int i2, int j2, double coef) {
        const int d = static_cast<int>(g.cell(i2, j2));
        A(c, c) += coef;
        A(c, d) -= coef;
      };
      double divb = 0.0;
      if (i + 1 < nx) couple(i + 1, j, fa1[g.t1_face(i, j)] * s1), divb += fb1[g.t1_face(i, j)] / g.h1();
      if (i > 0) couple(i - 1, j, fa1[g.t1_face(i - 1, j)] * s1), divb -= fb1[g.t1_face(i - 1, j)] / g.h1();
      if (j + 1 < ny) couple(i, j + 1, fa2[g.t2_face(i, j)] * s2), divb += fb2[g.t2_face(i, j)] / g.h2();
      if (j > 0) couple(i, j - 1, fa2[g.t2_face(i, j - 1)] * s2), divb -= fb2[g.t2_face(i, j - 1)] / g.h2();
      rhs(c) = rho[static_cast<std::size_t>(c)] + divb;
    }
  const Eigen::VectorXd z = A.partialPivLu().solve(rhs);
  DenseAffine out{std::vector<double>(z.data(), z.data() + n), FlowField::zero(g), 0.0};
  std::vector<double> t1(g.t1_count()), t2(g.t2_count());
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) {
      const std::size_t f = g.t1_face(i, j);
      t1[f] = -(fa1[f] * (z(g.cell(i + 1, j)) - z(g.cell(i, j))) / g.h1() + fb1[f]);
      out.objective += (0.5 / fa1[f] * t1[f] * t1[f] + fb1[f] / fa1[f] * t1[f]) * g.cell_area();
    }
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const std::size_t f = g.t2_face(i, j);
      t2[f] = -(fa2[f] * (z(g.cell(i, j + 1)) - z(g.cell(i, j))) / g.h2() + fb2[f]);
      out.objective += (0.5 / fa2[f] * t2[f] * t2[f] + fb2[f] / fa2[f] * t2[f]) * g.cell_area();
    }
  out.flow = FlowField(g, 0, std::move(t1), std::move(t2));
  return out;
}

}  // namespace oracle
