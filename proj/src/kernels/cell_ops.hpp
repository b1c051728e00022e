#pragma once

// Per-cell bodies shared by the scalar kernels and the AVX2 edge handling, so
// both paths round identically.

#include "contnet/kernels.hpp"

namespace contnet::kernels::detail {

inline double stencil_cell(const Stencil5& op, const double* x, int i, int j) {
  const int nx = op.nx;
  const int c = j * nx + i;
  double v = op.diag[c] * x[c];
  if (i > 0) v = v - op.west[c] * x[c - 1];
  if (i + 1 < nx) v = v - op.east[c] * x[c + 1];
  if (j > 0) v = v - op.north[c] * x[c - nx];
  if (j + 1 < op.ny) v = v - op.south[c] * x[c + nx];
  return v;
}

inline double divergence_cell(int nx, int ny, double h1, double h2, const double* t1,
                              const double* t2, int i, int j) {
  const double east = i + 1 < nx ? t1[j * (nx - 1) + i] : 0.0;
  const double west = i > 0 ? t1[j * (nx - 1) + i - 1] : 0.0;
  const double south = j + 1 < ny ? t2[j * nx + i] : 0.0;
  const double north = j > 0 ? t2[(j - 1) * nx + i] : 0.0;
  return (east - west) / h1 + (south - north) / h2;
}

}  // namespace contnet::kernels::detail
