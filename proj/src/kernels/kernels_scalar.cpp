#include "cell_ops.hpp"

namespace contnet::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double dot3(const double* a, const double* b, const double* c, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i] * c[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void xpby(const double* x, double beta, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void stencil_apply(const Stencil5& op, const double* x, double* y) {
  for (int j = 0; j < op.ny; ++j)
    for (int i = 0; i < op.nx; ++i) y[j * op.nx + i] = detail::stencil_cell(op, x, i, j);
}

void divergence(int nx, int ny, double h1, double h2, const double* t1, const double* t2,
                double* out) {
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      out[j * nx + i] = detail::divergence_cell(nx, ny, h1, h2, t1, t2, i, j);
}

}  // namespace contnet::kernels::scalar
