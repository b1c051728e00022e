#pragma once

// Data-parallel inner loops shared by the solvers. Each kernel has a scalar
// reference implementation and an AVX2 variant; the variant is picked once at
// runtime from CPUID and can be overridden for equivalence testing.
//
// Elementwise kernels (axpy, xpby, stencil_apply, divergence) are bitwise
// identical across ISAs: no FMA contraction, same operation order. Reductions
// (dot, dot3) differ only by summation order.

#include <cstddef>
#include <span>
#include <vector>

namespace contnet::kernels {

enum class Isa { kScalar, kAvx2 };

bool isa_available(Isa isa);
Isa active_isa();
const char* isa_name(Isa isa);

// Pins the dispatch target. Throws ParameterError if the CPU lacks `isa`.
void force_isa(Isa isa);
// Restores CPUID-based selection.
void reset_isa();

double dot(std::span<const double> a, std::span<const double> b);
// sum_i a[i] * b[i] * c[i]
double dot3(std::span<const double> a, std::span<const double> b, std::span<const double> c);
// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
// y = x + beta * y
void xpby(std::span<const double> x, double beta, std::span<double> y);

// Five-point operator on an nx-by-ny row-major cell array:
//   y[c] = diag[c]*x[c] - west[c]*x[c-1] - east[c]*x[c+1]
//          - north[c]*x[c-nx] - south[c]*x[c+nx]
// Coefficients pointing outside the grid must be zero.
struct Stencil5 {
  int nx = 0;
  int ny = 0;
  std::vector<double> diag, west, east, north, south;
};

void stencil_apply(const Stencil5& op, std::span<const double> x, std::span<double> y);

// Staggered divergence with zero flux through the outer boundary. t1 holds
// (nx-1)*ny interior vertical faces, t2 holds nx*(ny-1) interior horizontal
// faces, both row-major.
void divergence(int nx, int ny, double h1, double h2, std::span<const double> t1,
                std::span<const double> t2, std::span<double> out);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double dot3(const double* a, const double* b, const double* c, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void xpby(const double* x, double beta, double* y, std::size_t n);
void stencil_apply(const Stencil5& op, const double* x, double* y);
void divergence(int nx, int ny, double h1, double h2, const double* t1, const double* t2,
                double* out);
}  // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double dot3(const double* a, const double* b, const double* c, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void xpby(const double* x, double beta, double* y, std::size_t n);
void stencil_apply(const Stencil5& op, const double* x, double* y);
void divergence(int nx, int ny, double h1, double h2, const double* t1, const double* t2,
                double* out);
}  // namespace avx2

}  // namespace contnet::kernels
