// Compiled with -mavx2 (no -mfma); only reached after a CPUID check.

#include <immintrin.h>

#include "cell_ops.hpp"

namespace contnet::kernels::avx2 {

namespace {

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    acc1 = _mm256_add_pd(acc1,
                         _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double dot3(const double* a, const double* b, const double* c, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(ab, _mm256_loadu_pd(c + i)));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i] * c[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, _mm256_loadu_pd(x + i))));
  }
  for (; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void xpby(const double* x, double beta, double* y, std::size_t n) {
  const __m256d vb = _mm256_set1_pd(beta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_mul_pd(vb, vy)));
  }
  for (; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void stencil_apply(const Stencil5& op, const double* x, double* y) {
  const int nx = op.nx;
  const int ny = op.ny;
  for (int j = 0; j < ny; ++j) {
    int i = 0;
    if (j > 0 && j + 1 < ny) {
      const double* d = op.diag.data();
      const double* w = op.west.data();
      const double* e = op.east.data();
      const double* n = op.north.data();
      const double* s = op.south.data();
      // The first and last cell of a row read a neighbour row through a zero
      // coefficient, which leaves the value unchanged.
      for (; i + 4 <= nx; i += 4) {
        const int c = j * nx + i;
        __m256d v = _mm256_mul_pd(_mm256_loadu_pd(d + c), _mm256_loadu_pd(x + c));
        v = _mm256_sub_pd(v, _mm256_mul_pd(_mm256_loadu_pd(w + c), _mm256_loadu_pd(x + c - 1)));
        v = _mm256_sub_pd(v, _mm256_mul_pd(_mm256_loadu_pd(e + c), _mm256_loadu_pd(x + c + 1)));
        v = _mm256_sub_pd(v, _mm256_mul_pd(_mm256_loadu_pd(n + c), _mm256_loadu_pd(x + c - nx)));
        v = _mm256_sub_pd(v, _mm256_mul_pd(_mm256_loadu_pd(s + c), _mm256_loadu_pd(x + c + nx)));
        _mm256_storeu_pd(y + c, v);
      }
    }
    for (; i < nx; ++i) y[j * nx + i] = detail::stencil_cell(op, x, i, j);
  }
}

void divergence(int nx, int ny, double h1, double h2, const double* t1, const double* t2,
                double* out) {
  const __m256d vh1 = _mm256_set1_pd(h1);
  const __m256d vh2 = _mm256_set1_pd(h2);
  for (int j = 0; j < ny; ++j) {
    int i = 0;
    if (j > 0 && j + 1 < ny) {
      out[j * nx] = detail::divergence_cell(nx, ny, h1, h2, t1, t2, 0, j);
      i = 1;
      for (; i + 4 <= nx - 1; i += 4) {
        const double* f1 = t1 + j * (nx - 1) + i;
        const double* south = t2 + j * nx + i;
        const double* north = t2 + (j - 1) * nx + i;
        const __m256d dx = _mm256_div_pd(
            _mm256_sub_pd(_mm256_loadu_pd(f1), _mm256_loadu_pd(f1 - 1)), vh1);
        const __m256d dy =
            _mm256_div_pd(_mm256_sub_pd(_mm256_loadu_pd(south), _mm256_loadu_pd(north)), vh2);
        _mm256_storeu_pd(out + j * nx + i, _mm256_add_pd(dx, dy));
      }
    }
    for (; i < nx; ++i) out[j * nx + i] = detail::divergence_cell(nx, ny, h1, h2, t1, t2, i, j);
  }
}

}  // namespace contnet::kernels::avx2
