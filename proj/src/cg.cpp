#include "cg.hpp"

#include <cmath>
#include <vector>

namespace contnet::detail {

CgResult conjugate_gradient(const kernels::Stencil5& op, std::span<const double> rhs,
                            std::span<double> x, double tol, int max_iters) {
  const std::size_t n = rhs.size();
  std::vector<double> r(n), p(n), ap(n);
  kernels::stencil_apply(op, x, ap);
  for (std::size_t k = 0; k < n; ++k) r[k] = rhs[k] - ap[k];
  p = r;
  const double bnorm = std::sqrt(kernels::dot(rhs, rhs));
  CgResult res;
  if (bnorm == 0.0) {
    for (auto& v : x) v = 0.0;
    res.converged = true;
    return res;
  }
  double rr = kernels::dot(r, r);
  while (true) {
    res.relative_residual = std::sqrt(rr) / bnorm;
    if (res.relative_residual <= tol) {
      res.converged = true;
      return res;
    }
    if (res.iterations >= max_iters) return res;
    kernels::stencil_apply(op, p, ap);
    const double pap = kernels::dot(p, ap);
    if (!(pap > 0.0)) return res;
    const double alpha = rr / pap;
    kernels::axpy(alpha, p, x);
    kernels::axpy(-alpha, ap, r);
    const double rr_new = kernels::dot(r, r);
    kernels::xpby(r, rr_new / rr, p);
    rr = rr_new;
    ++res.iterations;
  }
}

}  // namespace contnet::detail
