#pragma once

#include <span>

#include "contnet/kernels.hpp"

namespace contnet::detail {

struct CgResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

// Conjugate gradients for a symmetric positive (semi)definite five-point
// operator. For a singular operator the right-hand side must be consistent.
// x holds the initial guess on entry.
CgResult conjugate_gradient(const kernels::Stencil5& op, std::span<const double> rhs,
                            std::span<double> x, double tol, int max_iters);

}  // namespace contnet::detail
