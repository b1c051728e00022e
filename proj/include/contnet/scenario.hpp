#pragma once

#include <cstdint>
#include <vector>

#include "contnet/cost_model.hpp"
#include "contnet/grid.hpp"

namespace contnet {

// Search direction used by the Frank-Wolfe loop. All three share the
// all-or-nothing subproblem and the relative gap stopping rule.
//   plain      towards the all-or-nothing loading
//   conjugate  towards a Hessian-conjugate mix of it and the previous target
//   pairwise   from the most expensive loading inside the current support
//              towards the all-or-nothing loading (drops stale paths)
enum class FwVariant { kPlain, kConjugate, kPairwise };

const char* fw_variant_name(FwVariant v);

struct SolverOptions {
  double tol = 1e-4;          // relative gap for Frank-Wolfe, residual for CG
  int max_iters = 20000;
  double balance_tol = 1e-9;  // relative to sum |rho| * cell area
  std::uint64_t seed = 1;
  FwVariant variant = FwVariant::kPairwise;
};

// One demand class: rho > 0 marks sources, rho < 0 sinks (bps/m^2).
struct Scenario {
  Grid grid;
  CostModel cost;
  std::vector<ScalarField> rho;
  SolverOptions options;
};

// |sum rho * h1 h2| relative to sum |rho| * h1 h2, per class.
double balance_error(const ScalarField& rho);

// Throws PreconditionError citing the total rate when a class is unbalanced.
void check_balance(const Scenario& scenario);

}  // namespace contnet
