#include "contnet/scenario.hpp"

#include <cmath>
#include <string>

#include "contnet/error.hpp"
#include "contnet/field_io.hpp"

namespace contnet {

const char* fw_variant_name(FwVariant v) {
  switch (v) {
    case FwVariant::kPlain: return "plain";
    case FwVariant::kConjugate: return "conjugate";
    case FwVariant::kPairwise: return "pairwise";
  }
  return "plain";
}

double balance_error(const ScalarField& rho) {
  double net = 0.0;
  double gross = 0.0;
  for (double v : rho.values()) {
    net += v;
    gross += std::abs(v);
  }
  return gross > 0.0 ? std::abs(net) / gross : 0.0;
}

void check_balance(const Scenario& scenario) {
  for (std::size_t j = 0; j < scenario.rho.size(); ++j) {
    const ScalarField& rho = scenario.rho[j];
    if (!(rho.grid() == scenario.grid))
      throw PreconditionError("class " + std::to_string(j) + " density lives on a different grid");
    const double err = balance_error(rho);
    if (err > scenario.options.balance_tol) {
      double net = 0.0;
      for (double v : rho.values()) net += v * scenario.grid.cell_area();
      throw PreconditionError("class " + std::to_string(j) +
                              ": total rate of sources must equal total rate of sinks "
                              "(net rate " + format_double(net) + ", relative imbalance " +
                              format_double(err) + ")");
    }
  }
}

}  // namespace contnet
