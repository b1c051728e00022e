#pragma once

// Per-direction packet cost families. Each direction i has a per-packet cost
// c_i(x, T_i) depending on the total directional flow through the point:
//   independent  c_i = c_i(x)
//   monomial     c_i = k_i(x) T_i^beta
//   affine       c_i = k_i(x) T_i / 2 + h_i(x)
// local transport cost g = c_1 T_1 + c_2 T_2, marginal cost dg/dT_i, and the
// Beckmann potential psi = sum_i integral_0^T_i c_i(x, s) ds.

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "contnet/grid.hpp"

namespace contnet {

enum class CostKind { kIndependent, kMonomial, kAffine };

const char* cost_kind_name(CostKind kind);

// Node density needed to carry a flow of magnitude m when transport capacity
// scales as f(lambda) = lambda^p: returns k * m^(1/p).
double cost_from_capacity_scaling(double p, double k, double m);

// Coefficients of one direction at one location: `k` is the cost field for
// independent models and the congestion slope otherwise; `h` the affine offset.
struct DirCoeff {
  double k = 0.0;
  double h = 0.0;
};

// t^e with exact products for the small integer exponents used in practice.
inline double small_pow(double t, double e) {
  if (e == 1.0) return t;
  if (e == 2.0) return t * t;
  if (e == 3.0) return t * t * t;
  return std::pow(t, e);
}

// Scalar per-direction formulas. T must be nonnegative (unchecked).
struct CostLaw {
  CostKind kind = CostKind::kIndependent;
  double beta = 1.0;

  double packet(DirCoeff c, double t) const;
  double marginal(DirCoeff c, double t) const;
  // c(T) * T
  double local(DirCoeff c, double t) const;
  double potential(DirCoeff c, double t) const;
};

// Face-centred coefficients: each interior face takes the mean of its two
// adjacent cells. dir1 is indexed like FlowField::t1, dir2 like t2.
struct FaceCoefficients {
  CostLaw law;
  std::vector<DirCoeff> dir1, dir2;
};

class CostModel {
 public:
  static CostModel independent(ScalarField c1, ScalarField c2);
  static CostModel monomial(ScalarField k1, ScalarField k2, double beta);
  static CostModel affine(ScalarField k1, ScalarField k2, ScalarField h1, ScalarField h2);

  CostKind kind() const { return law_.kind; }
  const CostLaw& law() const { return law_; }
  double beta() const { return law_.beta; }
  const Grid& grid() const { return k1_.grid(); }
  bool congestion_dependent() const { return law_.kind != CostKind::kIndependent; }
  // Monomial with beta < 1 is accepted but not convex.
  bool low_beta() const { return law_.kind == CostKind::kMonomial && law_.beta < 1.0; }
  bool convex() const { return !low_beta(); }

  // Cost (independent) or slope field of a direction.
  const ScalarField& k1() const { return k1_; }
  const ScalarField& k2() const { return k2_; }
  // Affine offsets; empty for the other kinds.
  const std::optional<ScalarField>& h1() const { return h1_; }
  const std::optional<ScalarField>& h2() const { return h2_; }

  DirCoeff cell_coeff(int dir, std::size_t cell) const;
  FaceCoefficients face_coefficients() const;

  // Cell-level evaluations; negative flows raise DomainError.
  std::pair<double, double> packet_cost(std::size_t cell, double t1, double t2) const;
  double local_transport_cost(std::size_t cell, double t1, double t2) const;
  std::pair<double, double> marginal_cost(std::size_t cell, double t1, double t2) const;
  double beckmann_potential(std::size_t cell, double t1, double t2) const;

 private:
  CostModel(CostLaw law, ScalarField k1, ScalarField k2, std::optional<ScalarField> h1,
            std::optional<ScalarField> h2);

  CostLaw law_;
  ScalarField k1_, k2_;
  std::optional<ScalarField> h1_, h2_;
};

// Packet costs c_i of a congestion-independent model as (c1, c2) fields.
std::pair<ScalarField, ScalarField> independent_costs(const CostModel& model);

}  // namespace contnet
