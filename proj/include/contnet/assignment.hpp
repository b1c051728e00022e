#pragma once

// System-optimal and user-equilibrium flow assignment on the staggered grid.
//
// Frank-Wolfe: at the current total flow, evaluate a per-face link cost
// (marginal cost for the system optimum, packet cost for the equilibrium),
// solve the East/South DP towards each class's sink, load the class demand
// all-or-nothing, and move towards that loading with an exact line search.

#include <optional>
#include <string>
#include <vector>

#include "contnet/cost_model.hpp"
#include "contnet/grid.hpp"
#include "contnet/hjb.hpp"
#include "contnet/scenario.hpp"

namespace contnet {

enum class Objective { kGlobal, kWardrop };

struct FaceValues {
  std::vector<double> dir1, dir2;  // laid out like FlowField::t1 / t2
};

// Weight of every face in the discrete objective Z = sum_f w g(T_f).
inline double face_weight(const Grid& g) { return g.h1() * g.h2(); }

// Sum over classes, face by face.
FlowField total_flow(const std::vector<FlowField>& flows);

// Link cost per face at the given total flow: marginal cost (global) or
// packet cost (Wardrop). Negative entries of `total` are evaluated as given.
FaceValues link_costs(const FaceCoefficients& fc, const FlowField& total, Objective obj);

// sum_f w * g(T_f) (global) or sum_f w * psi(T_f) (Wardrop/Beckmann).
double objective_value(const FaceCoefficients& fc, const FlowField& total, Objective obj);

struct AssignmentResult {
  Objective objective = Objective::kGlobal;
  std::vector<FlowField> flows;
  double objective_value = 0.0;
  double total_cost = 0.0;  // sum_f w * g(T_f) regardless of the objective
  std::vector<double> gap_history;
  std::vector<double> objective_history;
  int iterations = 0;
  bool converged = false;
  std::optional<ScalarField> multiplier;   // zeta when recoverable
  // DP value fields at the final link costs, one per class with demand;
  // value_classes[k] is the class of values[k].
  std::vector<ValueField> values;
  std::vector<int> value_classes;
  std::vector<std::string> notes;
  double min_flow = 0.0;                   // most negative face flow (direct solve)
  int cg_iterations = 0;
  double cg_residual = 0.0;
};

// The single cell with rho < 0 of a class; PreconditionError when there is
// more than one sink cell.
CellIndex class_sink(const ScalarField& rho);

AssignmentResult solve_global(const Scenario& scenario);
AssignmentResult solve_wardrop(const Scenario& scenario);
AssignmentResult frank_wolfe(const Scenario& scenario, Objective obj);

// Affine costs, one class, every face assumed to carry flow: solves the
// zero-flux elliptic problem for zeta by conjugate gradients and recovers
//   T_f = -(a_f * dzeta/dx_i + b_f),  a = 1/k, b = h/k.
// Negative recovered flows are reported in min_flow and notes, not clamped.
AssignmentResult solve_affine_direct(const Scenario& scenario);

struct ResidualReport {
  double max_used = 0.0;       // max |r| over used faces
  double mean_used = 0.0;
  double frac_used_above = 0.0;  // fraction of used faces with |r| > tol
  double max_unused_violation = 0.0;  // max(0, -r) over unused faces
  double mean_cost = 0.0;      // mean link cost over all faces
  double tol = 0.0;
  double gap = 0.0;
  int used_faces = 0;
  int unused_faces = 0;
};

struct ResidualOptions {
  // A face is used when its flow exceeds used_rel * max face flow.
  double used_rel = 1e-9;
  // Absolute residual tolerance; <= 0 selects 1e-3 * mean link cost.
  double tol = -1.0;
};

// r_f = link cost + (p_next - p_here) / h for potential p. Faces touching an
// unreachable cell are skipped.
ResidualReport stationarity_residual(const FlowField& flow, const FaceValues& cost,
                                     const ScalarField& potential, ResidualOptions opt = {});

// Marginal costs of the total flow against multiplier zeta.
ResidualReport kkt_residual(const FlowField& flow, const CostModel& model, const ScalarField& zeta,
                            ResidualOptions opt = {});
// Packet costs of the total flow against the class value field V.
ResidualReport wardrop_residual(const FlowField& flow, const FlowField& total,
                                const CostModel& model, const ScalarField& value,
                                ResidualOptions opt = {});

// Least-squares zeta from the stationarity equations on used faces (tiny
// Tikhonov term fixes the gauge). Diagnostic only.
ScalarField estimate_multiplier(const FlowField& flow, const CostModel& model,
                                double used_rel = 1e-9);

}  // namespace contnet
