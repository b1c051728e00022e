#pragma once

// Separable stream-function solutions for linear costs c_i = k_i T_i + h_i
// with constant k_i on a source-free interior. Flows come from a stream
// function phi through
//   T1 = dphi/dx2,  T2 = -dphi/dx1,
// which makes them divergence free. Equal cost along every staircase between
// two points needs dc1/dx2 = dc2/dx1, i.e.
//   k1 phi_x2x2 + k2 phi_x1x1 = 0.
// Each mode below solves that equation exactly.

#include <span>
#include <vector>

#include "contnet/grid.hpp"

namespace contnet {

// With K_i = sqrt(k_i):
//   kHyperbolicX1  [A cosh(s K1 x1) + B sinh(s K1 x1)] [C cos(s K2 x2) + D sin(s K2 x2)]
//   kHyperbolicX2  [A cos(s K1 x1) + B sin(s K1 x1)] [C cosh(s K2 x2) + D sinh(s K2 x2)]
// The second form is the first with s replaced by i*s.
enum class ModeKind { kHyperbolicX1, kHyperbolicX2 };

struct Mode {
  ModeKind kind = ModeKind::kHyperbolicX1;
  double s = 1.0;
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
};

// s -> 0 limit: phi = c0 + c1 x1 + c2 x2 (uniform background flow).
struct AffineTerm {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
};

struct StreamValue {
  double phi = 0.0;
  double d1 = 0.0;  // dphi/dx1
  double d2 = 0.0;  // dphi/dx2
};

class SeparableSolution {
 public:
  // Domain [0,a] x [0,b]; k1, k2 > 0.
  SeparableSolution(double a, double b, double k1, double k2, std::vector<Mode> modes,
                    AffineTerm affine = {});

  double a() const { return a_; }
  double b() const { return b_; }
  double k1() const { return k1_; }
  double k2() const { return k2_; }
  const std::vector<Mode>& modes() const { return modes_; }
  const AffineTerm& affine() const { return affine_; }

  // No domain check; used by the residual stencils.
  StreamValue eval(Point x) const;

 private:
  double a_, b_, k1_, k2_;
  std::vector<Mode> modes_;
  AffineTerm affine_;
};

// phi and its gradient; DomainError outside the rectangle.
StreamValue stream_function(const SeparableSolution& sol, Point x);

// How face flows are taken from phi.
//   kMidpoint     derivative at the face midpoint (second-order accurate)
//   kFaceAverage  mean over the face, i.e. a difference of phi at the face
//                 ends; the discrete interior divergence vanishes to rounding
enum class FaceSampling { kMidpoint, kFaceAverage };

struct StreamFlows {
  FlowField flow;
  double min_flow = 0.0;
  int negative_faces = 0;  // faces below -neg_tol * max |T|
};

// Grid extents must match the solution's rectangle.
StreamFlows flows_from_stream(const SeparableSolution& sol, const Grid& grid,
                              FaceSampling sampling = FaceSampling::kFaceAverage,
                              double neg_tol = 1e-12);

// Each residual is the difference of two terms; `scale` is the largest sum of
// their magnitudes, so `relative` is 0 for an exact identity and ~1 when the
// terms are unrelated.
struct FieldResidual {
  double max_abs = 0.0;
  double rms = 0.0;
  double scale = 0.0;
  double relative = 0.0;
};

// k1 phi_x2x2 + k2 phi_x1x1 by second differences at interior cell centres.
FieldResidual pde_residual(const SeparableSolution& sol, const Grid& grid);

// Divergence over cells that do not touch the boundary.
FieldResidual interior_divergence(const FlowField& flow);

// k1 dT1/dx2 - k2 dT2/dx1 at interior grid nodes, from face flows.
FieldResidual equalized_cost_residual(const FlowField& flow, double k1, double k2);

struct RefinementRow {
  int n = 0;
  double pde = 0.0;
  double divergence = 0.0;
  double equalized = 0.0;
};

struct RefinementStudy {
  std::vector<RefinementRow> rows;
  // Observed orders log2(e_coarse / e_fine) between consecutive rows; the
  // minimum over pairs for each residual.
  double pde_order = 0.0;
  double divergence_order = 0.0;
  double equalized_order = 0.0;
};

// RMS residuals on n-by-n grids (midpoint face sampling) for each n, which
// must double from one entry to the next. The max norm is a poor order
// estimator here: the sampled interior grows towards the boundary as h
// shrinks, which alone costs about 0.1 in the apparent order.
RefinementStudy refinement_study(const SeparableSolution& sol, std::span<const int> sizes);

// Stream function of a flow on the grid nodes that do not lie on the
// boundary, (nx-1) x (ny-1) values row-major, fixed to 0 at the first node.
// Integrates -T2 along the first node row and T1 down each node column.
std::vector<double> stream_from_flow(const FlowField& flow);

struct ModeFit {
  SeparableSolution solution;
  double relative_l2 = 0.0;  // after removing the mean
};

// Least-squares fit of nodal stream values (as produced by stream_from_flow)
// by modes of both kinds at the given s values plus an affine term. Each s
// contributes four product terms per kind.
ModeFit fit_modes(const Grid& grid, std::span<const double> node_phi, double k1, double k2,
                  std::span<const double> s_values);

}  // namespace contnet
