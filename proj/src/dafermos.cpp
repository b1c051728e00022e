#include "contnet/dafermos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "contnet/error.hpp"

namespace contnet {

namespace {

// f(x) = p cosh(w x) + q sinh(w x) or p cos(w x) + q sin(w x), with f'.
struct Factor {
  double v, dv;
};

Factor hyperbolic(double p, double q, double w, double x) {
  const double ch = std::cosh(w * x);
  const double sh = std::sinh(w * x);
  return {p * ch + q * sh, w * (p * sh + q * ch)};
}

Factor trigonometric(double p, double q, double w, double x) {
  const double cs = std::cos(w * x);
  const double sn = std::sin(w * x);
  return {p * cs + q * sn, w * (q * cs - p * sn)};
}

struct Accumulator {
  double worst = 0.0;
  double sum_sq = 0.0;
  double scale = 0.0;
  int count = 0;

  void add(double x, double y) {
    worst = std::max(worst, std::abs(x + y));
    sum_sq += (x + y) * (x + y);
    scale = std::max(scale, std::abs(x) + std::abs(y));
    ++count;
  }
  FieldResidual result() const {
    return {worst, count > 0 ? std::sqrt(sum_sq / count) : 0.0, scale,
            scale > 0.0 ? worst / scale : 0.0};
  }
};

}  // namespace

SeparableSolution::SeparableSolution(double a, double b, double k1, double k2,
                                     std::vector<Mode> modes, AffineTerm affine)
    : a_(a), b_(b), k1_(k1), k2_(k2), modes_(std::move(modes)), affine_(affine) {
  if (!(a > 0.0) || !(b > 0.0)) throw ParameterError("domain extents must be positive");
  if (!(k1 > 0.0) || !(k2 > 0.0)) throw ParameterError("k1 and k2 must be positive");
  for (const Mode& m : modes_)
    if (!std::isfinite(m.s) || !std::isfinite(m.a) || !std::isfinite(m.b) ||
        !std::isfinite(m.c) || !std::isfinite(m.d))
      throw ParameterError("mode parameters must be finite");
}

StreamValue SeparableSolution::eval(Point x) const {
  const double w1 = std::sqrt(k1_);
  const double w2 = std::sqrt(k2_);
  StreamValue out{affine_.c0 + affine_.c1 * x.x1 + affine_.c2 * x.x2, affine_.c1, affine_.c2};
  for (const Mode& m : modes_) {
    Factor f1, f2;
    if (m.kind == ModeKind::kHyperbolicX1) {
      f1 = hyperbolic(m.a, m.b, m.s * w1, x.x1);
      f2 = trigonometric(m.c, m.d, m.s * w2, x.x2);
    } else {
      f1 = trigonometric(m.a, m.b, m.s * w1, x.x1);
      f2 = hyperbolic(m.c, m.d, m.s * w2, x.x2);
    }
    out.phi += f1.v * f2.v;
    out.d1 += f1.dv * f2.v;
    out.d2 += f1.v * f2.dv;
  }
  return out;
}

StreamValue stream_function(const SeparableSolution& sol, Point x) {
  const double e1 = 1e-12 * sol.a();
  const double e2 = 1e-12 * sol.b();
  if (!(x.x1 >= -e1 && x.x1 <= sol.a() + e1 && x.x2 >= -e2 && x.x2 <= sol.b() + e2))
    throw DomainError("point (" + std::to_string(x.x1) + ", " + std::to_string(x.x2) +
                      ") is outside the domain");
  return sol.eval(x);
}

StreamFlows flows_from_stream(const SeparableSolution& sol, const Grid& g,
                              FaceSampling sampling, double neg_tol) {
  if (!(g == Grid(sol.a(), sol.b(), g.nx(), g.ny())))
    throw ParameterError("grid extents differ from the solution's domain");
  const double h1 = g.h1();
  const double h2 = g.h2();
  std::vector<double> t1(g.t1_count()), t2(g.t2_count());
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i + 1 < g.nx(); ++i) {
      const double x1 = (i + 1) * h1;
      t1[g.t1_face(i, j)] =
          sampling == FaceSampling::kMidpoint
              ? sol.eval({x1, (j + 0.5) * h2}).d2
              : (sol.eval({x1, (j + 1) * h2}).phi - sol.eval({x1, j * h2}).phi) / h2;
    }
  for (int j = 0; j + 1 < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const double x2 = (j + 1) * h2;
      t2[g.t2_face(i, j)] =
          sampling == FaceSampling::kMidpoint
              ? -sol.eval({(i + 0.5) * h1, x2}).d1
              : -(sol.eval({(i + 1) * h1, x2}).phi - sol.eval({i * h1, x2}).phi) / h1;
    }
  StreamFlows out{FlowField(g, 0, std::move(t1), std::move(t2))};
  out.min_flow = out.flow.min_value();
  double peak = 0.0;
  for (double v : out.flow.t1()) peak = std::max(peak, std::abs(v));
  for (double v : out.flow.t2()) peak = std::max(peak, std::abs(v));
  for (double v : out.flow.t1()) out.negative_faces += v < -neg_tol * peak;
  for (double v : out.flow.t2()) out.negative_faces += v < -neg_tol * peak;
  return out;
}

FieldResidual pde_residual(const SeparableSolution& sol, const Grid& g) {
  const double h1 = g.h1();
  const double h2 = g.h2();
  Accumulator acc;
  for (int j = 1; j + 1 < g.ny(); ++j)
    for (int i = 1; i + 1 < g.nx(); ++i) {
      const Point c = g.center(i, j);
      const double p = sol.eval(c).phi;
      const double d11 =
          (sol.eval({c.x1 - h1, c.x2}).phi - 2.0 * p + sol.eval({c.x1 + h1, c.x2}).phi) / (h1 * h1);
      const double d22 =
          (sol.eval({c.x1, c.x2 - h2}).phi - 2.0 * p + sol.eval({c.x1, c.x2 + h2}).phi) / (h2 * h2);
      const double x = sol.k1() * d22;
      const double y = sol.k2() * d11;
      acc.add(x, y);
    }
  return acc.result();
}

FieldResidual interior_divergence(const FlowField& flow) {
  const Grid& g = flow.grid();
  const double h1 = g.h1();
  const double h2 = g.h2();
  Accumulator acc;
  for (int j = 1; j + 1 < g.ny(); ++j)
    for (int i = 1; i + 1 < g.nx(); ++i) {
      const double x = (flow.t1()[g.t1_face(i, j)] - flow.t1()[g.t1_face(i - 1, j)]) / h1;
      const double y = (flow.t2()[g.t2_face(i, j)] - flow.t2()[g.t2_face(i, j - 1)]) / h2;
      acc.add(x, y);
    }
  return acc.result();
}

FieldResidual equalized_cost_residual(const FlowField& flow, double k1, double k2) {
  const Grid& g = flow.grid();
  Accumulator acc;
  // Node (i+1, j+1) sits between T1 faces (i, j), (i, j+1) and T2 faces
  // (i, j), (i+1, j).
  for (int j = 0; j + 1 < g.ny(); ++j)
    for (int i = 0; i + 1 < g.nx(); ++i) {
      const double x =
          k1 * (flow.t1()[g.t1_face(i, j + 1)] - flow.t1()[g.t1_face(i, j)]) / g.h2();
      const double y =
          k2 * (flow.t2()[g.t2_face(i + 1, j)] - flow.t2()[g.t2_face(i, j)]) / g.h1();
      acc.add(x, -y);
    }
  return acc.result();
}

RefinementStudy refinement_study(const SeparableSolution& sol, std::span<const int> sizes) {
  if (sizes.size() < 2) throw ParameterError("refinement study needs at least two grids");
  for (std::size_t k = 1; k < sizes.size(); ++k)
    if (sizes[k] != 2 * sizes[k - 1]) throw ParameterError("grid sizes must double");
  RefinementStudy out;
  for (int n : sizes) {
    const Grid g(sol.a(), sol.b(), n, n);
    const FlowField f = flows_from_stream(sol, g, FaceSampling::kMidpoint).flow;
    out.rows.push_back({n, pde_residual(sol, g).rms, interior_divergence(f).rms,
                        equalized_cost_residual(f, sol.k1(), sol.k2()).rms});
  }
  auto order = [&](double RefinementRow::*e) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < out.rows.size(); ++k)
      worst = std::min(worst, std::log2(out.rows[k - 1].*e / out.rows[k].*e));
    return worst;
  };
  out.pde_order = order(&RefinementRow::pde);
  out.divergence_order = order(&RefinementRow::divergence);
  out.equalized_order = order(&RefinementRow::equalized);
  return out;
}

std::vector<double> stream_from_flow(const FlowField& flow) {
  const Grid& g = flow.grid();
  const int mx = g.nx() - 1;
  const int my = g.ny() - 1;
  std::vector<double> phi(static_cast<std::size_t>(mx) * my);
  // Node (I, J) at (I h1, J h2), I in [1, nx-1], J in [1, ny-1], stored at
  // (J-1)*mx + (I-1).
  for (int I = 2; I <= mx; ++I)
    phi[I - 1] = phi[I - 2] - g.h1() * flow.t2()[g.t2_face(I - 1, 0)];
  for (int J = 2; J <= my; ++J)
    for (int I = 1; I <= mx; ++I)
      phi[static_cast<std::size_t>(J - 1) * mx + (I - 1)] =
          phi[static_cast<std::size_t>(J - 2) * mx + (I - 1)] +
          g.h2() * flow.t1()[g.t1_face(I - 1, J - 1)];
  return phi;
}

ModeFit fit_modes(const Grid& g, std::span<const double> node_phi, double k1, double k2,
                  std::span<const double> s_values) {
  const int mx = g.nx() - 1;
  const int my = g.ny() - 1;
  if (node_phi.size() != static_cast<std::size_t>(mx) * my)
    throw ParameterError("node stream values do not match the grid");
  if (!(k1 > 0.0) || !(k2 > 0.0)) throw ParameterError("k1 and k2 must be positive");
  for (double s : s_values)
    if (!(s > 0.0) || !std::isfinite(s)) throw ParameterError("mode s values must be positive");

  // Columns: 1, x1, x2, then per s and kind the four products
  // (p1 q1, p1 q2, p2 q1, p2 q2) of the two factor pairs.
  struct Term {
    ModeKind kind;
    double s;
    int p, q;
  };
  std::vector<Term> terms;
  for (double s : s_values)
    for (ModeKind kind : {ModeKind::kHyperbolicX1, ModeKind::kHyperbolicX2})
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) terms.push_back({kind, s, p, q});

  const Eigen::Index rows = static_cast<Eigen::Index>(node_phi.size());
  const Eigen::Index cols = 3 + static_cast<Eigen::Index>(terms.size());
  Eigen::MatrixXd A(rows, cols);
  Eigen::VectorXd y(rows);
  const double w1 = std::sqrt(k1);
  const double w2 = std::sqrt(k2);
  for (int J = 1; J <= my; ++J)
    for (int I = 1; I <= mx; ++I) {
      const Eigen::Index r = static_cast<Eigen::Index>(J - 1) * mx + (I - 1);
      const double x1 = I * g.h1();
      const double x2 = J * g.h2();
      y(r) = node_phi[r];
      A(r, 0) = 1.0;
      A(r, 1) = x1;
      A(r, 2) = x2;
      for (std::size_t t = 0; t < terms.size(); ++t) {
        const Term& tm = terms[t];
        double f, h;
        if (tm.kind == ModeKind::kHyperbolicX1) {
          f = tm.p == 0 ? std::cosh(tm.s * w1 * x1) : std::sinh(tm.s * w1 * x1);
          h = tm.q == 0 ? std::cos(tm.s * w2 * x2) : std::sin(tm.s * w2 * x2);
        } else {
          f = tm.p == 0 ? std::cos(tm.s * w1 * x1) : std::sin(tm.s * w1 * x1);
          h = tm.q == 0 ? std::cosh(tm.s * w2 * x2) : std::sinh(tm.s * w2 * x2);
        }
        A(r, 3 + static_cast<Eigen::Index>(t)) = f * h;
      }
    }
  Eigen::VectorXd norms = A.colwise().norm().transpose();
  for (Eigen::Index c = 0; c < cols; ++c)
    if (norms(c) > 0.0) A.col(c) /= norms(c);
  Eigen::VectorXd coef = A.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd fitted = A * coef;
  for (Eigen::Index c = 0; c < cols; ++c)
    if (norms(c) > 0.0) coef(c) /= norms(c);

  AffineTerm affine{coef(0), coef(1), coef(2)};
  std::vector<Mode> modes;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const Term& tm = terms[t];
    Mode m{tm.kind, tm.s};
    (tm.p == 0 ? m.a : m.b) = coef(3 + static_cast<Eigen::Index>(t));
    (tm.q == 0 ? m.c : m.d) = 1.0;
    modes.push_back(m);
  }
  const double mean = y.mean();
  const double den = (y.array() - mean).matrix().norm();
  const double num = (fitted - y).norm();
  return {SeparableSolution(g.a(), g.b(), k1, k2, std::move(modes), affine),
          den > 0.0 ? num / den : num};
}

}  // namespace contnet
