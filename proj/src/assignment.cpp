#include "contnet/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "contnet/error.hpp"
#include "contnet/kernels.hpp"

namespace contnet {

namespace {

// Face data flattened as [dir1 | dir2].
struct Flat {
  std::vector<double> v;
  std::size_t n1 = 0;
};

Flat flatten(const FlowField& f) {
  Flat out;
  out.n1 = f.t1().size();
  out.v.assign(f.t1().begin(), f.t1().end());
  out.v.insert(out.v.end(), f.t2().begin(), f.t2().end());
  return out;
}

FlowField unflatten(const Grid& g, int cls, const std::vector<double>& v) {
  const std::size_t n1 = g.t1_count();
  return FlowField(g, cls, std::vector<double>(v.begin(), v.begin() + n1),
                   std::vector<double>(v.begin() + n1, v.end()));
}

std::vector<DirCoeff> flat_coeffs(const FaceCoefficients& fc) {
  std::vector<DirCoeff> c = fc.dir1;
  c.insert(c.end(), fc.dir2.begin(), fc.dir2.end());
  return c;
}

double link_cost(const CostLaw& law, DirCoeff c, double t, Objective obj) {
  return obj == Objective::kGlobal ? law.marginal(c, t) : law.packet(c, t);
}

double face_objective(const CostLaw& law, DirCoeff c, double t, Objective obj) {
  return obj == Objective::kGlobal ? law.local(c, t) : law.potential(c, t);
}

double flat_objective(const CostLaw& law, const std::vector<DirCoeff>& c,
                      const std::vector<double>& t, Objective obj, double w) {
  double z = 0.0;
  for (std::size_t f = 0; f < t.size(); ++f) z += face_objective(law, c[f], t[f], obj);
  return w * z;
}

// Derivative of the objective along d at t + lambda d.
double directional_derivative(const CostLaw& law, const std::vector<DirCoeff>& c,
                              const std::vector<double>& t, const std::vector<double>& d,
                              double lambda, Objective obj) {
  double s = 0.0;
  for (std::size_t f = 0; f < t.size(); ++f) {
    if (d[f] == 0.0) continue;
    s += link_cost(law, c[f], std::max(t[f] + lambda * d[f], 0.0), obj) * d[f];
  }
  return s;
}

// d(link cost)/dT, the diagonal Hessian of the objective.
double link_slope(const CostLaw& law, DirCoeff c, double t, Objective obj) {
  switch (law.kind) {
    case CostKind::kIndependent: return 0.0;
    case CostKind::kAffine: return obj == Objective::kGlobal ? c.k : 0.5 * c.k;
    case CostKind::kMonomial: {
      const double scale = obj == Objective::kGlobal ? law.beta + 1.0 : 1.0;
      if (t <= 0.0) return law.beta == 1.0 ? scale * c.k : 0.0;
      return scale * law.beta * c.k * small_pow(t, law.beta - 1.0);
    }
  }
  return 0.0;
}

double line_search(const CostLaw& law, const std::vector<DirCoeff>& c,
                   const std::vector<double>& t, const std::vector<double>& d, Objective obj,
                   double upper) {
  const double d0 = directional_derivative(law, c, t, d, 0.0, obj);
  if (!(d0 < 0.0) || !(upper > 0.0)) return 0.0;
  if (law.kind == CostKind::kIndependent) return upper;
  if (law.kind == CostKind::kAffine) {
    const double scale = obj == Objective::kGlobal ? 1.0 : 0.5;
    double curv = 0.0;
    for (std::size_t f = 0; f < t.size(); ++f) curv += scale * c[f].k * d[f] * d[f];
    return curv > 0.0 ? std::min(upper, -d0 / curv) : upper;
  }
  if (directional_derivative(law, c, t, d, upper, obj) <= 0.0) return upper;
  // Newton on the derivative, kept inside the sign bracket [lo, hi].
  std::vector<std::size_t> moving;
  for (std::size_t f = 0; f < d.size(); ++f)
    if (d[f] != 0.0) moving.push_back(f);
  double lo = 0.0, hi = upper, x = 0.0;
  for (int it = 0; it < 100 && hi - lo > 1e-15 * upper; ++it) {
    double g = 0.0, slope = 0.0;
    for (std::size_t f : moving) {
      const double tf = std::max(t[f] + x * d[f], 0.0);
      g += link_cost(law, c[f], tf, obj) * d[f];
      slope += link_slope(law, c[f], tf, obj) * d[f] * d[f];
    }
    if (g == 0.0) return x;
    (g < 0.0 ? lo : hi) = x;
    const double next = slope > 0.0 ? x - g / slope : hi;
    x = next > lo && next < hi ? next : 0.5 * (lo + hi);
  }
  return x;
}

// Loading that routes every source along its most expensive path using only
// faces that currently carry flow of the class.
ValueField costliest_in_support(const Grid& g, const std::vector<double>& lc,
                                const std::vector<double>& flow, const CellMask& target) {
  const int nx = g.nx();
  const int ny = g.ny();
  const std::size_t n1 = g.t1_count();
  const double none = -std::numeric_limits<double>::infinity();
  std::vector<double> v(g.cell_count(), none);
  std::vector<Move> policy(g.cell_count(), Move::kNone);
  for (int j = ny - 1; j >= 0; --j) {
    for (int i = nx - 1; i >= 0; --i) {
      const std::size_t c = g.cell(i, j);
      if (target[c]) {
        v[c] = 0.0;
        continue;
      }
      double best = none;
      if (i + 1 < nx) {
        const std::size_t f = g.t1_face(i, j);
        if (flow[f] > 0.0 && v[c + 1] != none) {
          best = lc[f] * g.h1() + v[c + 1];
          policy[c] = Move::kEast;
        }
      }
      if (j + 1 < ny) {
        const std::size_t f = n1 + g.t2_face(i, j);
        if (flow[f] > 0.0 && v[c + nx] != none && lc[f] * g.h2() + v[c + nx] > best) {
          best = lc[f] * g.h2() + v[c + nx];
          policy[c] = Move::kSouth;
        }
      }
      v[c] = best;
    }
  }
  for (double& x : v)
    if (x == none) x = kUnreachable;
  return ValueField{ScalarField(g, std::move(v), true), target, std::move(policy),
                    CellMask(g.cell_count(), 0), 0};
}

}  // namespace

FlowField total_flow(const std::vector<FlowField>& flows) {
  if (flows.empty()) throw ParameterError("no flow fields to add");
  FlowField sum = FlowField::zero(flows.front().grid(), 0);
  for (const FlowField& f : flows) sum = combine(1.0, sum, 1.0, f);
  return sum;
}

FaceValues link_costs(const FaceCoefficients& fc, const FlowField& total, Objective obj) {
  FaceValues out;
  out.dir1.resize(fc.dir1.size());
  out.dir2.resize(fc.dir2.size());
  for (std::size_t f = 0; f < fc.dir1.size(); ++f)
    out.dir1[f] = link_cost(fc.law, fc.dir1[f], total.t1()[f], obj);
  for (std::size_t f = 0; f < fc.dir2.size(); ++f)
    out.dir2[f] = link_cost(fc.law, fc.dir2[f], total.t2()[f], obj);
  return out;
}

double objective_value(const FaceCoefficients& fc, const FlowField& total, Objective obj) {
  return flat_objective(fc.law, flat_coeffs(fc), flatten(total).v, obj, face_weight(total.grid()));
}

CellIndex class_sink(const ScalarField& rho) {
  const Grid& g = rho.grid();
  std::optional<CellIndex> sink;
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    if (!(rho[c] < 0.0)) continue;
    if (sink) throw PreconditionError("each demand class must have a single sink cell");
    sink = g.cell_of(c);
  }
  if (!sink) throw PreconditionError("demand class has sources but no sink");
  return *sink;
}

AssignmentResult solve_global(const Scenario& scenario) {
  return frank_wolfe(scenario, Objective::kGlobal);
}

AssignmentResult solve_wardrop(const Scenario& scenario) {
  return frank_wolfe(scenario, Objective::kWardrop);
}

AssignmentResult frank_wolfe(const Scenario& s, Objective obj) {
  check_balance(s);
  const Grid& g = s.grid;
  if (!(s.cost.grid() == g)) throw PreconditionError("cost model lives on a different grid");
  if (obj == Objective::kGlobal && !s.cost.convex())
    throw PreconditionError("global optimisation needs a convex cost model (beta >= 1)");

  AssignmentResult res;
  res.objective = obj;
  if (s.cost.low_beta()) res.notes.push_back("monomial beta < 1: objective is not convex");

  const FaceCoefficients fc = s.cost.face_coefficients();
  const std::vector<DirCoeff> coef = flat_coeffs(fc);
  const CostLaw& law = fc.law;
  const double w = face_weight(g);
  const std::size_t nf = g.t1_count() + g.t2_count();
  const std::size_t nclass = s.rho.size();

  std::vector<std::optional<CellMask>> targets(nclass);
  for (std::size_t j = 0; j < nclass; ++j) {
    bool any = false;
    for (double v : s.rho[j].values()) any = any || v != 0.0;
    if (any) targets[j] = mask_of_cells(g, std::vector<CellIndex>{class_sink(s.rho[j])});
  }

  std::vector<std::vector<double>> t(nclass, std::vector<double>(nf, 0.0));
  std::vector<std::vector<double>> y(nclass);
  std::vector<double> total(nf, 0.0), ytotal(nf), dir(nf);
  // Conjugate direction point per class and in total.
  std::vector<std::vector<double>> sbar(nclass);
  std::vector<double> sbar_total;
  std::vector<ValueField> values;

  // All-or-nothing loading of every class on the link costs of `total`.
  auto load = [&](double& aon_cost) {
    std::vector<double> lc(nf);
    for (std::size_t f = 0; f < nf; ++f) lc[f] = link_cost(law, coef[f], total[f], obj);
    const std::span<const double> l1(lc.data(), g.t1_count());
    const std::span<const double> l2(lc.data() + g.t1_count(), g.t2_count());
    values.clear();
    res.value_classes.clear();
    aon_cost = 0.0;
    std::fill(ytotal.begin(), ytotal.end(), 0.0);
    for (std::size_t j = 0; j < nclass; ++j) {
      if (!targets[j]) {
        y[j].assign(nf, 0.0);
        continue;
      }
      ValueField v = solve_value_faces(g, l1, l2, *targets[j]);
      y[j] = flatten(all_or_nothing(v, s.rho[j], static_cast<int>(j))).v;
      kernels::axpy(1.0, y[j], ytotal);
      values.push_back(std::move(v));
      res.value_classes.push_back(static_cast<int>(j));
    }
    for (std::size_t f = 0; f < nf; ++f) aon_cost += lc[f] * ytotal[f];
    aon_cost *= w;
    double cur = 0.0;
    for (std::size_t f = 0; f < nf; ++f) cur += lc[f] * total[f];
    return cur * w;
  };

  double aon = 0.0;
  load(aon);
  t = y;
  total = ytotal;
  double z = flat_objective(law, coef, total, obj, w);
  res.objective_history.push_back(z);

  for (int k = 0;; ++k) {
    const double current = load(aon);
    const double gap = current > 0.0 ? std::max(0.0, (current - aon) / current) : 0.0;
    res.gap_history.push_back(gap);
    res.iterations = k;
    if (gap <= s.options.tol) {
      res.converged = true;
      break;
    }
    if (k >= s.options.max_iters) break;

    double upper = 1.0;
    std::size_t drop_class = 0, drop_face = nf;
    if (s.options.variant == FwVariant::kPairwise) {
      std::vector<double> lc(nf);
      for (std::size_t f = 0; f < nf; ++f) lc[f] = link_cost(law, coef[f], total[f], obj);
      upper = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < nclass; ++j) {
        if (!targets[j]) {
          sbar[j].assign(nf, 0.0);
          continue;
        }
        const ValueField away = costliest_in_support(g, lc, t[j], *targets[j]);
        sbar[j] = flatten(all_or_nothing(away, s.rho[j], static_cast<int>(j))).v;
        for (std::size_t f = 0; f < nf; ++f) {
          if (sbar[j][f] > 0.0 && t[j][f] / sbar[j][f] < upper) {
            upper = t[j][f] / sbar[j][f];
            drop_class = j;
            drop_face = f;
          }
        }
      }
      std::fill(dir.begin(), dir.end(), 0.0);
      for (std::size_t j = 0; j < nclass; ++j) {
        kernels::axpy(-1.0, sbar[j], y[j]);
        kernels::axpy(1.0, y[j], dir);
      }
    } else {
      // alpha mixes the previous target into the new all-or-nothing point so
      // that successive directions are conjugate w.r.t. the Hessian.
      double alpha = 0.0;
      if (s.options.variant == FwVariant::kConjugate && !sbar_total.empty()) {
        double num = 0.0, den = 0.0;
        for (std::size_t f = 0; f < nf; ++f) {
          const double hf = link_slope(law, coef[f], total[f], obj);
          const double dp = sbar_total[f] - total[f];
          num += dp * hf * (ytotal[f] - total[f]);
          den += dp * hf * (ytotal[f] - sbar_total[f]);
        }
        if (den != 0.0) alpha = std::clamp(num / den, 0.0, 1.0 - 1e-2);
        if (!(alpha >= 0.0)) alpha = 0.0;
      }
      if (alpha == 0.0) {
        sbar_total = ytotal;
        for (std::size_t j = 0; j < nclass; ++j) sbar[j] = y[j];
      } else {
        for (std::size_t j = 0; j < nclass; ++j)
          for (std::size_t f = 0; f < nf; ++f)
            sbar[j][f] = alpha * sbar[j][f] + (1.0 - alpha) * y[j][f];
        for (std::size_t f = 0; f < nf; ++f)
          sbar_total[f] = alpha * sbar_total[f] + (1.0 - alpha) * ytotal[f];
      }
      for (std::size_t f = 0; f < nf; ++f) dir[f] = sbar_total[f] - total[f];
      if (alpha > 0.0 && !(directional_derivative(law, coef, total, dir, 0.0, obj) < 0.0)) {
        sbar_total = ytotal;
        for (std::size_t j = 0; j < nclass; ++j) sbar[j] = y[j];
        for (std::size_t f = 0; f < nf; ++f) dir[f] = sbar_total[f] - total[f];
      }
      // Per-class direction, reusing y.
      for (std::size_t j = 0; j < nclass; ++j) {
        y[j] = sbar[j];
        kernels::axpy(-1.0, t[j], y[j]);
      }
    }
    double lambda = line_search(law, coef, total, dir, obj, upper);
    if (s.options.variant == FwVariant::kPairwise) {
      std::vector<std::vector<double>> tp = t;
      std::vector<double> sum(nf, 0.0);
      if (lambda > 0.0) {
        for (std::size_t j = 0; j < nclass; ++j) kernels::axpy(lambda, y[j], tp[j]);
        // A full pairwise step removes the away loading from the bottleneck
        // face exactly; what remains there is the all-or-nothing share.
        if (lambda == upper && drop_face < nf) {
          const double fw_share = y[drop_class][drop_face] + sbar[drop_class][drop_face];
          tp[drop_class][drop_face] = lambda * fw_share;
        }
        for (auto& tj : tp)
          for (double& v : tj)
            if (v < 0.0) v = 0.0;
        for (std::size_t j = 0; j < nclass; ++j) kernels::axpy(1.0, tp[j], sum);
      }
      // Away steps capped by faces holding only residue flow barely move;
      // take the plain step towards the all-or-nothing point when it is better.
      std::vector<double> fw_dir(nf);
      for (std::size_t f = 0; f < nf; ++f) fw_dir[f] = ytotal[f] - total[f];
      const double lambda_fw = line_search(law, coef, total, fw_dir, obj, 1.0);
      std::vector<double> sum_fw = total;
      kernels::axpy(lambda_fw, fw_dir, sum_fw);
      const double z_pw = lambda > 0.0 ? flat_objective(law, coef, sum, obj, w) : z;
      const double z_fw = lambda_fw > 0.0 ? flat_objective(law, coef, sum_fw, obj, w) : z;
      if (z_fw < z_pw) {
        for (std::size_t j = 0; j < nclass; ++j) {
          // y[j] - sbar[j] + sbar[j] restores the all-or-nothing loading
          kernels::axpy(1.0, sbar[j], y[j]);
          kernels::axpy(-1.0, t[j], y[j]);
          kernels::axpy(lambda_fw, y[j], t[j]);
          for (double& v : t[j])
            if (v < 0.0) v = 0.0;
        }
        lambda = lambda_fw;
      } else if (lambda > 0.0) {
        t = std::move(tp);
      }
    } else if (lambda > 0.0) {
      for (std::size_t j = 0; j < nclass; ++j) kernels::axpy(lambda, y[j], t[j]);
    }
    if (lambda == 0.0) {
      res.notes.push_back("line search returned a zero step at iteration " + std::to_string(k));
      break;
    }
    std::fill(total.begin(), total.end(), 0.0);
    for (std::size_t j = 0; j < nclass; ++j) kernels::axpy(1.0, t[j], total);

    const double z_new = flat_objective(law, coef, total, obj, w);
    if (z_new > z + 1e-12 * std::abs(z))
      throw NumericalError("objective increased at iteration " + std::to_string(k) + ": " +
                           std::to_string(z) + " -> " + std::to_string(z_new));
    z = z_new;
    res.objective_history.push_back(z);
  }

  for (std::size_t j = 0; j < nclass; ++j) res.flows.push_back(unflatten(g, static_cast<int>(j), t[j]));
  res.objective_value = z;
  res.total_cost = flat_objective(law, coef, total, Objective::kGlobal, w);
  res.values = std::move(values);
  double m = 0.0;
  for (double v : total) m = std::min(m, v);
  res.min_flow = m;
  return res;
}

}  // namespace contnet
