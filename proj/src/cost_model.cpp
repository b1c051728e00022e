#include "contnet/cost_model.hpp"

#include <cmath>
#include <string>

#include "contnet/error.hpp"

namespace contnet {

namespace {

constexpr double kMinSlope = 1e-12;

void require_min(const ScalarField& f, double lo, bool strict, const char* name) {
  for (double v : f.values()) {
    if (strict ? !(v >= lo) : !(v >= 0.0))
      throw ParameterError(std::string(name) + (strict ? " must be at least 1e-12 everywhere"
                                                       : " must be nonnegative everywhere"));
  }
}

void require_flow(double t1, double t2) {
  if (t1 < 0.0 || t2 < 0.0 || !std::isfinite(t1) || !std::isfinite(t2))
    throw DomainError("flows must be finite and nonnegative");
}

}  // namespace

const char* cost_kind_name(CostKind kind) {
  switch (kind) {
    case CostKind::kIndependent: return "independent";
    case CostKind::kMonomial: return "monomial";
    case CostKind::kAffine: return "affine";
  }
  return "independent";
}

double cost_from_capacity_scaling(double p, double k, double m) {
  if (!(p > 0.0) || !std::isfinite(p)) throw ParameterError("capacity exponent p must be positive");
  if (!(k > 0.0)) throw ParameterError("capacity scale k must be positive");
  if (m < 0.0) throw DomainError("flow magnitude must be nonnegative");
  return k * std::pow(m, 1.0 / p);
}

double CostLaw::packet(DirCoeff c, double t) const {
  switch (kind) {
    case CostKind::kIndependent: return c.k;
    case CostKind::kMonomial: return c.k * small_pow(t, beta);
    case CostKind::kAffine: return 0.5 * c.k * t + c.h;
  }
  return 0.0;
}

double CostLaw::marginal(DirCoeff c, double t) const {
  switch (kind) {
    case CostKind::kIndependent: return c.k;
    case CostKind::kMonomial: return (beta + 1.0) * c.k * small_pow(t, beta);
    case CostKind::kAffine: return c.k * t + c.h;
  }
  return 0.0;
}

double CostLaw::local(DirCoeff c, double t) const {
  switch (kind) {
    case CostKind::kIndependent: return c.k * t;
    case CostKind::kMonomial: return c.k * small_pow(t, beta + 1.0);
    case CostKind::kAffine: return (0.5 * c.k * t + c.h) * t;
  }
  return 0.0;
}

double CostLaw::potential(DirCoeff c, double t) const {
  switch (kind) {
    case CostKind::kIndependent: return c.k * t;
    case CostKind::kMonomial: return c.k * small_pow(t, beta + 1.0) / (beta + 1.0);
    case CostKind::kAffine: return (0.25 * c.k * t + c.h) * t;
  }
  return 0.0;
}

CostModel::CostModel(CostLaw law, ScalarField k1, ScalarField k2, std::optional<ScalarField> h1,
                     std::optional<ScalarField> h2)
    : law_(law), k1_(std::move(k1)), k2_(std::move(k2)), h1_(std::move(h1)), h2_(std::move(h2)) {
  if (!(k2_.grid() == k1_.grid()) || (h1_ && !(h1_->grid() == k1_.grid())) ||
      (h2_ && !(h2_->grid() == k1_.grid())))
    throw ParameterError("cost fields live on different grids");
}

CostModel CostModel::independent(ScalarField c1, ScalarField c2) {
  require_min(c1, 0.0, false, "c1");
  require_min(c2, 0.0, false, "c2");
  return CostModel({CostKind::kIndependent, 1.0}, std::move(c1), std::move(c2), {}, {});
}

CostModel CostModel::monomial(ScalarField k1, ScalarField k2, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("beta must be positive");
  require_min(k1, kMinSlope, true, "k1");
  require_min(k2, kMinSlope, true, "k2");
  return CostModel({CostKind::kMonomial, beta}, std::move(k1), std::move(k2), {}, {});
}

CostModel CostModel::affine(ScalarField k1, ScalarField k2, ScalarField h1, ScalarField h2) {
  require_min(k1, kMinSlope, true, "k1");
  require_min(k2, kMinSlope, true, "k2");
  require_min(h1, 0.0, false, "h1");
  require_min(h2, 0.0, false, "h2");
  return CostModel({CostKind::kAffine, 1.0}, std::move(k1), std::move(k2), std::move(h1),
                   std::move(h2));
}

DirCoeff CostModel::cell_coeff(int dir, std::size_t cell) const {
  const ScalarField& k = dir == 1 ? k1_ : k2_;
  const auto& h = dir == 1 ? h1_ : h2_;
  return {k[cell], h ? (*h)[cell] : 0.0};
}

FaceCoefficients CostModel::face_coefficients() const {
  const Grid& g = grid();
  FaceCoefficients out;
  out.law = law_;
  out.dir1.resize(g.t1_count());
  out.dir2.resize(g.t2_count());
  auto mean = [](DirCoeff a, DirCoeff b) { return DirCoeff{0.5 * (a.k + b.k), 0.5 * (a.h + b.h)}; };
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i + 1 < g.nx(); ++i)
      out.dir1[g.t1_face(i, j)] = mean(cell_coeff(1, g.cell(i, j)), cell_coeff(1, g.cell(i + 1, j)));
  for (int j = 0; j + 1 < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      out.dir2[g.t2_face(i, j)] = mean(cell_coeff(2, g.cell(i, j)), cell_coeff(2, g.cell(i, j + 1)));
  return out;
}

std::pair<double, double> CostModel::packet_cost(std::size_t cell, double t1, double t2) const {
  require_flow(t1, t2);
  return {law_.packet(cell_coeff(1, cell), t1), law_.packet(cell_coeff(2, cell), t2)};
}

double CostModel::local_transport_cost(std::size_t cell, double t1, double t2) const {
  require_flow(t1, t2);
  return law_.local(cell_coeff(1, cell), t1) + law_.local(cell_coeff(2, cell), t2);
}

std::pair<double, double> CostModel::marginal_cost(std::size_t cell, double t1, double t2) const {
  require_flow(t1, t2);
  return {law_.marginal(cell_coeff(1, cell), t1), law_.marginal(cell_coeff(2, cell), t2)};
}

double CostModel::beckmann_potential(std::size_t cell, double t1, double t2) const {
  require_flow(t1, t2);
  return law_.potential(cell_coeff(1, cell), t1) + law_.potential(cell_coeff(2, cell), t2);
}

std::pair<ScalarField, ScalarField> independent_costs(const CostModel& model) {
  if (model.kind() != CostKind::kIndependent)
    throw ParameterError("model is congestion dependent");
  return {model.k1(), model.k2()};
}

}  // namespace contnet
