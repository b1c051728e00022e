#include "runner.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "contnet/assignment.hpp"
#include "contnet/dafermos.hpp"
#include "contnet/dense_sim.hpp"
#include "contnet/error.hpp"
#include "contnet/field_io.hpp"
#include "contnet/geometry.hpp"
#include "contnet/hjb.hpp"
#include "contnet/kernels.hpp"
#include "scenario_file.hpp"

namespace contnet::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

enum class LogLevel { kQuiet, kInfo, kDebug };

LogLevel log_level() {
  const char* v = std::getenv("CONTNET_LOG");
  if (!v) return LogLevel::kInfo;
  const std::string s(v);
  if (s == "quiet" || s == "error") return LogLevel::kQuiet;
  if (s == "debug") return LogLevel::kDebug;
  return LogLevel::kInfo;
}

std::string read_bytes(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ParameterError("cannot read " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ParameterError("cannot open " + file.string() + " for writing");
  out << text;
}

// Numbers that JSON cannot hold (inf, nan) are written as strings.
json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

json grid_json(const Grid& g) {
  return {{"a", g.a()}, {"b", g.b()}, {"nx", g.nx()}, {"ny", g.ny()}, {"h1", g.h1()},
          {"h2", g.h2()}};
}

json point_json(Point p) { return json::array({p.x1, p.x2}); }
json cell_json(CellIndex c) { return json::array({c.i, c.j}); }

json residual_json(const ResidualReport& r) {
  return {{"max_used", number(r.max_used)},
          {"mean_used", number(r.mean_used)},
          {"frac_used_above", number(r.frac_used_above)},
          {"max_unused_violation", number(r.max_unused_violation)},
          {"mean_cost", number(r.mean_cost)},
          {"tol", number(r.tol)},
          {"gap", number(r.gap)},
          {"used_faces", r.used_faces},
          {"unused_faces", r.unused_faces}};
}

json field_residual_json(const FieldResidual& r) {
  return {{"max_abs", number(r.max_abs)}, {"rms", number(r.rms)}, {"relative", number(r.relative)}};
}

struct Context {
  const ScenarioFile& sc;
  fs::path out;
  json report;
  std::vector<std::string> files;
  int exit_code = kExitOk;

  fs::path file(const std::string& name) {
    files.push_back(name);
    return out / name;
  }
};

const CostModel& require_cost(const ScenarioFile& sc) {
  if (!sc.cost) throw SchemaError("/cost", "this mode needs a cost model");
  return *sc.cost;
}

std::pair<ScalarField, ScalarField> require_independent(const ScenarioFile& sc) {
  const CostModel& m = require_cost(sc);
  if (m.kind() != CostKind::kIndependent)
    throw SchemaError("/cost/type", "this mode needs congestion-independent costs");
  return independent_costs(m);
}

CellIndex snap(const Grid& g, Point p, const std::string& pointer) {
  if (!g.contains(p)) throw SchemaError(pointer, "point outside the domain");
  return g.nearest_cell(p);
}

void run_validate(Context& ctx) {
  const ScenarioFile& sc = ctx.sc;
  json checks = json::array();
  auto add = [&](const std::string& name, bool passed, json detail = nullptr) {
    json c{{"name", name}, {"passed", passed}};
    if (!detail.is_null()) c["detail"] = std::move(detail);
    checks.push_back(std::move(c));
  };
  add("schema", true);
  add("grid", true, grid_json(sc.grid));
  if (sc.cost)
    add("cost", true,
        {{"type", cost_kind_name(sc.cost->kind())}, {"convex", sc.cost->convex()}});
  for (std::size_t k = 0; k < sc.rho.size(); ++k) {
    const double err = balance_error(sc.rho[k]);
    add("balance class " + std::to_string(k), err <= sc.options.balance_tol,
        {{"relative_imbalance", err}});
    bool single_sink = true;
    try {
      class_sink(sc.rho[k]);
    } catch (const std::exception&) {
      single_sink = false;
    }
    // Informational: Frank-Wolfe needs one sink cell per class.
    add("single sink class " + std::to_string(k), true, {{"single_sink", single_sink}});
  }
  bool all = true;
  for (const auto& c : checks) all = all && c["passed"].get<bool>();
  ctx.report["checks"] = std::move(checks);
  if (!all) ctx.exit_code = kExitValidation;
}

void run_hjb(Context& ctx) {
  const ScenarioFile& sc = ctx.sc;
  if (!sc.hjb) throw SchemaError("/hjb", "hjb mode needs an hjb section");
  const auto [c1, c2] = require_independent(sc);
  const Grid& g = sc.grid;
  CellMask target;
  if (sc.hjb->south_east) {
    target = south_east_boundary_mask(g);
  } else if (sc.hjb->target_mask) {
    const ScalarField m = read_field(*sc.hjb->target_mask, g);
    target.assign(g.cell_count(), 0);
    for (std::size_t c = 0; c < target.size(); ++c) target[c] = m[c] != 0.0;
  } else {
    for (std::size_t k = 0; k < sc.hjb->targets.size(); ++k) {
      const CellIndex c = sc.hjb->targets[k];
      if (c.i < 0 || c.j < 0 || c.i >= g.nx() || c.j >= g.ny())
        throw SchemaError("/hjb/target/" + std::to_string(k), "cell outside the grid");
    }
    target = mask_of_cells(g, sc.hjb->targets);
  }
  const ValueField v = solve_value(c1, c2, target);
  write_field(ctx.file("value.csv"), v.value);
  int reachable = 0;
  int tied = 0;
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    reachable += v.value[c] != kUnreachable;
    tied += v.tied[c] != 0;
  }
  json paths = json::array();
  for (std::size_t k = 0; k < sc.hjb->origins.size(); ++k) {
    const CellIndex o = snap(g, sc.hjb->origins[k], "/hjb/origins/" + std::to_string(k));
    json entry{{"origin", point_json(sc.hjb->origins[k])}, {"cell", cell_json(o)}};
    if (!v.reachable(o)) {
      entry["reachable"] = false;
    } else {
      const StaircasePath p = extract_path(v, o);
      const std::string name = "path_" + std::to_string(k) + ".csv";
      write_polyline(ctx.file(name), p.vertices());
      entry["reachable"] = true;
      entry["value"] = v.value.at(o.i, o.j);
      entry["turns"] = p.turns();
      entry["east_ties"] = p.east_ties;
      entry["path_csv"] = name;
    }
    paths.push_back(std::move(entry));
  }
  ctx.report["hjb"] = {{"reachable_cells", reachable},
                       {"tied_cells", tied},
                       {"east_ties", v.east_ties},
                       {"origins", std::move(paths)}};
}

void run_geometry(Context& ctx) {
  const ScenarioFile& sc = ctx.sc;
  const auto [c1, c2] = require_independent(sc);
  const Grid& g = sc.grid;
  const GeometrySpec spec = sc.geometry.value_or(GeometrySpec{});
  const CurlGapField f = curl_gap(c1, c2, spec.band_rel);
  write_field(ctx.file("curl_gap.csv"), f.u);
  json info{{"case", geometry_case_name(f.kind)},
            {"positive_cells", f.positive},
            {"negative_cells", f.negative},
            {"zero_cells", f.zero},
            {"zero_band", f.zero_band},
            {"supported", f.supported}};
  if (!f.reason.empty()) info["reason"] = f.reason;
  if ((f.kind == GeometryCase::kAttractorSplit || f.kind == GeometryCase::kRepellerSplit) &&
      f.supported)
    write_polyline(ctx.file("ell.csv"), f.ell());

  const double h = std::max(g.h1(), g.h2());
  json queries = json::array();
  for (std::size_t k = 0; k < spec.queries.size(); ++k) {
    const GeometryQuery& q = spec.queries[k];
    const std::string ptr = "/geometry/queries/" + std::to_string(k);
    const CellIndex o = snap(g, q.origin, ptr + "/origin");
    json entry{{"origin", point_json(q.origin)}, {"origin_cell", cell_json(o)}};
    CellMask target;
    if (q.dest) {
      const CellIndex d = snap(g, *q.dest, ptr + "/dest");
      if (d.i < o.i || d.j < o.j) throw SchemaError(ptr + "/dest", "destination is not South-East of the origin");
      entry["dest"] = point_json(*q.dest);
      entry["dest_cell"] = cell_json(d);
      target = mask_of_cells(g, std::vector<CellIndex>{d});
    } else {
      entry["dest"] = "south_east_boundary";
      target = south_east_boundary_mask(g);
    }
    const ValueField v = solve_value(c1, c2, target);
    const StaircasePath dp = extract_path(v, o);
    const std::string dp_name = "dp_path_" + std::to_string(k) + ".csv";
    write_polyline(ctx.file(dp_name), dp.vertices());
    const double dp_cost = line_integral(c1, c2, dp);
    entry["dp_cost"] = dp_cost;
    entry["dp_turns"] = dp.turns();
    entry["dp_east_ties"] = dp.east_ties;
    entry["dp_path_csv"] = dp_name;
    try {
      const StaircasePath oracle =
          q.dest ? point_to_point_path(f, o, g.nearest_cell(*q.dest))
                 : point_to_boundary_path(f, o, boundary_costs(c1, c2));
      const std::string name = "oracle_path_" + std::to_string(k) + ".csv";
      write_polyline(ctx.file(name), oracle.vertices());
      const double cost = line_integral(c1, c2, oracle);
      entry["oracle"] = "closed_form";
      entry["oracle_cost"] = cost;
      entry["oracle_turns"] = oracle.turns();
      entry["oracle_path_csv"] = name;
      entry["cost_gap_over_h"] = (cost - dp_cost) / h;
      entry["same_path"] = oracle == dp;
    } catch (const UnsupportedGeometry& e) {
      entry["oracle"] = "unsupported";
      entry["reason"] = e.what();
    } catch (const PreconditionError& e) {
      entry["oracle"] = "precondition_failed";
      entry["reason"] = e.what();
    }
    queries.push_back(std::move(entry));
  }
  info["queries"] = std::move(queries);
  ctx.report["geometry"] = std::move(info);
}

Scenario assignment_scenario(const ScenarioFile& sc, const RunOptions& opt) {
  const CostModel& m = require_cost(sc);
  if (sc.rho.empty()) throw SchemaError("/demand", "this mode needs at least one demand class");
  Scenario s{sc.grid, m, sc.rho, sc.options};
  if (opt.tol) s.options.tol = *opt.tol;
  if (opt.max_iters) s.options.max_iters = *opt.max_iters;
  if (opt.seed) s.options.seed = *opt.seed;
  return s;
}

// Writes per-class and total flows, reloads them and checks conservation.
json write_flows(Context& ctx, const std::vector<FlowField>& flows,
                 const std::vector<ScalarField>& rho) {
  json classes = json::array();
  for (std::size_t k = 0; k < flows.size(); ++k) {
    const std::string t1 = "flow_c" + std::to_string(k) + "_t1.csv";
    const std::string t2 = "flow_c" + std::to_string(k) + "_t2.csv";
    write_flow(ctx.file(t1), ctx.file(t2), flows[k]);
    const FlowField back = read_flow(ctx.out / t1, ctx.out / t2);
    classes.push_back({{"class", static_cast<int>(k)},
                       {"t1_csv", t1},
                       {"t2_csv", t2},
                       {"min_flow", flows[k].min_value()},
                       {"conservation_error", conservation_error(back, rho[k])}});
  }
  if (flows.size() > 1) write_flow(ctx.file("flow_total_t1.csv"), ctx.file("flow_total_t2.csv"), total_flow(flows));
  return classes;
}

void run_assignment(Context& ctx, const RunOptions& opt, Objective obj) {
  const Scenario s = assignment_scenario(ctx.sc, opt);
  const AssignmentResult r = frank_wolfe(s, obj);
  json out{{"objective", obj == Objective::kGlobal ? "global" : "wardrop"},
           {"variant", fw_variant_name(s.options.variant)},
           {"objective_value", r.objective_value},
           {"total_cost", r.total_cost},
           {"iterations", r.iterations},
           {"converged", r.converged},
           {"tol", s.options.tol},
           {"final_gap", r.gap_history.empty() ? json(nullptr) : number(r.gap_history.back())},
           {"gap_history", r.gap_history},
           {"notes", r.notes}};
  out["classes"] = write_flows(ctx, r.flows, s.rho);
  const FlowField total = total_flow(r.flows);
  const FaceValues link = link_costs(s.cost.face_coefficients(), total, obj);
  json residuals = json::array();
  for (std::size_t k = 0; k < r.values.size(); ++k) {
    const int cls = r.value_classes[k];
    const std::string name = "value_c" + std::to_string(cls) + ".csv";
    write_field(ctx.file(name), r.values[k].value, cls);
    ResidualReport rep = stationarity_residual(r.flows[cls], link, r.values[k].value);
    if (!r.gap_history.empty()) rep.gap = r.gap_history.back();
    json entry = residual_json(rep);
    entry["class"] = cls;
    entry["value_csv"] = name;
    residuals.push_back(std::move(entry));
  }
  out["residuals"] = std::move(residuals);
  ctx.report["assignment"] = std::move(out);
  if (!r.converged) ctx.exit_code = kExitNumerical;
}

void run_affine_direct(Context& ctx, const RunOptions& opt) {
  const Scenario s = assignment_scenario(ctx.sc, opt);
  const AssignmentResult r = solve_affine_direct(s);
  json out{{"objective_value", r.objective_value},
           {"total_cost", r.total_cost},
           {"cg_iterations", r.cg_iterations},
           {"cg_residual", r.cg_residual},
           {"converged", r.converged},
           {"min_flow", r.min_flow},
           {"notes", r.notes}};
  out["classes"] = write_flows(ctx, r.flows, s.rho);
  if (r.multiplier) {
    write_field(ctx.file("zeta.csv"), *r.multiplier);
    out["kkt"] = residual_json(kkt_residual(r.flows[0], s.cost, *r.multiplier));
  }
  ctx.report["affine_direct"] = std::move(out);
  if (!r.converged) ctx.exit_code = kExitNumerical;
}

void run_dafermos(Context& ctx) {
  const ScenarioFile& sc = ctx.sc;
  if (!sc.dafermos) throw SchemaError("/dafermos", "dafermos mode needs a dafermos section");
  const DafermosSpec& d = *sc.dafermos;
  const Grid& g = sc.grid;
  const SeparableSolution sol(g.a(), g.b(), d.k1, d.k2, d.modes, d.affine);
  std::vector<double> phi(g.cell_count());
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) phi[g.cell(i, j)] = sol.eval(g.center(i, j)).phi;
  write_field(ctx.file("phi.csv"), ScalarField(g, std::move(phi)));
  const StreamFlows sf = flows_from_stream(sol, g);
  write_flow(ctx.file("flow_t1.csv"), ctx.file("flow_t2.csv"), sf.flow);
  const RefinementStudy st = refinement_study(sol, d.sizes);
  json rows = json::array();
  for (const auto& r : st.rows)
    rows.push_back({{"n", r.n},
                    {"pde_rms", number(r.pde)},
                    {"divergence_rms", number(r.divergence)},
                    {"equalized_rms", number(r.equalized)}});
  ctx.report["dafermos"] = {
      {"modes", static_cast<int>(d.modes.size())},
      {"min_flow", sf.min_flow},
      {"negative_faces", sf.negative_faces},
      {"interior_divergence", field_residual_json(interior_divergence(sf.flow))},
      {"equalized_cost", field_residual_json(equalized_cost_residual(sf.flow, d.k1, d.k2))},
      {"pde", field_residual_json(pde_residual(sol, g))},
      {"refinement", std::move(rows)},
      {"pde_order", number(st.pde_order)},
      {"divergence_order", number(st.divergence_order)},
      {"equalized_order", number(st.equalized_order)}};
}

void run_dense(Context& ctx) {
  const ScenarioFile& sc = ctx.sc;
  if (!sc.dense_sim) throw SchemaError("/dense_sim", "dense-sim mode needs a dense_sim section");
  const auto [c1, c2] = require_independent(sc);
  const DenseSimSpec& d = *sc.dense_sim;
  snap(sc.grid, d.origin, "/dense_sim/origin");
  snap(sc.grid, d.dest, "/dense_sim/dest");
  const ConvergenceStudy st = convergence_study(c1, c2, d.origin, d.dest, d.densities);
  std::string table = "density,hausdorff,cost_ratio\n";
  json rows = json::array();
  for (const auto& r : st.rows) {
    table += std::to_string(r.density) + "," + format_double(r.hausdorff) + "," +
             format_double(r.cost_ratio) + "\n";
    const std::string name = "route_n" + std::to_string(r.density) + ".csv";
    write_polyline(ctx.file(name), r.route);
    rows.push_back({{"density", r.density},
                    {"hausdorff", r.hausdorff},
                    {"cost_ratio", r.cost_ratio},
                    {"route_cost", r.route_cost},
                    {"route_csv", name}});
  }
  write_text(ctx.file("convergence.csv"), table);
  write_polyline(ctx.file("reference.csv"), st.reference);
  json out{{"rows", std::move(rows)},
           {"fallback", st.fallback},
           {"reference_cost", st.rows.front().reference_cost}};
  if (st.fallback) out["fallback_reason"] = st.fallback_reason;
  ctx.report["dense_sim"] = std::move(out);
}

}  // namespace

const std::vector<std::string>& modes() {
  static const std::vector<std::string> m{"hjb",      "geometry", "global",    "wardrop",
                                          "affine-direct", "dafermos", "dense-sim", "validate"};
  return m;
}

std::string git_blob_sha1(const std::string& bytes) {
  const std::string header = "blob " + std::to_string(bytes.size()) + '\0';
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw NumericalError("cannot allocate a digest context");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                  EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, md, &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw NumericalError("SHA-1 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int k = 0; k < len; ++k) {
    std::snprintf(buf, sizeof buf, "%02x", md[k]);
    hex += buf;
  }
  return hex;
}

int run(const RunOptions& opt, std::ostream& err) {
  const LogLevel level = log_level();
  auto fail = [&](int code, const std::string& what) {
    err << "route-cli: " << what << '\n';
    return code;
  };
  if (std::find(modes().begin(), modes().end(), opt.mode) == modes().end())
    return fail(kExitValidation, "unknown mode '" + opt.mode + "'");

  try {
    const ScenarioFile sc = load_scenario(opt.scenario);
    if (sc.mode && *sc.mode != opt.mode && level == LogLevel::kDebug)
      err << "route-cli: scenario suggests mode '" << *sc.mode << "'\n";
    const std::optional<fs::path> out = opt.out ? opt.out : sc.output;
    if (!out) return fail(kExitValidation, "no output directory (--out or \"output\")");
    fs::create_directories(*out);

    Context ctx{sc, *out, json::object(), {}, kExitOk};
    json inputs = json::array();
    std::string combined;
    for (const fs::path& p : sc.inputs) {
      const std::string sha = git_blob_sha1(read_bytes(p));
      inputs.push_back({{"file", p.filename().string()}, {"sha1", sha}});
      combined += sha + "\n";
    }
    ctx.report["mode"] = opt.mode;
    ctx.report["inputs"] = std::move(inputs);
    ctx.report["input_hash"] = git_blob_sha1(combined);
    ctx.report["grid"] = grid_json(sc.grid);

    const auto t0 = std::chrono::steady_clock::now();
    if (opt.mode == "validate") run_validate(ctx);
    else if (opt.mode == "hjb") run_hjb(ctx);
    else if (opt.mode == "geometry") run_geometry(ctx);
    else if (opt.mode == "global") run_assignment(ctx, opt, Objective::kGlobal);
    else if (opt.mode == "wardrop") run_assignment(ctx, opt, Objective::kWardrop);
    else if (opt.mode == "affine-direct") run_affine_direct(ctx, opt);
    else if (opt.mode == "dafermos") run_dafermos(ctx);
    else run_dense(ctx);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    ctx.report["files"] = ctx.files;
    ctx.report["exit_code"] = ctx.exit_code;
    if (opt.timings)
      ctx.report["timings"] = {{"run_seconds", seconds},
                               {"isa", kernels::isa_name(kernels::active_isa())}};
    write_text(*out / "report.json", ctx.report.dump(2) + "\n");
    if (level != LogLevel::kQuiet)
      err << "route-cli: " << opt.mode << " wrote " << ctx.files.size() + 1 << " files to "
          << out->string() << '\n';
    if (ctx.exit_code == kExitNumerical) err << "route-cli: solver did not converge\n";
    return ctx.exit_code;
  } catch (const SchemaError& e) {
    return fail(kExitValidation, std::string("schema error at ") + e.what());
  } catch (const ParseError& e) {
    return fail(kExitValidation, std::string("parse error: ") + e.what());
  } catch (const PreconditionError& e) {
    return fail(kExitValidation, e.what());
  } catch (const ParameterError& e) {
    return fail(kExitValidation, e.what());
  } catch (const DomainError& e) {
    return fail(kExitValidation, e.what());
  } catch (const UnsupportedGeometry& e) {
    return fail(kExitValidation, e.what());
  } catch (const NumericalError& e) {
    return fail(kExitNumerical, std::string("numerical failure: ") + e.what());
  } catch (const fs::filesystem_error& e) {
    return fail(kExitValidation, e.what());
  }
}

}  // namespace contnet::cli
