#include "scenario_file.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

#include "contnet/error.hpp"
#include "contnet/field_io.hpp"

namespace contnet::cli {

namespace {

using nlohmann::json;

// A JSON value together with its pointer, for error messages.
struct Node {
  const json& v;
  std::string ptr;

  [[noreturn]] void fail(const std::string& what) const {
    throw SchemaError(ptr.empty() ? "/" : ptr, what);
  }

  Node at(const std::string& key) const {
    if (!v.contains(key)) Node{v, ptr + "/" + key}.fail("missing required key");
    return {v.at(key), ptr + "/" + key};
  }
  std::optional<Node> find(const std::string& key) const {
    if (!v.contains(key)) return std::nullopt;
    return Node{v.at(key), ptr + "/" + key};
  }
  Node operator[](std::size_t k) const { return {v.at(k), ptr + "/" + std::to_string(k)}; }

  void object(std::initializer_list<const char*> allowed) const {
    if (!v.is_object()) fail("expected an object");
    for (const auto& item : v.items()) {
      const bool known = std::any_of(allowed.begin(), allowed.end(),
                                     [&](const char* k) { return item.key() == k; });
      if (!known) Node{item.value(), ptr + "/" + item.key()}.fail("unknown key");
    }
  }
  std::size_t array() const {
    if (!v.is_array()) fail("expected an array");
    return v.size();
  }
  double number() const {
    if (!v.is_number()) fail("expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail("expected a finite number");
    return x;
  }
  int integer() const {
    if (!v.is_number_integer()) fail("expected an integer");
    const auto x = v.get<long long>();
    if (x < -1000000000LL || x > 1000000000LL) fail("integer out of range");
    return static_cast<int>(x);
  }
  std::string string() const {
    if (!v.is_string()) fail("expected a string");
    return v.get<std::string>();
  }
  Point point() const {
    if (array() != 2) fail("expected [x1, x2]");
    return {(*this)[0].number(), (*this)[1].number()};
  }
  CellIndex cell() const {
    if (array() != 2) fail("expected [i, j]");
    return {(*this)[0].integer(), (*this)[1].integer()};
  }
};

class Loader {
 public:
  explicit Loader(std::filesystem::path file) : file_(std::move(file)) {
    base_ = file_.parent_path();
  }

  ScenarioFile load() {
    std::ifstream in(file_, std::ios::binary);
    if (!in) throw ParameterError("cannot open scenario " + file_.string());
    std::stringstream buf;
    buf << in.rdbuf();
    json doc;
    try {
      doc = json::parse(buf.str());
    } catch (const json::parse_error& e) {
      throw ParseError("scenario is not valid JSON (byte " + std::to_string(e.byte) + ")", 0);
    }
    inputs_.push_back(file_);
    const Node root{doc, ""};
    root.object({"grid", "cost", "demand", "solver", "mode", "output", "hjb", "geometry",
                 "dafermos", "dense_sim"});

    ScenarioFile out(parse_grid(root.at("grid")));
    const Grid& g = out.grid;
    if (auto n = root.find("cost")) out.cost = parse_cost(*n, g);
    if (auto n = root.find("demand")) out.rho = parse_demand(*n, g);
    if (auto n = root.find("solver")) out.options = parse_solver(*n);
    if (auto n = root.find("mode")) out.mode = n->string();
    if (auto n = root.find("output")) out.output = resolve(n->string());
    if (auto n = root.find("hjb")) out.hjb = parse_hjb(*n);
    if (auto n = root.find("geometry")) out.geometry = parse_geometry(*n);
    if (auto n = root.find("dafermos")) out.dafermos = parse_dafermos(*n);
    if (auto n = root.find("dense_sim")) out.dense_sim = parse_dense(*n);
    out.inputs = inputs_;

    if (!out.rho.empty()) {
      Scenario check{g, out.cost ? *out.cost : CostModel::independent(ScalarField::constant(g, 1.0),
                                                                      ScalarField::constant(g, 1.0)),
                     out.rho, out.options};
      check_balance(check);
    }
    return out;
  }

 private:
  std::filesystem::path resolve(const std::string& p) const {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base_ / path;
  }

  Grid parse_grid(const Node& n) {
    n.object({"a", "b", "nx", "ny"});
    const double a = n.at("a").number();
    const double b = n.at("b").number();
    const int nx = n.at("nx").integer();
    const int ny = n.at("ny").integer();
    if (nx < 2 || ny < 2) n.fail("nx and ny must be at least 2");
    if (nx > 4096 || ny > 4096) n.fail("grid larger than 4096 cells per side");
    if (!(a > 0.0) || !(b > 0.0)) n.fail("a and b must be positive");
    return Grid(a, b, nx, ny);
  }

  ScalarField parse_field(const Node& n, const Grid& g) {
    if (n.v.is_number()) return ScalarField::constant(g, n.number());
    if (!n.v.is_object()) n.fail("expected a number, {\"csv\": ...} or {\"quadratic\": ...}");
    if (n.v.contains("csv")) {
      n.object({"csv"});
      const auto path = resolve(n.at("csv").string());
      inputs_.push_back(path);
      try {
        return read_field(path, g);
      } catch (const ParseError& e) {
        throw ParseError(path.filename().string() + ": " + e.message(), e.line());
      }
    }
    n.object({"quadratic"});
    const Node q = n.at("quadratic");
    q.object({"c0", "x1", "x2", "x1x1", "x1x2", "x2x2"});
    auto coef = [&](const char* k) { return q.find(k) ? q.at(k).number() : 0.0; };
    const double c0 = coef("c0"), p1 = coef("x1"), p2 = coef("x2");
    const double p11 = coef("x1x1"), p12 = coef("x1x2"), p22 = coef("x2x2");
    return ScalarField::sample(g, [=](Point x) {
      return c0 + p1 * x.x1 + p2 * x.x2 + p11 * x.x1 * x.x1 + p12 * x.x1 * x.x2 +
             p22 * x.x2 * x.x2;
    });
  }

  CostModel parse_cost(const Node& n, const Grid& g) {
    if (!n.v.is_object()) n.fail("expected an object");
    const std::string type = n.at("type").string();
    try {
      if (type == "independent") {
        n.object({"type", "c1", "c2"});
        return CostModel::independent(parse_field(n.at("c1"), g), parse_field(n.at("c2"), g));
      }
      if (type == "monomial") {
        n.object({"type", "k1", "k2", "beta"});
        return CostModel::monomial(parse_field(n.at("k1"), g), parse_field(n.at("k2"), g),
                                   n.at("beta").number());
      }
      if (type == "affine") {
        n.object({"type", "k1", "k2", "h1", "h2"});
        return CostModel::affine(parse_field(n.at("k1"), g), parse_field(n.at("k2"), g),
                                 parse_field(n.at("h1"), g), parse_field(n.at("h2"), g));
      }
    } catch (const ParameterError& e) {
      n.fail(e.what());
    }
    n.at("type").fail("unknown cost type '" + type + "'");
  }

  std::vector<ScalarField> parse_demand(const Node& n, const Grid& g) {
    std::vector<ScalarField> out;
    const double area = g.cell_area();
    for (std::size_t k = 0, m = n.array(); k < m; ++k) {
      const Node cls = n[k];
      cls.object({"cells", "dipoles", "line_sources", "field"});
      std::vector<double> rho(g.cell_count(), 0.0);
      auto cell_at = [&](const Node& p) {
        const Point x = p.point();
        if (!g.contains(x)) p.fail("point outside the domain");
        return g.cell(g.nearest_cell(x));
      };
      if (auto cells = cls.find("cells"))
        for (std::size_t e = 0, ne = cells->array(); e < ne; ++e) {
          const Node item = (*cells)[e];
          item.object({"cell", "rate"});
          const Node cn = item.at("cell");
          const CellIndex c = cn.cell();
          if (c.i < 0 || c.j < 0 || c.i >= g.nx() || c.j >= g.ny()) cn.fail("cell outside the grid");
          rho[g.cell(c)] += item.at("rate").number() / area;
        }
      if (auto dip = cls.find("dipoles"))
        for (std::size_t e = 0, ne = dip->array(); e < ne; ++e) {
          const Node item = (*dip)[e];
          item.object({"source", "sink", "rate"});
          const double r = item.at("rate").number();
          rho[cell_at(item.at("source"))] += r / area;
          rho[cell_at(item.at("sink"))] -= r / area;
        }
      if (auto lines = cls.find("line_sources"))
        for (std::size_t e = 0, ne = lines->array(); e < ne; ++e) {
          const Node item = (*lines)[e];
          item.object({"from", "to", "sink", "rate"});
          const Point a = item.at("from").point();
          const Point b = item.at("to").point();
          if (!g.contains(a) || !g.contains(b)) item.fail("line source leaves the domain");
          const double r = item.at("rate").number();
          // Cells hit by samples at a quarter cell spacing share the rate.
          std::vector<std::size_t> hit;
          const double len = std::hypot(b.x1 - a.x1, b.x2 - a.x2);
          const int pieces =
              std::max(1, static_cast<int>(std::ceil(4.0 * len / std::min(g.h1(), g.h2()))));
          for (int s = 0; s <= pieces; ++s) {
            const double t = static_cast<double>(s) / pieces;
            const std::size_t c =
                g.cell(g.nearest_cell({a.x1 + t * (b.x1 - a.x1), a.x2 + t * (b.x2 - a.x2)}));
            if (std::find(hit.begin(), hit.end(), c) == hit.end()) hit.push_back(c);
          }
          for (std::size_t c : hit) rho[c] += r / static_cast<double>(hit.size()) / area;
          rho[cell_at(item.at("sink"))] -= r / area;
        }
      if (auto f = cls.find("field")) {
        const ScalarField extra = parse_field(*f, g);
        for (std::size_t c = 0; c < rho.size(); ++c) rho[c] += extra[c];
      }
      out.emplace_back(g, std::move(rho));
    }
    return out;
  }

  SolverOptions parse_solver(const Node& n) {
    n.object({"tol", "max_iters", "seed", "variant", "balance_tol"});
    SolverOptions o;
    if (auto v = n.find("tol")) {
      o.tol = v->number();
      if (!(o.tol > 0.0)) v->fail("tol must be positive");
    }
    if (auto v = n.find("max_iters")) {
      o.max_iters = v->integer();
      if (o.max_iters < 1) v->fail("max_iters must be at least 1");
    }
    if (auto v = n.find("seed")) {
      if (!v->v.is_number_unsigned()) v->fail("expected a nonnegative integer");
      o.seed = v->v.get<std::uint64_t>();
    }
    if (auto v = n.find("balance_tol")) o.balance_tol = v->number();
    if (auto v = n.find("variant")) {
      const std::string s = v->string();
      if (s == "plain") o.variant = FwVariant::kPlain;
      else if (s == "conjugate") o.variant = FwVariant::kConjugate;
      else if (s == "pairwise") o.variant = FwVariant::kPairwise;
      else v->fail("unknown variant '" + s + "'");
    }
    return o;
  }

  HjbSpec parse_hjb(const Node& n) {
    n.object({"target", "target_mask", "origins"});
    HjbSpec h;
    const bool has_target = n.find("target").has_value();
    if (has_target == n.find("target_mask").has_value())
      n.fail("give exactly one of target or target_mask");
    if (has_target) {
      const Node t = n.at("target");
      if (t.v.is_string()) {
        if (t.string() != "south_east") t.fail("unknown target '" + t.string() + "'");
        h.south_east = true;
      } else {
        for (std::size_t k = 0, m = t.array(); k < m; ++k) h.targets.push_back(t[k].cell());
        if (h.targets.empty()) t.fail("empty target list");
      }
    } else {
      h.target_mask = resolve(n.at("target_mask").string());
      inputs_.push_back(*h.target_mask);
    }
    if (auto o = n.find("origins"))
      for (std::size_t k = 0, m = o->array(); k < m; ++k) h.origins.push_back((*o)[k].point());
    return h;
  }

  GeometrySpec parse_geometry(const Node& n) {
    n.object({"band_rel", "queries"});
    GeometrySpec s;
    if (auto b = n.find("band_rel")) s.band_rel = b->number();
    if (auto q = n.find("queries"))
      for (std::size_t k = 0, m = q->array(); k < m; ++k) {
        const Node item = (*q)[k];
        item.object({"origin", "dest"});
        GeometryQuery gq{item.at("origin").point(), std::nullopt};
        if (auto d = item.find("dest")) gq.dest = d->point();
        s.queries.push_back(gq);
      }
    return s;
  }

  DafermosSpec parse_dafermos(const Node& n) {
    n.object({"k1", "k2", "modes", "affine", "sizes"});
    DafermosSpec d;
    d.k1 = n.at("k1").number();
    d.k2 = n.at("k2").number();
    if (!(d.k1 > 0.0) || !(d.k2 > 0.0)) n.fail("k1 and k2 must be positive");
    if (auto m = n.find("modes"))
      for (std::size_t k = 0, count = m->array(); k < count; ++k) {
        const Node item = (*m)[k];
        item.object({"kind", "s", "a", "b", "c", "d"});
        Mode mode;
        const std::string kind = item.at("kind").string();
        if (kind == "hyperbolic_x1") mode.kind = ModeKind::kHyperbolicX1;
        else if (kind == "hyperbolic_x2") mode.kind = ModeKind::kHyperbolicX2;
        else item.at("kind").fail("unknown mode kind '" + kind + "'");
        mode.s = item.at("s").number();
        auto opt = [&](const char* key) { return item.find(key) ? item.at(key).number() : 0.0; };
        mode.a = opt("a");
        mode.b = opt("b");
        mode.c = opt("c");
        mode.d = opt("d");
        d.modes.push_back(mode);
      }
    if (auto a = n.find("affine")) {
      a->object({"c0", "c1", "c2"});
      auto opt = [&](const char* key) { return a->find(key) ? a->at(key).number() : 0.0; };
      d.affine = {opt("c0"), opt("c1"), opt("c2")};
    }
    if (auto s = n.find("sizes")) {
      d.sizes.clear();
      for (std::size_t k = 0, m = s->array(); k < m; ++k) {
        const int v = (*s)[k].integer();
        if (v < 4 || v > 1024) (*s)[k].fail("size must lie in [4, 1024]");
        d.sizes.push_back(v);
      }
      if (d.sizes.size() < 2) s->fail("need at least two sizes");
    }
    return d;
  }

  DenseSimSpec parse_dense(const Node& n) {
    n.object({"densities", "origin", "dest"});
    DenseSimSpec d;
    if (auto s = n.find("densities")) {
      d.densities.clear();
      for (std::size_t k = 0, m = s->array(); k < m; ++k) {
        const int v = (*s)[k].integer();
        if (v < 2 || v > 4096) (*s)[k].fail("density must lie in [2, 4096]");
        d.densities.push_back(v);
      }
      if (d.densities.empty()) s->fail("empty density list");
    }
    d.origin = n.at("origin").point();
    d.dest = n.at("dest").point();
    return d;
  }

  std::filesystem::path file_;
  std::filesystem::path base_;
  std::vector<std::filesystem::path> inputs_;
};

}  // namespace

ScenarioFile load_scenario(const std::filesystem::path& file) { return Loader(file).load(); }

}  // namespace contnet::cli
