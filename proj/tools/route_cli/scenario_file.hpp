#pragma once

// Scenario JSON for route-cli. Every object rejects unknown keys; errors
// carry the JSON pointer of the offending value.
//
// {
//   "grid":   {"a": 1, "b": 1, "nx": 32, "ny": 32},
//   "cost":   {"type": "independent", "c1": F, "c2": F}
//           | {"type": "monomial", "k1": F, "k2": F, "beta": 2}
//           | {"type": "affine", "k1": F, "k2": F, "h1": F, "h2": F},
//   "demand": [ {"cells": [{"cell": [i, j], "rate": r}],
//                "dipoles": [{"source": [x1, x2], "sink": [x1, x2], "rate": r}],
//                "line_sources": [{"from": [x1, x2], "to": [x1, x2], "sink": [x1, x2],
//                                  "rate": r}],
//                "field": {"csv": "rho.csv"}} ],
//   "solver": {"tol": 1e-4, "max_iters": 20000, "seed": 1, "variant": "pairwise"},
//   "mode": "wardrop", "output": "out/",
//   "hjb": {...}, "geometry": {...}, "dafermos": {...}, "dense_sim": {...}
// }
//
// A field F is a number, {"csv": "file"} or
// {"quadratic": {"c0", "x1", "x2", "x1x1", "x1x2", "x2x2"}} sampled at cell
// centers. Rates are in bps per cell (rho = rate / cell area); `field` adds a
// density directly. Relative paths resolve against the scenario's directory.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "contnet/cost_model.hpp"
#include "contnet/dafermos.hpp"
#include "contnet/grid.hpp"
#include "contnet/scenario.hpp"

namespace contnet::cli {

class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string pointer, const std::string& what)
      : std::runtime_error(pointer + ": " + what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

struct HjbSpec {
  // Exactly one target form is set.
  bool south_east = false;
  std::vector<CellIndex> targets;
  std::optional<std::filesystem::path> target_mask;  // scalar CSV, nonzero = target
  std::vector<Point> origins;
};

struct GeometryQuery {
  Point origin;
  std::optional<Point> dest;  // absent: point-to-boundary query
};

struct GeometrySpec {
  double band_rel = 1e-9;
  std::vector<GeometryQuery> queries;
};

struct DafermosSpec {
  double k1 = 1.0;
  double k2 = 1.0;
  std::vector<Mode> modes;
  AffineTerm affine;
  std::vector<int> sizes{16, 32, 64};
};

struct DenseSimSpec {
  std::vector<int> densities{8, 16, 32, 64, 128};
  Point origin;
  Point dest;
};

struct ScenarioFile {
  explicit ScenarioFile(Grid g) : grid(g) {}

  Grid grid;
  std::optional<CostModel> cost;
  std::vector<ScalarField> rho;  // one per demand class
  SolverOptions options;
  std::optional<std::string> mode;
  std::optional<std::filesystem::path> output;
  std::optional<HjbSpec> hjb;
  std::optional<GeometrySpec> geometry;
  std::optional<DafermosSpec> dafermos;
  std::optional<DenseSimSpec> dense_sim;
  // Every file read: the scenario first, then referenced CSVs in order.
  std::vector<std::filesystem::path> inputs;
};

// Parses and validates; demand balance is checked here (PreconditionError).
// Throws SchemaError for structural problems and ParseError for bad JSON or CSV.
ScenarioFile load_scenario(const std::filesystem::path& file);

}  // namespace contnet::cli
