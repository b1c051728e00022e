#pragma once

// Field CSV files. Line 1: `nx,ny,h1,h2`. Line 2: `kind=<scalar|t1|t2>,class=<j>`.
// Then one row per constant-x2 line, values printed with 17 significant
// digits. A t1 file has ny rows of nx-1 values, a t2 file ny-1 rows of nx.
// Unreachable value cells are written as `inf`.

#include <filesystem>
#include <string>
#include <vector>

#include "contnet/grid.hpp"
#include "contnet/path.hpp"

namespace contnet {

enum class FieldKind { kScalar, kT1, kT2 };

struct FieldFile {
  int nx = 0;
  int ny = 0;
  double h1 = 0.0;
  double h2 = 0.0;
  FieldKind kind = FieldKind::kScalar;
  int cls = 0;
  std::vector<double> values;

  Grid grid() const { return Grid(nx * h1, ny * h2, nx, ny); }
};

// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

void write_field(const std::filesystem::path& file, const ScalarField& field, int cls = 0);
void write_flow(const std::filesystem::path& t1_file, const std::filesystem::path& t2_file,
                const FlowField& flow);
void write_polyline(const std::filesystem::path& file, const Polyline& path);

// Throws ParseError (with the offending line) on malformed input.
FieldFile read_field_file(const std::filesystem::path& file);
FieldFile parse_field(const std::string& text);

// Reads a scalar file. When `expected` is given its shape must match.
ScalarField read_field(const std::filesystem::path& file, bool allow_unreachable = false);
ScalarField read_field(const std::filesystem::path& file, const Grid& expected,
                       bool allow_unreachable = false);
FlowField read_flow(const std::filesystem::path& t1_file, const std::filesystem::path& t2_file);

}  // namespace contnet
