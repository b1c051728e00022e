#include "contnet/field_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "contnet/error.hpp"

namespace contnet {

namespace {

const char* kind_name(FieldKind k) {
  switch (k) {
    case FieldKind::kScalar: return "scalar";
    case FieldKind::kT1: return "t1";
    case FieldKind::kT2: return "t2";
  }
  return "scalar";
}

std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ParameterError("cannot open " + file.string() + " for writing");
  return out;
}

void write_rows(std::ostream& out, int rows, int cols, std::span<const double> v) {
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c) out << ',';
      out << format_double(v[static_cast<std::size_t>(r) * cols + c]);
    }
    out << '\n';
  }
}

void write_header(std::ostream& out, const Grid& g, FieldKind kind, int cls) {
  out << g.nx() << ',' << g.ny() << ',' << format_double(g.h1()) << ',' << format_double(g.h2())
      << '\n'
      << "kind=" << kind_name(kind) << ",class=" << cls << '\n';
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    parts.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  for (auto& p : parts) {
    const auto b = p.find_first_not_of(" \t");
    const auto e = p.find_last_not_of(" \t");
    p = b == std::string::npos ? std::string() : p.substr(b, e - b + 1);
  }
  return parts;
}

double parse_double(const std::string& s, int line) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (s.empty() || ec != std::errc() || ptr != last)
    throw ParseError("expected a number, got '" + s + "'", line);
  return v;
}

int parse_int(const std::string& s, int line) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("expected an integer, got '" + s + "'", line);
  return v;
}

}  // namespace

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_field(const std::filesystem::path& file, const ScalarField& field, int cls) {
  auto out = open_out(file);
  const Grid& g = field.grid();
  write_header(out, g, FieldKind::kScalar, cls);
  write_rows(out, g.ny(), g.nx(), field.values());
}

void write_flow(const std::filesystem::path& t1_file, const std::filesystem::path& t2_file,
                const FlowField& flow) {
  const Grid& g = flow.grid();
  {
    auto out = open_out(t1_file);
    write_header(out, g, FieldKind::kT1, flow.cls());
    write_rows(out, g.ny(), g.nx() - 1, flow.t1());
  }
  auto out = open_out(t2_file);
  write_header(out, g, FieldKind::kT2, flow.cls());
  write_rows(out, g.ny() - 1, g.nx(), flow.t2());
}

void write_polyline(const std::filesystem::path& file, const Polyline& path) {
  auto out = open_out(file);
  out << "x1,x2\n";
  for (const Point& p : path) out << format_double(p.x1) << ',' << format_double(p.x2) << '\n';
}

FieldFile parse_field(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto next = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };

  FieldFile f;
  if (!next()) throw ParseError("empty field file", 1);
  auto dims = split(line);
  if (dims.size() != 4) throw ParseError("header must read nx,ny,h1,h2", lineno);
  f.nx = parse_int(dims[0], lineno);
  f.ny = parse_int(dims[1], lineno);
  f.h1 = parse_double(dims[2], lineno);
  f.h2 = parse_double(dims[3], lineno);
  if (f.nx < 2 || f.ny < 2) throw ParseError("grid needs at least 2 cells per side", lineno);
  if (!(f.h1 > 0.0) || !(f.h2 > 0.0) || !std::isfinite(f.h1) || !std::isfinite(f.h2))
    throw ParseError("spacings must be positive and finite", lineno);

  if (!next()) throw ParseError("missing kind/class line", lineno + 1);
  auto meta = split(line);
  if (meta.size() != 2 || meta[0].rfind("kind=", 0) != 0 || meta[1].rfind("class=", 0) != 0)
    throw ParseError("second line must read kind=<scalar|t1|t2>,class=<j>", lineno);
  const std::string kind = meta[0].substr(5);
  if (kind == "scalar")
    f.kind = FieldKind::kScalar;
  else if (kind == "t1")
    f.kind = FieldKind::kT1;
  else if (kind == "t2")
    f.kind = FieldKind::kT2;
  else
    throw ParseError("unknown field kind '" + kind + "'", lineno);
  f.cls = parse_int(meta[1].substr(6), lineno);

  const int cols = f.kind == FieldKind::kT1 ? f.nx - 1 : f.nx;
  const int rows = f.kind == FieldKind::kT2 ? f.ny - 1 : f.ny;
  f.values.reserve(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    if (!next())
      throw ParseError("expected " + std::to_string(rows) + " data rows, found " + std::to_string(r),
                       lineno + 1);
    auto cells = split(line);
    if (static_cast<int>(cells.size()) != cols)
      throw ParseError("expected " + std::to_string(cols) + " values, found " +
                           std::to_string(cells.size()),
                       lineno);
    for (const auto& c : cells) f.values.push_back(parse_double(c, lineno));
  }
  if (next()) throw ParseError("unexpected data after the last row", lineno);
  return f;
}

FieldFile read_field_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ParseError("cannot open " + file.string(), 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_field(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(file.string() + ": " + e.message(), e.line());
  }
}

ScalarField read_field(const std::filesystem::path& file, bool allow_unreachable) {
  FieldFile f = read_field_file(file);
  if (f.kind != FieldKind::kScalar) throw ParseError(file.string() + ": not a scalar field", 2);
  return ScalarField(f.grid(), std::move(f.values), allow_unreachable);
}

ScalarField read_field(const std::filesystem::path& file, const Grid& expected,
                       bool allow_unreachable) {
  FieldFile f = read_field_file(file);
  if (f.kind != FieldKind::kScalar) throw ParseError(file.string() + ": not a scalar field", 2);
  if (!(f.grid() == expected))
    throw ParseError(file.string() + ": field shape " + std::to_string(f.nx) + "x" +
                         std::to_string(f.ny) + " does not match the grid",
                     1);
  return ScalarField(expected, std::move(f.values), allow_unreachable);
}

FlowField read_flow(const std::filesystem::path& t1_file, const std::filesystem::path& t2_file) {
  FieldFile a = read_field_file(t1_file);
  FieldFile b = read_field_file(t2_file);
  if (a.kind != FieldKind::kT1) throw ParseError(t1_file.string() + ": not a t1 field", 2);
  if (b.kind != FieldKind::kT2) throw ParseError(t2_file.string() + ": not a t2 field", 2);
  if (a.nx != b.nx || a.ny != b.ny || a.h1 != b.h1 || a.h2 != b.h2 || a.cls != b.cls)
    throw ParseError(t2_file.string() + ": header differs from " + t1_file.string(), 1);
  return FlowField(a.grid(), a.cls, std::move(a.values), std::move(b.values));
}

}  // namespace contnet
