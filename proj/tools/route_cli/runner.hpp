#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace contnet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

struct RunOptions {
  std::string mode;
  std::filesystem::path scenario;
  std::optional<std::filesystem::path> out;
  std::optional<double> tol;
  std::optional<int> max_iters;
  std::optional<std::uint64_t> seed;
  bool timings = false;
};

const std::vector<std::string>& modes();

// Loads the scenario, runs one mode and writes the bundle (CSVs and
// report.json) into the output directory. Diagnostics go to `err`.
int run(const RunOptions& opt, std::ostream& err);

// Git blob id of a byte string: SHA-1 of "blob <size>\0" + bytes, in hex.
std::string git_blob_sha1(const std::string& bytes);

}  // namespace contnet::cli
