#pragma once

#include "mmtk/types.hpp"

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mmtk::cli {

struct RunConfig {
  std::string command;
  std::string rep_path;
  std::string beta = "auto";       // "auto" or comma-separated p-coordinates
  int vertex = -1;                 // vertex used by "auto"; -1 picks the lexicographic maximum
  std::vector<std::string> point;  // complex tokens such as 1, -2.5, 0.5+0.2i, -i
  std::vector<int> w;              // coordinate indices spanning W; empty means automatic
  std::optional<int> samples;
  std::uint64_t seed = 7;
  std::map<std::string, double> tol;
  std::string out_path;            // directory for report.json and CSV artifacts
};

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kIoError = 2,
  kLibraryError = 3,
};

Complex parse_complex(const std::string& token);
Vector parse_point(const std::vector<std::string>& tokens);
Tolerances apply_overrides(const std::map<std::string, double>& overrides);

/// Executes one command; writes the report to `out` and artifacts under
/// config.out_path. Library errors propagate as mmtk::Error.
int run(const RunConfig& config, std::ostream& out);

/// Parses argv, runs, and converts errors into {"error", "message"} JSON.
int main(int argc, char** argv);

}  // namespace mmtk::cli
