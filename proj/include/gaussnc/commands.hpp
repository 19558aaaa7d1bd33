#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace gaussnc::cli {

enum ExitCode : int {
  kOk = 0,
  kOracleMismatch = 1,   // oracle-compare: some |analytic - oracle| above tolerance
  kMalformedInput = 2,   // unparseable file, grid, flag, or wrong shape
  kInvalidState = 3,     // correlation matrix is not a physical state
  kTruncationTooSmall = 4,
  kNumericalFailure = 5,
};

enum class LogLevel { Quiet = 0, Warn = 1, Info = 2, Debug = 3 };

/// Reads GAUSSNC_LOG (quiet|warn|info|debug or 0..3); defaults to warn.
LogLevel log_level_from_env();

struct RunConfig {
  std::string command;
  std::string input;
  std::string second;
  std::string out;             // empty: stdout
  std::string format = "json"; // json | csv
  std::string which = "all";
  std::string grid;
  int trunc = 80;
  std::uint64_t seed = 0;
  std::optional<double> tol;   // classify: 1e-9, oracle-compare: 1e-4
  std::size_t budget = 20000;
  double deficit_cap = 1e-8;
  unsigned threads = 0;        // 0: hardware concurrency
  LogLevel log = LogLevel::Warn;
};

/// Runs one command. Data goes to `out` (or cfg.out), diagnostics to `err`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv (flags > --config file > defaults) and runs the command.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace gaussnc::cli
