#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "gaussnc/errors.hpp"
#include "gaussnc/noise.hpp"
#include "gaussnc/types.hpp"

namespace gaussnc::io {

// Input that cannot be parsed into a state, grid, or option value.
class ParseError : public Error {
 public:
  using Error::Error;
};

struct StateSpec {
  Eigen::MatrixXd A;
  bool from_params = false;
};

/// Accepts {"modes": n, "A": [[...], ...]} or {"one_mode": {"d": , "m": , "theta": }}
/// (theta optional, default 0). Only the shape is checked here, not physical validity.
StateSpec parse_state(std::string_view text);
StateSpec load_state(const std::string& path);

/// "%.12g" in the C locale; non-finite values become "inf", "-inf" or "nan".
std::string format_number(double x);

/// Indented JSON with every floating-point number printed by format_number
/// (non-finite numbers become null). Ends with a newline.
std::string dump(const nlohmann::ordered_json& j);

/// Flattens a JSON document to "key,value" CSV rows, nested keys joined by '.'.
std::string flatten_csv(const nlohmann::ordered_json& j);

/// Noise-scan grid "d=lo:hi:count,m=lo:hi:count,g=lo:hi:count". A bare value
/// is a single point; "ig=" gives 1/g instead of g so that 0 (no noise) is reachable.
struct SweepGrid {
  std::vector<double> d;
  std::vector<double> m;
  std::vector<double> g;
};

SweepGrid parse_grid(std::string_view spec);

std::string sweep_csv(const std::vector<NoiseScanRow<double>>& rows);
nlohmann::ordered_json sweep_json(const std::vector<NoiseScanRow<double>>& rows);

} // namespace gaussnc::io
