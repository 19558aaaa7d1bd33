#include "gaussnc/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "gaussnc/symplectic.hpp"

namespace gaussnc::io {

namespace {

using nlohmann::ordered_json;

double number_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  const auto& v = j.at(key);
  if (!v.is_number()) throw ParseError(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

Eigen::MatrixXd matrix_field(const nlohmann::json& j, Eigen::Index dim) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != dim) {
    throw ParseError("\"A\" must be an array of " + std::to_string(dim) + " rows");
  }
  Eigen::MatrixXd A(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim) {
      throw ParseError("row " + std::to_string(i) + " of \"A\" must have " + std::to_string(dim) +
                       " entries");
    }
    for (Eigen::Index k = 0; k < dim; ++k) {
      const auto& v = row[static_cast<std::size_t>(k)];
      if (!v.is_number()) throw ParseError("\"A\" entries must be numbers");
      A(i, k) = v.get<double>();
    }
  }
  return A;
}

void write_json(std::string& out, const ordered_json& j, int depth) {
  const std::string pad(2 * static_cast<std::size_t>(depth + 1), ' ');
  const std::string close_pad(2 * static_cast<std::size_t>(depth), ' ');
  switch (j.type()) {
    case ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + ordered_json(key).dump() + ": ";
        write_json(out, value, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case ordered_json::value_t::array: {
      const bool scalars = std::none_of(j.begin(), j.end(), [](const ordered_json& v) {
        return v.is_structured();
      });
      if (j.empty()) {
        out += "[]";
      } else if (scalars) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          write_json(out, j[i], depth + 1);
        }
        out += "]";
      } else {
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ",\n";
          out += pad;
          write_json(out, j[i], depth + 1);
        }
        out += "\n" + close_pad + "]";
      }
      return;
    }
    case ordered_json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_number(x) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

void flatten(std::string& out, const ordered_json& j, const std::string& prefix) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      flatten(out, value, prefix.empty() ? key : prefix + "." + key);
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(out, j[i], prefix + "." + std::to_string(i));
  } else if (j.is_number_float()) {
    out += prefix + "," + format_number(j.get<double>()) + "\n";
  } else if (j.is_string()) {
    out += prefix + "," + j.get<std::string>() + "\n";
  } else {
    out += prefix + "," + j.dump() + "\n";
  }
}

double parse_double(std::string_view text, std::string_view context) {
  const std::string s(text);
  std::istringstream in(s);
  in.imbue(std::locale::classic());
  double x = 0;
  in >> x;
  if (s.empty() || in.fail() || !in.eof()) {
    throw ParseError("grid: cannot parse \"" + s + "\" in " + std::string(context));
  }
  return x;
}

std::vector<double> parse_axis(std::string_view key, std::string_view value) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = value.find(':', start);
    parts.push_back(value.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.size() == 1) return {parse_double(parts[0], key)};
  if (parts.size() != 3) throw ParseError("grid: axis " + std::string(key) + " must be lo:hi:count");
  const double lo = parse_double(parts[0], key);
  const double hi = parse_double(parts[1], key);
  const double count_value = parse_double(parts[2], key);
  if (!(count_value >= 1) || count_value != std::floor(count_value) || count_value > 1e6) {
    throw ParseError("grid: count for " + std::string(key) + " must be a positive integer");
  }
  const auto count = static_cast<std::size_t>(count_value);
  if (count == 1) {
    if (lo != hi) throw ParseError("grid: count 1 requires lo == hi for " + std::string(key));
    return {lo};
  }
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  values.back() = hi;
  return values;
}

} // namespace

StateSpec parse_state(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("state must be a JSON object");

  StateSpec spec;
  if (j.contains("one_mode")) {
    const auto& p = j.at("one_mode");
    if (!p.is_object()) throw ParseError("\"one_mode\" must be an object");
    const double d = number_field(p, "d");
    const double m = number_field(p, "m");
    const double theta = p.contains("theta") ? number_field(p, "theta") : 0.0;
    if (!(m > 0) || !std::isfinite(d) || !std::isfinite(m) || !std::isfinite(theta)) {
      throw ParseError("\"one_mode\" needs finite d, theta and m > 0");
    }
    Eigen::Matrix2d diag = Eigen::Matrix2d::Zero();
    diag(0, 0) = d * m * m;
    diag(1, 1) = d / (m * m);
    const Eigen::MatrixXd R = rotation(theta);
    spec.A = R.transpose() * diag * R;
    spec.A(1, 0) = spec.A(0, 1);
    spec.from_params = true;
    return spec;
  }
  if (!j.contains("modes") || !j.contains("A")) {
    throw ParseError("state needs either \"one_mode\" or both \"modes\" and \"A\"");
  }
  const auto& modes = j.at("modes");
  if (!modes.is_number_integer() || modes.get<long long>() < 1 || modes.get<long long>() > 64) {
    throw ParseError("\"modes\" must be an integer in [1, 64]");
  }
  spec.A = matrix_field(j.at("A"), 2 * modes.get<Eigen::Index>());
  if (!spec.A.allFinite()) throw ParseError("\"A\" entries must be finite");
  return spec;
}

StateSpec load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open state file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_state(text.str());
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string dump(const nlohmann::ordered_json& j) {
  std::string out;
  write_json(out, j, 0);
  out += "\n";
  return out;
}

std::string flatten_csv(const nlohmann::ordered_json& j) {
  std::string out = "key,value\n";
  flatten(out, j, "");
  return out;
}

SweepGrid parse_grid(std::string_view spec) {
  SweepGrid grid;
  bool have_d = false, have_m = false, have_g = false;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t comma = spec.find(',', start);
    const std::string_view item = spec.substr(start, comma - start);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("grid: expected key=value, got \"" + std::string(item) + "\"");
    }
    const std::string_view key = item.substr(0, eq);
    const auto values = parse_axis(key, item.substr(eq + 1));
    if (key == "d") {
      if (have_d) throw ParseError("grid: d given twice");
      for (const double d : values)
        if (!(d >= 1)) throw ParseError("grid: d values must be >= 1");
      grid.d = values;
      have_d = true;
    } else if (key == "m") {
      if (have_m) throw ParseError("grid: m given twice");
      for (const double m : values)
        if (!(m >= 1)) throw ParseError("grid: m values must be >= 1");
      grid.m = values;
      have_m = true;
    } else if (key == "g" || key == "ig") {
      if (have_g) throw ParseError("grid: give exactly one of g or ig");
      for (const double v : values) {
        if (key == "g" && !(v > 0)) throw ParseError("grid: g values must be > 0");
        if (key == "ig" && !(v >= 0 && std::isfinite(v))) {
          throw ParseError("grid: ig values must be finite and >= 0");
        }
        grid.g.push_back(key == "g" ? v
                         : v == 0   ? std::numeric_limits<double>::infinity()
                                    : 1.0 / v);
      }
      have_g = true;
    } else {
      throw ParseError("grid: unknown axis \"" + std::string(key) + "\"");
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (!have_d || !have_m || !have_g) throw ParseError("grid: d, m and g (or ig) are required");
  return grid;
}

std::string sweep_csv(const std::vector<NoiseScanRow<double>>& rows) {
  std::string out =
      "d,m,g,gamma_d,gamma_m,classical_after,chi_before,chi_after,phi_before,phi_after,"
      "monotonicity_lhs,monotonicity_rhs\n";
  for (const auto& r : rows) {
    for (const double x : {r.d, r.m, r.g, r.gamma_d, r.gamma_m}) out += format_number(x) + ",";
    out += r.classical_after ? "true," : "false,";
    out += format_number(r.chi_before) + "," + format_number(r.chi_after) + "," +
           format_number(r.phi_before) + "," + format_number(r.phi_after) + "," +
           format_number(r.monotonicity_lhs) + "," + format_number(r.monotonicity_rhs) + "\n";
  }
  return out;
}

nlohmann::ordered_json sweep_json(const std::vector<NoiseScanRow<double>>& rows) {
  auto out = ordered_json::array();
  for (const auto& r : rows) {
    out.push_back({{"d", r.d},
                   {"m", r.m},
                   {"g", r.g},
                   {"gamma_d", r.gamma_d},
                   {"gamma_m", r.gamma_m},
                   {"classical_after", r.classical_after},
                   {"chi_before", r.chi_before},
                   {"chi_after", r.chi_after},
                   {"phi_before", r.phi_before},
                   {"phi_after", r.phi_after},
                   {"monotonicity_lhs", r.monotonicity_lhs},
                   {"monotonicity_rhs", r.monotonicity_rhs}});
  }
  return out;
}

} // namespace gaussnc::io
