#include "gaussnc/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "gaussnc/errors.hpp"
#include "gaussnc/fock_oracle.hpp"
#include "gaussnc/io.hpp"
#include "gaussnc/measures.hpp"
#include "gaussnc/noise.hpp"
#include "gaussnc/optimizer.hpp"
#include "gaussnc/sqrt_map.hpp"
#include "gaussnc/states.hpp"
#include "gaussnc/symplectic.hpp"

namespace gaussnc::cli {

namespace {

using nlohmann::ordered_json;

class Logger {
 public:
  Logger(std::ostream& err, LogLevel level) : err_(err), level_(level) {}

  void operator()(LogLevel level, const std::string& msg) const {
    if (level_ >= level && level != LogLevel::Quiet) err_ << "gaussnc: " << msg << '\n';
  }

 private:
  std::ostream& err_;
  LogLevel level_;
};

// Thrown to leave a command with a specific exit code after its message is logged.
struct CommandExit {
  int code;
};

ordered_json params_json(const OneModeParams<double>& p, bool with_theta = true) {
  ordered_json j = {{"d", p.d}, {"m", p.m}};
  if (with_theta) j["theta"] = p.theta;
  return j;
}

ordered_json bounds_json(const DeltaBounds<double>& b) { return ordered_json::array({b.lower, b.upper}); }

// {class, modes, symplectic_spectrum, d, m, theta?}; the spectrum is null when A
// is not positive definite, and theta is omitted for isotropic states.
ordered_json classify_report(const Eigen::MatrixXd& A, double tol, StateClass& cls) {
  cls = classify(A, tol);
  ordered_json j;
  j["class"] = std::string(to_string(cls));
  j["modes"] = A.rows() / 2;
  if (Eigen::LLT<Eigen::MatrixXd>(A).info() == Eigen::Success) {
    const Eigen::VectorXd d = symplectic_spectrum(A);
    j["symplectic_spectrum"] = std::vector<double>(d.data(), d.data() + d.size());
  } else {
    j["symplectic_spectrum"] = nullptr;
  }
  if (A.rows() == 2 && cls != StateClass::Invalid) {
    const auto p = cov_to_params(A, tol);
    j["d"] = p.d;
    j["m"] = p.m;
    if (p.m != 1.0) j["theta"] = p.theta;
  }
  return j;
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty()) {
    out << text;
    out.flush();
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) throw io::ParseError("cannot open output file " + cfg.out);
  file << text;
}

void emit_json(const RunConfig& cfg, std::ostream& out, const ordered_json& j) {
  emit(cfg, out, cfg.format == "csv" ? io::flatten_csv(j) : io::dump(j));
}

Eigen::MatrixXd load_valid(const std::string& path, const RunConfig& cfg, std::ostream& out,
                           const Logger& log) {
  if (path.empty()) throw io::ParseError("missing state file (--input)");
  const auto spec = io::load_state(path);
  StateClass cls{};
  const double tol = default_tol<double>();
  if (!is_valid_state(spec.A, tol)) {
    log(LogLevel::Warn, path + ": not a valid state (symplectic eigenvalue below 1)");
    emit_json(cfg, out, classify_report(spec.A, tol, cls));
    throw CommandExit{kInvalidState};
  }
  return spec.A;
}

int cmd_classify(const RunConfig& cfg, std::ostream& out, const Logger& log) {
  if (cfg.input.empty()) throw io::ParseError("missing state file (--input)");
  const auto spec = io::load_state(cfg.input);
  StateClass cls{};
  const ordered_json report = classify_report(spec.A, cfg.tol.value_or(default_tol<double>()), cls);
  emit_json(cfg, out, report);
  if (cls == StateClass::Invalid) {
    log(LogLevel::Warn, cfg.input + ": not a valid state");
    return kInvalidState;
  }
  return kOk;
}

int cmd_measure(const RunConfig& cfg, std::ostream& out, const Logger& log) {
  const std::string& w = cfg.which;
  if (w != "all" && w != "fidelity" && w != "holevo" && w != "chi" && w != "phi") {
    throw io::ParseError("--which must be one of all, fidelity, holevo, chi, phi");
  }
  const Eigen::MatrixXd A = load_valid(cfg.input, cfg, out, log);
  ordered_json j;
  if (cfg.second.empty()) {
    if (w == "fidelity" || w == "holevo") {
      throw io::ParseError("--which " + w + " compares two states; pass --second");
    }
    const auto r = nonclassicality(A);
    j["class"] = std::string(to_string(classify(A)));
    if (!r.chi && !r.phi_measure) {
      log(LogLevel::Warn, "no closed form for this multimode state; chi and phi reported as null");
    }
    auto optional_value = [](const std::optional<double>& v) {
      return v ? ordered_json(*v) : ordered_json(nullptr);
    };
    auto optional_bounds = [](const std::optional<DeltaBounds<double>>& b) {
      return b ? bounds_json(*b) : ordered_json(nullptr);
    };
    if (w == "all" || w == "chi") j["chi"] = optional_value(r.chi);
    if (w == "all" || w == "phi") j["phi"] = optional_value(r.phi_measure);
    if (w == "all" || w == "phi") j["delta_bounds_fidelity"] = optional_bounds(r.delta_fidelity);
    if (w == "all" || w == "chi") j["delta_bounds_holevo"] = optional_bounds(r.delta_overlap);
  } else {
    if (w == "chi" || w == "phi") {
      throw io::ParseError("--which " + w + " takes a single state; drop --second");
    }
    const Eigen::MatrixXd B = load_valid(cfg.second, cfg, out, log);
    if (A.rows() != B.rows()) throw DimensionMismatch("states have different mode counts");
    const auto r = compare_states(A, B);
    if (w == "all" || w == "fidelity") j["fidelity"] = *r.fidelity;
    if (w == "all" || w == "holevo") j["holevo"] = *r.holevo_overlap;
    if (w == "all" || w == "fidelity") j["delta_bounds_fidelity"] = bounds_json(*r.delta_fidelity);
    if (w == "all" || w == "holevo") j["delta_bounds_holevo"] = bounds_json(*r.delta_overlap);
  }
  emit_json(cfg, out, j);
  return kOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, const Logger& log) {
  if (cfg.grid.empty()) throw io::ParseError("missing --grid");
  const auto grid = io::parse_grid(cfg.grid);
  const std::size_t nm = grid.m.size();
  const std::size_t ng = grid.g.size();
  const std::size_t total = grid.d.size() * nm * ng;
  if (total > 10'000'000) throw io::ParseError("grid: more than 1e7 points");

  std::vector<NoiseScanRow<double>> rows(total);
  std::vector<std::exception_ptr> failures;
  std::mutex failures_mutex;
  auto fill = [&](std::size_t begin, std::size_t end) {
    try {
      for (std::size_t i = begin; i < end; ++i) {
        rows[i] = noise_scan_row(grid.d[i / (nm * ng)], grid.m[(i / ng) % nm], grid.g[i % ng]);
      }
    } catch (...) {
      std::lock_guard lock(failures_mutex);
      failures.push_back(std::current_exception());
    }
  };
  const unsigned hw = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hw, (total + 255) / 256);
  if (workers <= 1) {
    fill(0, total);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (total + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back(fill, std::min(total, w * chunk), std::min(total, (w + 1) * chunk));
    }
    for (auto& t : pool) t.join();
  }
  if (!failures.empty()) std::rethrow_exception(failures.front());
  log(LogLevel::Info, "sweep: " + std::to_string(total) + " rows");
  emit(cfg, out, cfg.format == "csv" ? io::sweep_csv(rows) : io::dump(io::sweep_json(rows)));
  return kOk;
}

int cmd_optimize(const RunConfig& cfg, std::ostream& out, const Logger& log) {
  const std::string& w = cfg.which;
  if (w != "all" && w != "fidelity" && w != "holevo") {
    throw io::ParseError("--which must be one of all, fidelity, holevo for optimize");
  }
  const Eigen::MatrixXd A = load_valid(cfg.input, cfg, out, log);
  if (A.rows() != 2) throw DimensionMismatch("optimize: one-mode target required");
  const auto target = cov_to_params(A);

  auto result_json = [&](const SupResult& r, double closed_form) {
    return ordered_json{{"sup", r.value},
                        {"closed_form", closed_form},
                        {"argmax", params_json(r.argmax)},
                        {"evaluations", r.iterations},
                        {"converged", r.converged}};
  };
  ordered_json j;
  j["target"] = params_json(target);
  j["class"] = std::string(to_string(classify(A)));
  if (w == "all" || w == "fidelity") {
    const auto r = sup_fidelity_classical(A, cfg.budget, cfg.seed);
    j["fidelity"] = result_json(r, phi_measure_one_mode(target));
    if (!r.converged) log(LogLevel::Warn, "optimize: fidelity search hit the evaluation budget");
  }
  if (w == "all" || w == "holevo") {
    const auto r = sup_overlap_classical(A, cfg.budget, cfg.seed);
    j["holevo"] = result_json(r, chi_one_mode(target));
    if (!r.converged) log(LogLevel::Warn, "optimize: overlap search hit the evaluation budget");
  }
  emit_json(cfg, out, j);
  return kOk;
}

int cmd_oracle_compare(const RunConfig& cfg, std::ostream& out, const Logger& log) {
  if (cfg.trunc < 1 || cfg.trunc > 400) throw io::ParseError("--trunc must lie in [1, 400]");
  const double tol = cfg.tol.value_or(1e-4);
  const Eigen::MatrixXd A = load_valid(cfg.input, cfg, out, log);
  if (A.rows() != 2) throw DimensionMismatch("oracle-compare: one-mode states required");
  const bool pair = !cfg.second.empty();
  const Eigen::MatrixXd B = pair ? load_valid(cfg.second, cfg, out, log) : A;
  if (B.rows() != 2) throw DimensionMismatch("oracle-compare: one-mode states required");

  FockOptions options;
  options.deficit_cap = cfg.deficit_cap;
  const auto N = static_cast<Eigen::Index>(cfg.trunc);
  const auto r1 = build_one_mode(cov_to_params(A), N, options);
  const auto r2 = pair ? build_one_mode(cov_to_params(B), N, options) : r1;

  bool within = true;
  ordered_json measures;
  auto add = [&](const char* name, double analytic, double oracle) {
    const double diff = std::abs(analytic - oracle);
    within = within && diff <= tol;
    measures[name] = {{"analytic", analytic}, {"oracle", oracle}, {"abs_diff", diff}};
  };
  add("trace_sqrt_first", sqrt_cf(A).scale.real(), oracle_trace_sqrt(r1));
  if (pair) {
    add("trace_sqrt_second", sqrt_cf(B).scale.real(), oracle_trace_sqrt(r2));
    add("fidelity", fidelity(A, B), oracle_fidelity(r1, r2));
    add("holevo", holevo_overlap(A, B), oracle_overlap(r1, r2));
  }

  ordered_json j;
  j["trunc"] = cfg.trunc;
  j["tolerance"] = tol;
  j["trace_deficit"] = pair ? ordered_json::array({r1.trace_deficit, r2.trace_deficit})
                            : ordered_json::array({r1.trace_deficit});
  j["measures"] = measures;
  j["within_tolerance"] = within;
  emit_json(cfg, out, j);
  if (!within) {
    log(LogLevel::Warn, "oracle-compare: difference above tolerance " + io::format_number(tol));
    return kOracleMismatch;
  }
  return kOk;
}

} // namespace

LogLevel log_level_from_env() {
  const char* raw = std::getenv("GAUSSNC_LOG");
  if (!raw) return LogLevel::Warn;
  std::string v(raw);
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "0" || v == "quiet" || v == "off") return LogLevel::Quiet;
  if (v == "2" || v == "info") return LogLevel::Info;
  if (v == "3" || v == "debug") return LogLevel::Debug;
  return LogLevel::Warn;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Logger log(err, cfg.log);
  try {
    if (cfg.format != "json" && cfg.format != "csv") throw io::ParseError("--format must be json or csv");
    log(LogLevel::Debug, "command " + cfg.command);
    if (cfg.command == "classify") return cmd_classify(cfg, out, log);
    if (cfg.command == "measure") return cmd_measure(cfg, out, log);
    if (cfg.command == "sweep") return cmd_sweep(cfg, out, log);
    if (cfg.command == "optimize") return cmd_optimize(cfg, out, log);
    if (cfg.command == "oracle-compare") return cmd_oracle_compare(cfg, out, log);
    throw io::ParseError("unknown command \"" + cfg.command + "\"");
  } catch (const CommandExit& e) {
    return e.code;
  } catch (const io::ParseError& e) {
    log(LogLevel::Warn, e.what());
    return kMalformedInput;
  } catch (const InvalidArgument& e) {
    log(LogLevel::Warn, e.what());
    return kMalformedInput;
  } catch (const InvalidState& e) {
    log(LogLevel::Warn, e.what());
    return kInvalidState;
  } catch (const TruncationTooSmall& e) {
    log(LogLevel::Warn, e.what());
    return kTruncationTooSmall;
  } catch (const Error& e) {
    log(LogLevel::Warn, e.what());
    return kNumericalFailure;
  }
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  cfg.log = log_level_from_env();

  CLI::App app{"Nonclassicality measures for Gaussian states"};
  app.set_config("--config", "", "TOML/INI file with option defaults (flags override it)");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--input", cfg.input, "State file (JSON)");
  app.add_option("--second", cfg.second, "Second state file (JSON)");
  app.add_option("--which", cfg.which, "Measure selection: all|fidelity|holevo|chi|phi");
  app.add_option("--grid", cfg.grid, "Sweep grid, e.g. d=1:3:5,m=2,ig=0:4:9");
  app.add_option("--trunc", cfg.trunc, "Fock truncation N");
  app.add_option("--seed", cfg.seed, "Optimizer seed");
  app.add_option("--out", cfg.out, "Write data here instead of stdout");
  app.add_option("--format", cfg.format, "json|csv");
  app.add_option("--tol", cfg.tol, "Tolerance override (classify: 1e-9, oracle-compare: 1e-4)");
  app.add_option("--budget", cfg.budget, "Optimizer objective-evaluation budget");
  app.add_option("--deficit-cap", cfg.deficit_cap, "Largest accepted Fock trace deficit");
  app.add_option("--threads", cfg.threads, "Sweep worker threads (0: all cores)");

  app.add_subcommand("classify", "Classify a state and print its symplectic spectrum");
  app.add_subcommand("measure", "Nonclassical distances of one state, or similarity of two");
  app.add_subcommand("sweep", "Noise-channel scan over a (d, m, g) grid");
  app.add_subcommand("optimize", "Numerical sup over classical states for a one-mode target");
  app.add_subcommand("oracle-compare", "Closed forms against a truncated Fock-space computation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "gaussnc: " << e.what() << '\n';
    return kMalformedInput;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  return run(cfg, out, err);
}

} // namespace gaussnc::cli
