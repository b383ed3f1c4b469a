#pragma once

#include <cstdio>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ddgate/engine.hpp"
#include "ddgate/fidelity.hpp"
#include "ddgate/model.hpp"
#include "ddgate/noise.hpp"

namespace ddgate {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& key, const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError(key + ": not a number: '" + s + "'");
  return v;
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& s) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    if (!s.empty() && s[0] != '-') v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError(key + ": not a non-negative integer: '" + s + "'");
  return v;
}

inline bool parse_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "on") return true;
  if (s == "false" || s == "0" || s == "off") return false;
  throw ConfigError(key + ": expected true/false, got '" + s + "'");
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

/// ideal, gauss1, gauss2, or custom(mean,std) in radians.
inline std::string pulse_model_name(const PulseErrorModel& m) {
  if (m == PulseErrorModel::ideal()) return "ideal";
  if (m == PulseErrorModel::gauss1()) return "gauss1";
  if (m == PulseErrorModel::gauss2()) return "gauss2";
  return "custom(" + detail::format_double(m.mean) + ";" + detail::format_double(m.stddev) + ")";
}

inline PulseErrorModel parse_pulse_model(const std::string& s) {
  if (s == "ideal") return PulseErrorModel::ideal();
  if (s == "gauss1") return PulseErrorModel::gauss1();
  if (s == "gauss2") return PulseErrorModel::gauss2();
  if (s.starts_with("custom(") && s.ends_with(")")) {
    const std::string body = s.substr(7, s.size() - 8);
    const auto sep = body.find_first_of(";,");
    if (sep == std::string::npos) throw ConfigError("custom pulse model needs custom(mean;std)");
    const double mean = detail::parse_double("pulse_model", detail::trim(body.substr(0, sep)));
    const double sd = detail::parse_double("pulse_model", detail::trim(body.substr(sep + 1)));
    if (sd < 0.0) throw ConfigError("pulse_model: std must be >= 0");
    return PulseErrorModel::gaussian(mean, sd);
  }
  throw ConfigError("unknown pulse model '" + s + "'");
}

/// Everything that determines one fidelity estimate. Defaults give the
/// reference two-qubit setup: 50 states, one cycle, 800 segments per cycle,
/// noise U[1, 10] MHz (times 2 pi).
struct ExperimentConfig {
  GateKind gate = GateKind::FlipFlop;
  Scheme scheme = Scheme::DD;
  PulseErrorModel pulse_model;
  std::size_t n_states = 50;
  int n_cycles = 1;
  double noise_lo_mhz = 1.0;
  double noise_hi_mhz = 10.0;
  std::size_t segments_per_cycle = kDefaultSegmentsPerCycle;
  std::uint64_t seed = 1;
  Integrator integrator = Integrator::SegmentExponential;
  bool random_sign = false;
  bool shared_noise = false;

  bool operator==(const ExperimentConfig&) const = default;

  /// Throws ConfigError on values no run can use.
  void validate() const {
    if (n_states < 1) throw ConfigError("n_states must be >= 1");
    if (n_cycles < 1) throw ConfigError("n_cycles must be >= 1");
    if (noise_lo_mhz > noise_hi_mhz) throw ConfigError("noise_lo must not exceed noise_hi");
    if (segments_per_cycle < 16 || segments_per_cycle % 16 != 0)
      throw ConfigError("segments_per_cycle must be a positive multiple of 16");
  }
};

/// Flat "key = value" text, one field per line, in a fixed order.
inline void write_config(std::ostream& os, const ExperimentConfig& c) {
  os << "gate = " << gate_name(c.gate) << '\n'
     << "scheme = " << scheme_name(c.scheme) << '\n'
     << "pulse_model = " << pulse_model_name(c.pulse_model) << '\n'
     << "n_states = " << c.n_states << '\n'
     << "n_cycles = " << c.n_cycles << '\n'
     << "noise_lo = " << detail::format_double(c.noise_lo_mhz) << '\n'
     << "noise_hi = " << detail::format_double(c.noise_hi_mhz) << '\n'
     << "segments_per_cycle = " << c.segments_per_cycle << '\n'
     << "seed = " << c.seed << '\n'
     << "integrator = " << integrator_name(c.integrator) << '\n'
     << "random_sign = " << (c.random_sign ? "true" : "false") << '\n'
     << "shared_noise = " << (c.shared_noise ? "true" : "false") << '\n';
}

/// Applies one key/value pair; the key names match write_config.
inline void set_config_value(ExperimentConfig& c, const std::string& key, const std::string& value) {
  try {
    if (key == "gate") c.gate = parse_gate_kind(value);
    else if (key == "scheme") c.scheme = parse_scheme(value);
    else if (key == "pulse_model") c.pulse_model = parse_pulse_model(value);
    else if (key == "n_states") c.n_states = detail::parse_u64(key, value);
    else if (key == "n_cycles") c.n_cycles = static_cast<int>(detail::parse_u64(key, value));
    else if (key == "noise_lo") c.noise_lo_mhz = detail::parse_double(key, value);
    else if (key == "noise_hi") c.noise_hi_mhz = detail::parse_double(key, value);
    else if (key == "segments_per_cycle") c.segments_per_cycle = detail::parse_u64(key, value);
    else if (key == "seed") c.seed = detail::parse_u64(key, value);
    else if (key == "integrator") c.integrator = parse_integrator(value);
    else if (key == "random_sign") c.random_sign = detail::parse_bool(key, value);
    else if (key == "shared_noise") c.shared_noise = detail::parse_bool(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

/// Reads key-value text on top of `base`. '#' starts a comment.
inline ExperimentConfig read_config(std::istream& is, ExperimentConfig base = {}) {
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    set_config_value(base, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  return base;
}

inline SimulationPlan plan_for(const ExperimentConfig& c) {
  PlanOptions o;
  o.n_cycles = c.n_cycles;
  o.pulse_error = c.pulse_model;
  o.integrator = c.integrator;
  return make_plan(c.gate, c.scheme, o);
}

/// Executes the gate once for a trial, using that trial's trajectory and zeta streams.
inline PropagationResult run_trial(const ExperimentConfig& c, const SimulationPlan& plan, std::size_t trial) {
  RngStream traj_rng(c.seed, trial, StreamPurpose::Trajectory);
  const auto traj = sample_trajectory(traj_rng, c.segments_per_cycle * c.n_cycles,
                                      plan.segment_duration(c.segments_per_cycle),
                                      c.noise_lo_mhz * kMHz, c.noise_hi_mhz * kMHz, c.random_sign);
  RngStream zeta_rng(c.seed, trial, StreamPurpose::Zeta);
  return simulate(plan, traj, zeta_rng);
}

/// Average fidelity for one configuration. Output is independent of `threads`.
inline FidelityReport run_experiment(const ExperimentConfig& c, unsigned threads = 1) {
  c.validate();
  const auto plan = plan_for(c);
  const Operator ideal = ideal_gate(c.gate, plan.gate_angle());
  std::optional<Operator> shared;
  if (c.shared_noise) shared = run_trial(c, plan, 0).propagator;
  return average_gate_fidelity(
      ideal,
      [&](std::size_t i) { return shared ? *shared : run_trial(c, plan, i).propagator; },
      c.n_states, c.seed, threads);
}

inline constexpr const char* kCsvHeader = "gate,scheme,pulse_model,n_cycles,mean,std,n_states,seed";
inline constexpr const char* kCsvMetadata =
    "# fidelity = mean over Haar-random pure states of |<psi_ideal|psi_actual>|^2";

inline std::string csv_row(const ExperimentConfig& c, const FidelityReport& r) {
  char nums[96];
  std::snprintf(nums, sizeof nums, "%.10f,%.10f", r.mean, r.std);
  std::ostringstream os;
  os << gate_name(c.gate) << ',' << scheme_name(c.scheme) << ',' << pulse_model_name(c.pulse_model)
     << ',' << c.n_cycles << ',' << nums << ',' << r.n_states << ',' << c.seed;
  return os.str();
}

struct TableCell {
  ExperimentConfig config;  // seed is the derived per-cell seed
  FidelityReport report;
};

/// The six (gate, pulse column) cells, each with its own no-DD baseline:
/// gates u3, ue1 x columns ideal, gauss1, gauss2 x schemes none, dd.
/// Every cell is an independent realisation seeded by derive_seed(seed, cell).
inline std::vector<TableCell> run_table2(const ExperimentConfig& base, unsigned threads = 1) {
  base.validate();
  const GateKind gates[] = {GateKind::FlipFlop, GateKind::ZZ};
  const PulseErrorModel columns[] = {PulseErrorModel::ideal(), PulseErrorModel::gauss1(),
                                     PulseErrorModel::gauss2()};
  const Scheme schemes[] = {Scheme::NoDD, Scheme::DD};
  std::vector<TableCell> out;
  std::uint64_t cell = 0;
  for (auto g : gates)
    for (const auto& col : columns)
      for (auto s : schemes) {
        ExperimentConfig c = base;
        c.gate = g;
        c.pulse_model = col;
        c.scheme = s;
        c.seed = derive_seed(base.seed, cell++);
        out.push_back({c, run_experiment(c, threads)});
      }
  return out;
}

inline void write_csv(std::ostream& os, const std::vector<TableCell>& cells) {
  os << kCsvMetadata << '\n' << kCsvHeader << '\n';
  for (const auto& c : cells) os << csv_row(c.config, c.report) << '\n';
}

}  // namespace ddgate
