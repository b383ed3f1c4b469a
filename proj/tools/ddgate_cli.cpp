// Command-line front end: symbolic verification, fidelity runs, and the
// two-qubit fidelity table. All output is CSV or plain text on stdout (or
// --output). Exit codes: 0 success, 1 verification failure, 2 bad config.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ddgate/ddgate.hpp"

namespace {

using namespace ddgate;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;

// Flag values as given on the command line, applied over the config file.
struct ConfigFlags {
  std::string config_file;
  std::map<std::string, std::string> values;
  unsigned threads = 0;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "Key-value config file; flags override it");
    add(app, "--gate", "gate", "u3 | ue1 | ue2 | ue3");
    add(app, "--scheme", "scheme", "none | dd");
    add(app, "--pulse-model", "pulse_model", "ideal | gauss1 | gauss2 | custom(mean;std) [rad]");
    add(app, "--states", "n_states", "Number of Haar-random initial states (default 50)");
    add(app, "--cycles", "n_cycles", "DD cycles per gate (default 1)");
    add(app, "--seed", "seed", "Master seed (default 1)");
    add(app, "--noise-lo", "noise_lo", "Lower noise bound in MHz (default 1)");
    add(app, "--noise-hi", "noise_hi", "Upper noise bound in MHz (default 10)");
    add(app, "--segments", "segments_per_cycle", "Noise segments per cycle (default 800)");
    add(app, "--integrator", "integrator", "segment_exponential | runge_kutta_4");
    add(app, "--random-sign", "random_sign", "true | false");
    add(app, "--shared-noise", "shared_noise", "true | false");
    app->add_option("--threads", threads, "Worker threads, 0 = all cores (output is unaffected)");
  }

  ExperimentConfig resolve() const {
    ExperimentConfig c;
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw ConfigError("cannot open config file '" + config_file + "'");
      c = read_config(in);
    }
    for (const auto& [key, value] : values) set_config_value(c, key, value);
    c.validate();
    return c;
  }

 private:
  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_option_function<std::string>(
        flag, [this, key](const std::string& v) { values[key] = v; }, help);
  }
};

// Writes to --output when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ConfigError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

VerifyOptions::Target parse_verify_target(const std::string& s) {
  if (s == "full") return VerifyOptions::Target::Full;
  if (s == "nested") return VerifyOptions::Target::Nested;
  if (s == "xy4") return VerifyOptions::Target::XY4;
  throw ConfigError("unknown sequence '" + s + "' (full | nested | xy4)");
}

DDSequence named_sequence(const std::string& s) {
  if (s == "full") return build_full_cycle();
  if (s == "nested") return build_nested_cycle();
  if (s == "x") return build_x_sequence();
  if (s == "z") return build_z_sequence();
  if (s == "xy4") return xy4_preset();
  throw ConfigError("unknown sequence '" + s + "' (full | nested | x | z | xy4)");
}

int cmd_verify(const std::string& sequence, std::optional<int> corrupt, bool verbose, std::ostream& os) {
  VerifyOptions o;
  o.target = parse_verify_target(sequence);
  if (corrupt && (*corrupt < 1 || *corrupt > 16)) throw ConfigError("--corrupt-step must lie in 1..16");
  o.corrupt_step = corrupt;
  const auto report = run_verification(o);
  for (const auto& line : report.lines)
    if (verbose || line.starts_with("FAIL")) os << line << '\n';
  os << report.summary << '\n';
  return report.ok ? kExitOk : kExitVerifyFailed;
}

int cmd_trace(const ExperimentConfig& c, std::size_t trial, std::ostream& os) {
  const auto plan = plan_for(c);
  RngStream traj_rng(c.seed, trial, StreamPurpose::Trajectory);
  const auto traj = sample_trajectory(traj_rng, c.segments_per_cycle * c.n_cycles,
                                      plan.segment_duration(c.segments_per_cycle),
                                      c.noise_lo_mhz * kMHz, c.noise_hi_mhz * kMHz, c.random_sign);
  RngStream zeta_rng(c.seed, trial, StreamPurpose::Zeta);
  const Operator target = target_coupling(c.gate, plan.coupling);
  os << "time_s,interval,frame,fidelity\n";
  char buf[128];
  simulate(plan, traj, zeta_rng, [&](const TraceSample& s) {
    // Noise-free evolution up to this time is F_k exp(-i H_target t).
    const Operator expected = to_matrix(s.frame) * segment_propagator(target, s.time);
    std::snprintf(buf, sizeof buf, "%.6e,%d,%s,%.10f\n", s.time, s.interval, s.frame.str().c_str(),
                  haar_average_fidelity(expected, s.propagator));
    os << buf;
  });
  return kExitOk;
}

int cmd_trajectory(const ExperimentConfig& c, std::size_t trial, std::ostream& os) {
  const auto plan = plan_for(c);
  RngStream rng(c.seed, trial, StreamPurpose::Trajectory);
  write_trajectory_csv(os, sample_trajectory(rng, c.segments_per_cycle * c.n_cycles,
                                             plan.segment_duration(c.segments_per_cycle),
                                             c.noise_lo_mhz * kMHz, c.noise_hi_mhz * kMHz, c.random_sign));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamical-decoupling protected two-qubit gate simulator"};
  app.require_subcommand(1);

  std::string output;
  auto* verify = app.add_subcommand("verify", "Symbolic cancellation and schedule checks");
  std::string verify_seq = "full";
  std::optional<int> corrupt_step;
  bool verbose = false;
  verify->add_option("--sequence", verify_seq, "full | nested | xy4");
  verify->add_option("--corrupt-step", corrupt_step, "Flip the coupling sign of this step (test hook)");
  verify->add_flag("-v,--verbose", verbose, "Print every check");
  verify->add_option("--output", output, "Write the report here instead of stdout");

  ConfigFlags run_flags, table_flags, config_flags, trace_flags, traj_flags;
  std::size_t trial = 0;

  auto* run = app.add_subcommand("run", "One fidelity estimate as a CSV row");
  run_flags.attach(run);
  run->add_option("--output", output, "Write CSV here instead of stdout");

  auto* table2 = app.add_subcommand("table2", "Fidelity table: u3, ue1 x ideal/gauss1/gauss2 x none/dd");
  table_flags.attach(table2);
  table2->add_option("--output", output, "Write CSV here instead of stdout");

  auto* config = app.add_subcommand("config", "Print the resolved config in key-value form");
  config_flags.attach(config);
  config->add_option("--output", output, "Write the config file here");

  auto* trace = app.add_subcommand("trace", "Per-interval fidelity trace of one trial as CSV");
  trace_flags.attach(trace);
  trace->add_option("--trial", trial, "Trial index whose noise realisation is traced");
  trace->add_option("--output", output, "Write CSV here instead of stdout");

  auto* trajectory = app.add_subcommand("trajectory", "Export one trial's noise trajectory as CSV");
  traj_flags.attach(trajectory);
  trajectory->add_option("--trial", trial, "Trial index");
  trajectory->add_option("--output", output, "Write CSV here instead of stdout");

  auto* sequence = app.add_subcommand("sequence", "Print a DD sequence in PULSE/EVOLVE form");
  std::string seq_name = "full";
  sequence->add_option("--sequence", seq_name, "full | nested | x | z | xy4");
  sequence->add_option("--output", output, "Write here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    Output out(output);
    auto& os = out.stream();
    if (*verify) return cmd_verify(verify_seq, corrupt_step, verbose, os);
    if (*run) {
      const auto c = run_flags.resolve();
      const auto report = run_experiment(c, run_flags.threads);
      os << kCsvMetadata << '\n' << kCsvHeader << '\n' << csv_row(c, report) << '\n';
      return kExitOk;
    }
    if (*table2) {
      write_csv(os, run_table2(table_flags.resolve(), table_flags.threads));
      return kExitOk;
    }
    if (*config) {
      write_config(os, config_flags.resolve());
      return kExitOk;
    }
    if (*trace) return cmd_trace(trace_flags.resolve(), trial, os);
    if (*trajectory) return cmd_trajectory(traj_flags.resolve(), trial, os);
    if (*sequence) {
      write_sequence(os, named_sequence(seq_name));
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
