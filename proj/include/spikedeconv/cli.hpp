#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spikedeconv/instance.hpp"

namespace spikedeconv {

enum class Command { solve, basin, dynamic_range, snr, verify_bounds, check_derivatives };

std::string to_string(Command c);

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown by parse_config for --help; carries the help text.
struct HelpRequested {
  std::string text;
};

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNumerical = 2, kExitInfeasible = 3 };

// Every field maps to one config key and one --flag of the same name.
struct RunConfig {
  Command command = Command::solve;
  InstanceSpec instance;            // n, r, min_sep; kappa resolved per command
  std::optional<double> kappa;      // solve default 1, snr default 3
  std::vector<double> kappas;       // basin / dynamic-range sweep; empty = command default
  std::string scheme = "both";      // invariant | adaptive | both
  std::optional<double> A;          // empty = auto, 1.5 ||a*||_inf
  std::optional<int> iterations;    // empty = command default
  double tolerance = 1e-13;
  std::string output_dir;
  std::uint64_t seed = 0;
  std::optional<int> trials;        // empty = command default
  std::vector<double> distances;    // basin; empty = default grid
  std::vector<double> snr_db;       // snr; empty = 10,20,30,40,50
  double noise_snr_db = std::numeric_limits<double>::infinity();  // solve only
  std::string instance_file;        // solve only; overrides generation when set
  unsigned workers = 0;             // 0 = available parallelism
  bool svg = false;

  int resolved_iterations() const;
  int resolved_trials() const;
  std::vector<double> resolved_kappas() const;
  std::vector<double> resolved_distances() const;
  std::vector<double> resolved_snr_db() const;
};

inline constexpr const char* kOutputDirEnv = "SPIKEDECONV_OUTPUT_DIR";

// Parses flags and an optional --config file of flat key=value lines. Flags
// override file values; unknown keys and invalid values raise UsageError
// naming the key. `env_output_dir` is the fallback output directory.
RunConfig parse_config(const std::vector<std::string>& args,
                       const std::optional<std::string>& env_output_dir = std::nullopt);

// The fully resolved configuration as config-file text; feeding it back to
// parse_config reproduces the run.
std::string to_config_text(const RunConfig& config);

// Runs the command, writes artifacts under output_dir and a summary to out.
// Returns an ExitCode; library exceptions are mapped to exit codes.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace spikedeconv
