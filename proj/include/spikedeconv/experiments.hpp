#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spikedeconv/gradient_descent.hpp"
#include "spikedeconv/instance.hpp"
#include "spikedeconv/rng.hpp"

namespace spikedeconv {

// Final-error threshold that labels a run a success.
inline constexpr double kSuccessThreshold = 1e-2;

// A = 1.5 ||a*||_inf unless an explicit value is given.
struct APolicy {
  std::optional<double> value;

  double resolve(const SpikeParams& truth) const;
};

PreconditionerKind make_kind(PrecondType type, const SpikeParams& truth, const APolicy& policy);

// Draws theta0 with ||S(theta0 - theta*)||_inf = d: 3r coordinates uniform in
// [-1, 1] (relative complex amplitude perturbation and scaled location shift),
// rescaled so the largest of |z_j| and |u_j| equals d.
SpikeParams sample_equidistant(const SpikeParams& truth, int n, double d, Rng& rng);

// Weighted error after matching estimated to true spikes by location.
double matched_error(const SpikeParams& estimate, const SpikeParams& truth, int n);

// Trial i of a sweep uses the instance seeded with derive_seed(master, i).
std::uint64_t trial_seed(std::uint64_t master, std::size_t trial);

struct ExperimentCommon {
  std::uint64_t master_seed = 0;
  int trials = 50;
  unsigned workers = 0;
  APolicy a_policy;
  double tol = 1e-13;  // early exit once the weighted error drops this low
};

// Success rate vs initialization distance.
struct BasinConfig {
  InstanceSpec instance;  // seed field ignored; per-trial seeds come from master_seed
  std::vector<double> kappas{1.0, 6.0};
  std::vector<PrecondType> schemes{PrecondType::invariant, PrecondType::adaptive};
  std::vector<double> distances;
  int iterations = 200;
  ExperimentCommon common;
};

struct BasinRow {
  double kappa = 0.0;
  PrecondType scheme = PrecondType::adaptive;
  double distance = 0.0;
  int trials = 0;
  int successes = 0;
  int failures = 0;  // degenerate or non-finite runs

  double rate() const { return trials > 0 ? static_cast<double>(successes) / trials : 0.0; }
};

std::vector<BasinRow> basin_experiment(const BasinConfig& config);

// Smallest distance at which the success rate is below 1/2 (inf if never).
double half_success_distance(const std::vector<BasinRow>& rows, double kappa, PrecondType scheme);

// Convergence from spectral initialization across dynamic ranges.
struct ConvergenceConfig {
  InstanceSpec instance;
  std::vector<double> kappas{1.0, 3.0, 6.0};
  std::vector<PrecondType> schemes{PrecondType::invariant, PrecondType::adaptive};
  int max_iters = 1000;
  double target = 1e-6;
  double fit_low = 1e-11;  // slopes are fitted where fit_low < err < fit_high
  double fit_high = 1e-2;
  ExperimentCommon common;
};

struct ConvergenceTrial {
  double kappa = 0.0;
  PrecondType scheme = PrecondType::adaptive;
  int trial = 0;
  bool in_basin = false;          // the adaptive run from this init reached the target
  int iterations_to_target = -1;  // -1 if never reached
  double slope = 0.0;             // d log10(err) / d iteration; NaN if too few points
  std::vector<double> errors;
};

struct ConvergenceSummary {
  double kappa = 0.0;
  PrecondType scheme = PrecondType::adaptive;
  int trials = 0;
  int included = 0;  // trials whose initialization landed in the basin
  double median_iterations = 0.0;  // unreached targets count as max_iters + 1
  double median_slope = 0.0;
};

struct ConvergenceResult {
  std::vector<ConvergenceTrial> trials;
  std::vector<ConvergenceSummary> summary;
  int max_iters = 0;
};

ConvergenceResult convergence_experiment(const ConvergenceConfig& config);

// Least-squares slope of log10(err) over the window.
double fitted_log_slope(const std::vector<double>& errors, double low, double high);

// Statistical error vs SNR with the CRB benchmark.
struct SnrConfig {
  InstanceSpec instance;  // kappa 3 in the reference setup
  std::vector<double> snr_db{10.0, 20.0, 30.0, 40.0, 50.0};
  std::vector<PrecondType> schemes{PrecondType::invariant, PrecondType::adaptive};
  int iterations = 200;
  ExperimentCommon common;
};

struct SnrSchemeStats {
  PrecondType scheme = PrecondType::adaptive;
  double mean_error = 0.0;
  double median_error = 0.0;
  double mean_error_recovered = 0.0;  // over trials whose initial support was recovered
  int successes = 0;                  // final error <= kSuccessThreshold
  int failures = 0;
};

struct SnrRow {
  double snr_db = 0.0;
  int trials = 0;
  int recovered = 0;  // every true spike within one grid cell of its initial estimate
  double mean_crb = 0.0;
  double mean_crb_recovered = 0.0;
  std::vector<SnrSchemeStats> schemes;
};

struct CrbEntry {
  double snr_db = 0.0;
  int trial = 0;
  int spike = 0;
  double crb_re = 0.0, crb_im = 0.0, crb_tau = 0.0;
};

struct SnrResult {
  std::vector<SnrRow> rows;
  std::vector<CrbEntry> crb_table;
};

SnrResult snr_experiment(const SnrConfig& config);

// CSV writers; headers are documented in README.md.
void write_basin_csv(std::ostream& os, const std::vector<BasinRow>& rows);
void write_convergence_curves_csv(std::ostream& os, const ConvergenceResult& result);
void write_convergence_summary_csv(std::ostream& os, const ConvergenceResult& result);
void write_convergence_trials_csv(std::ostream& os, const ConvergenceResult& result);
void write_snr_csv(std::ostream& os, const SnrResult& result);
void write_crb_csv(std::ostream& os, const SnrResult& result);

}  // namespace spikedeconv
