#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spikedeconv/preconditioner.hpp"
#include "spikedeconv/signal_model.hpp"

namespace spikedeconv {

// S = diag([1/a*; s 1]) with s = sqrt(-F''(0)).
struct WeightMatrix {
  Eigen::VectorXcd inv_truth_amplitudes;
  double location_scale_value = 0.0;

  static WeightMatrix make(const SpikeParams& truth, int n);
};

// ||S(theta - theta*)||_inf = max_j max(|a_j - a*_j| / |a*_j|, s |tau_j - tau*_j|),
// location differences taken around the torus. Spikes are compared by index.
double weighted_error(const SpikeParams& params, const SpikeParams& truth, int n);

// a <- a - P_a grad_a, tau <- wrap(tau - P_tau grad_tau).
SpikeParams gd_step(const SpikeParams& params, const Observation& obs, const Preconditioner& precond);

struct TraceRow {
  int iteration = 0;
  double weighted_error = 0.0;  // NaN when no truth was given
  double loss = 0.0;
  double contraction_ratio = 0.0;  // err_k / err_{k-1}; NaN on row 0
};

enum class RunStatus { converged, max_iterations, degenerate, non_finite };

std::string to_string(RunStatus status);

struct RunTrace {
  std::vector<TraceRow> rows;
  SpikeParams final_params;
  int iterations_run = 0;
  bool converged = false;
  RunStatus status = RunStatus::max_iterations;
  std::string message;

  bool failed() const { return status == RunStatus::degenerate || status == RunStatus::non_finite; }
};

struct RunOptions {
  int max_iters = 200;
  double tol = 1e-12;
};

// Iterates gd_step. Stops once the weighted error (truth given) or the
// gradient inf-norm (no truth) drops to tol, or after max_iters steps.
RunTrace run(const SpikeParams& params0, const Observation& obs, const std::optional<SpikeParams>& truth,
             const PreconditionerKind& kind, const RunOptions& options = {});

struct RateConstants {
  double eta = 0.0;  // NaN when A was not supplied
  double gamma = 0.0;
  double predicted_rate_fixed = 0.0;
  double predicted_rate_adaptive = 0.0;
  bool fixed_hypotheses_hold = false;     // eta < 1
  bool adaptive_hypotheses_hold = false;  // gamma < 1/2
};

// eta = 276.21 A^2 ||a*|| / a*_min^3 ((n+1) Delta)^-2,
// gamma = 11.60 (||a*|| / a*_min) ((n+1) Delta)^-2.
RateConstants rate_constants(const SpikeParams& truth, int n, std::optional<double> A = std::nullopt);

// Header: iteration,weighted_error,loss,contraction_ratio
void write_trace_csv(std::ostream& os, const RunTrace& trace);

}  // namespace spikedeconv
