#include "spikedeconv/gradient_descent.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "spikedeconv/csv.hpp"
#include "spikedeconv/errors.hpp"
#include "spikedeconv/fejer.hpp"

namespace spikedeconv {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool all_finite(const SpikeParams& p) {
  return p.amplitudes.allFinite() && p.locations.allFinite();
}

}  // namespace

WeightMatrix WeightMatrix::make(const SpikeParams& truth, int n) {
  WeightMatrix w;
  w.inv_truth_amplitudes = truth.amplitudes.cwiseInverse();
  w.location_scale_value = location_scale(n);
  return w;
}

double weighted_error(const SpikeParams& params, const SpikeParams& truth, int n) {
  if (params.size() != truth.size()) throw DomainError("weighted_error: size mismatch");
  const double s = location_scale(n);
  double e = 0.0;
  for (Eigen::Index j = 0; j < params.size(); ++j) {
    const double mod = std::abs(truth.amplitudes[j]);
    if (!(mod > 0.0)) throw DomainError("weighted_error: zero truth amplitude");
    e = std::max(e, std::abs(params.amplitudes[j] - truth.amplitudes[j]) / mod);
    e = std::max(e, s * wrap_distance(params.locations[j], truth.locations[j]));
  }
  return e;
}

SpikeParams gd_step(const SpikeParams& params, const Observation& obs, const Preconditioner& precond) {
  const Gradient g = gradient(params, obs);
  const Eigen::Index r = params.size();
  if (precond.diag.size() != 2 * r) throw DomainError("gd_step: preconditioner size mismatch");
  SpikeParams next;
  next.amplitudes = params.amplitudes - precond.diag.head(r).cwiseProduct(g.amplitudes);
  next.locations.resize(r);
  for (Eigen::Index j = 0; j < r; ++j)
    next.locations[j] = wrap_location(params.locations[j] - precond.diag[r + j] * g.locations[j]);
  return next;
}

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::converged: return "converged";
    case RunStatus::max_iterations: return "max_iterations";
    case RunStatus::degenerate: return "degenerate";
    default: return "non_finite";
  }
}

RunTrace run(const SpikeParams& params0, const Observation& obs, const std::optional<SpikeParams>& truth,
             const PreconditionerKind& kind, const RunOptions& options) {
  if (options.max_iters < 1) throw DomainError("run: max_iters must be at least 1");
  if (!(options.tol > 0.0)) throw DomainError("run: tol must be positive");
  params0.validate();
  if (truth && truth->size() != params0.size()) throw DomainError("run: truth size mismatch");
  const int n = obs.psf.n;

  RunTrace trace;
  SpikeParams cur = params0;
  double prev_err = kNaN;

  // Returns true once the stopping criterion is met at the current iterate.
  auto record = [&](int k) {
    TraceRow row;
    row.iteration = k;
    row.loss = loss(cur, obs);
    row.weighted_error = truth ? weighted_error(cur, *truth, n) : kNaN;
    row.contraction_ratio = (k == 0) ? kNaN : row.weighted_error / prev_err;
    prev_err = row.weighted_error;
    trace.rows.push_back(row);
    if (truth) return row.weighted_error <= options.tol;
    return gradient(cur, obs).inf_norm() <= options.tol;
  };

  trace.final_params = cur;
  if (record(0)) {
    trace.converged = true;
    trace.status = RunStatus::converged;
    return trace;
  }
  for (int k = 1; k <= options.max_iters; ++k) {
    try {
      const Preconditioner p = build_preconditioner(kind, cur.amplitudes, n);
      cur = gd_step(cur, obs, p);
    } catch (const DegenerateIterateError& e) {
      trace.status = RunStatus::degenerate;
      trace.message = e.what();
      return trace;
    }
    if (!all_finite(cur)) {
      trace.status = RunStatus::non_finite;
      trace.message = "iterate became non-finite at iteration " + std::to_string(k);
      return trace;
    }
    trace.final_params = cur;
    trace.iterations_run = k;
    if (record(k)) {
      trace.converged = true;
      trace.status = RunStatus::converged;
      return trace;
    }
  }
  return trace;
}

RateConstants rate_constants(const SpikeParams& truth, int n, std::optional<double> A) {
  truth.validate();
  if (truth.size() < 2) throw DomainError("rate_constants: need r >= 2 for a separation");
  const double amax = truth.amplitudes.cwiseAbs().maxCoeff();
  const double amin = truth.amplitudes.cwiseAbs().minCoeff();
  if (!(amin > 0.0)) throw DomainError("rate_constants: zero truth amplitude");
  const double alpha = (n + 1.0) * wraparound_separation(truth.locations);
  const double inv_a2 = 1.0 / (alpha * alpha);

  RateConstants rc;
  rc.gamma = 11.60 * (amax / amin) * inv_a2;
  rc.predicted_rate_adaptive = 0.5 + rc.gamma;
  rc.adaptive_hypotheses_hold = rc.gamma < 0.5;
  if (A) {
    if (!(*A > 0.0)) throw DomainError("rate_constants: A must be positive");
    rc.eta = 276.21 * (*A) * (*A) * amax / (amin * amin * amin) * inv_a2;
    rc.predicted_rate_fixed = 1.0 - 0.25 * (amin / *A) * (amin / *A) * (1.0 - rc.eta);
    rc.fixed_hypotheses_hold = rc.eta < 1.0;
  } else {
    rc.eta = kNaN;
    rc.predicted_rate_fixed = kNaN;
  }
  return rc;
}

void write_trace_csv(std::ostream& os, const RunTrace& trace) {
  CsvWriter csv(os, {"iteration", "weighted_error", "loss", "contraction_ratio"});
  for (const TraceRow& row : trace.rows)
    csv.row(row.iteration, row.weighted_error, row.loss, row.contraction_ratio);
}

}  // namespace spikedeconv
