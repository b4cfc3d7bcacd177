#include "spikedeconv/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "spikedeconv/crb.hpp"
#include "spikedeconv/csv.hpp"
#include "spikedeconv/errors.hpp"
#include "spikedeconv/fejer.hpp"
#include "spikedeconv/parallel.hpp"
#include "spikedeconv/spectral_init.hpp"

namespace spikedeconv {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double median(std::vector<double> v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

InstanceSpec with(const InstanceSpec& base, double kappa, std::uint64_t seed) {
  InstanceSpec s = base;
  s.kappa = kappa;
  s.seed = seed;
  return s;
}

void check_common(const ExperimentCommon& c) {
  if (c.trials < 1) throw DomainError("experiment: trials must be at least 1");
  if (c.a_policy.value && !(*c.a_policy.value > 0.0)) throw DomainError("experiment: A must be positive");
}

}  // namespace

double APolicy::resolve(const SpikeParams& truth) const {
  if (value) return *value;
  return 1.5 * truth.amplitudes.cwiseAbs().maxCoeff();
}

PreconditionerKind make_kind(PrecondType type, const SpikeParams& truth, const APolicy& policy) {
  if (type == PrecondType::invariant) return PreconditionerKind::invariant(policy.resolve(truth));
  return PreconditionerKind::adaptive();
}

SpikeParams sample_equidistant(const SpikeParams& truth, int n, double d, Rng& rng) {
  if (!(d >= 0.0)) throw DomainError("sample_equidistant: distance must be nonnegative");
  const Eigen::Index r = truth.size();
  Eigen::VectorXcd z(r);
  Eigen::VectorXd u(r);
  for (Eigen::Index j = 0; j < r; ++j) {
    const double re = rng.uniform(-1.0, 1.0);
    const double im = rng.uniform(-1.0, 1.0);
    z[j] = cdouble(re, im);
  }
  for (Eigen::Index j = 0; j < r; ++j) u[j] = rng.uniform(-1.0, 1.0);
  const double norm = std::max(z.cwiseAbs().maxCoeff(), u.cwiseAbs().maxCoeff());
  const double scale = norm > 0.0 ? d / norm : 0.0;
  const double s = location_scale(n);
  SpikeParams out;
  out.amplitudes = truth.amplitudes.cwiseProduct(Eigen::VectorXcd::Ones(r) + scale * z);
  out.locations.resize(r);
  for (Eigen::Index j = 0; j < r; ++j) out.locations[j] = wrap_location(truth.locations[j] + scale * u[j] / s);
  return out;
}

double matched_error(const SpikeParams& estimate, const SpikeParams& truth, int n) {
  return weighted_error(align_to_truth(estimate, truth), truth, n);
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t trial) { return derive_seed(master, trial); }

std::vector<BasinRow> basin_experiment(const BasinConfig& cfg) {
  check_common(cfg.common);
  for (double d : cfg.distances)
    if (!(d >= 0.0)) throw DomainError("basin: distances must be nonnegative");
  const std::size_t nk = cfg.kappas.size(), nd = cfg.distances.size(), ns = cfg.schemes.size();
  const std::size_t nt = static_cast<std::size_t>(cfg.common.trials);
  // outcome[(k * nt + t) * nd * ns + d * ns + s]: 1 success, 0 miss, -1 failed run
  std::vector<int> outcome(nk * nt * nd * ns, 0);

  parallel_for(nk * nt, cfg.common.workers, [&](std::size_t task) {
    const std::size_t ki = task / nt, t = task % nt;
    const std::uint64_t seed = trial_seed(cfg.common.master_seed, t);
    const SpikeParams truth = gen_instance(with(cfg.instance, cfg.kappas[ki], seed));
    const Observation obs = observe(truth, PsfWeights::make(cfg.instance.n));
    for (std::size_t di = 0; di < nd; ++di) {
      Rng rng(derive_seed(seed, 100 + di));
      const SpikeParams theta0 = sample_equidistant(truth, cfg.instance.n, cfg.distances[di], rng);
      for (std::size_t si = 0; si < ns; ++si) {
        const RunTrace tr = run(theta0, obs, truth, make_kind(cfg.schemes[si], truth, cfg.common.a_policy),
                                {cfg.iterations, cfg.common.tol});
        int& slot = outcome[task * nd * ns + di * ns + si];
        if (tr.failed())
          slot = -1;
        else
          slot = matched_error(tr.final_params, truth, cfg.instance.n) <= kSuccessThreshold ? 1 : 0;
      }
    }
  });

  std::vector<BasinRow> rows;
  for (std::size_t ki = 0; ki < nk; ++ki)
    for (std::size_t si = 0; si < ns; ++si)
      for (std::size_t di = 0; di < nd; ++di) {
        BasinRow row{cfg.kappas[ki], cfg.schemes[si], cfg.distances[di], cfg.common.trials, 0, 0};
        for (std::size_t t = 0; t < nt; ++t) {
          const int v = outcome[(ki * nt + t) * nd * ns + di * ns + si];
          row.successes += v == 1;
          row.failures += v == -1;
        }
        rows.push_back(row);
      }
  return rows;
}

double half_success_distance(const std::vector<BasinRow>& rows, double kappa, PrecondType scheme) {
  double best = std::numeric_limits<double>::infinity();
  for (const BasinRow& r : rows)
    if (r.kappa == kappa && r.scheme == scheme && r.rate() < 0.5) best = std::min(best, r.distance);
  return best;
}

double fitted_log_slope(const std::vector<double>& errors, double low, double high) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t k = 0; k < errors.size(); ++k) {
    const double e = errors[k];
    if (!(e > low && e < high)) continue;
    const double x = static_cast<double>(k), y = std::log10(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 3) return kNaN;
  const double den = m * sxx - sx * sx;
  return den > 0.0 ? (m * sxy - sx * sy) / den : kNaN;
}

ConvergenceResult convergence_experiment(const ConvergenceConfig& cfg) {
  check_common(cfg.common);
  if (cfg.max_iters < 1 || !(cfg.target > 0.0)) throw DomainError("convergence: bad iteration settings");
  const std::size_t nk = cfg.kappas.size(), ns = cfg.schemes.size();
  const std::size_t nt = static_cast<std::size_t>(cfg.common.trials);
  std::vector<ConvergenceTrial> trials(nk * nt * ns);
  const auto adaptive_it = std::find(cfg.schemes.begin(), cfg.schemes.end(), PrecondType::adaptive);

  parallel_for(nk * nt, cfg.common.workers, [&](std::size_t task) {
    const std::size_t ki = task / nt, t = task % nt;
    const SpikeParams truth =
        gen_instance(with(cfg.instance, cfg.kappas[ki], trial_seed(cfg.common.master_seed, t)));
    const Observation obs = observe(truth, PsfWeights::make(cfg.instance.n));
    const SpikeParams theta0 = align_to_truth(omp_init(obs, cfg.instance.r).params0, truth);
    for (std::size_t si = 0; si < ns; ++si) {
      const RunTrace tr = run(theta0, obs, truth, make_kind(cfg.schemes[si], truth, cfg.common.a_policy),
                              {cfg.max_iters, cfg.common.tol});
      ConvergenceTrial& out = trials[task * ns + si];
      out.kappa = cfg.kappas[ki];
      out.scheme = cfg.schemes[si];
      out.trial = static_cast<int>(t);
      for (const TraceRow& row : tr.rows) out.errors.push_back(row.weighted_error);
      for (std::size_t k = 0; k < out.errors.size(); ++k)
        if (out.errors[k] <= cfg.target) {
          out.iterations_to_target = static_cast<int>(k);
          break;
        }
      out.slope = fitted_log_slope(out.errors, cfg.fit_low, cfg.fit_high);
    }
    // Basin membership is judged by the adaptive run (or the only scheme run).
    const std::size_t ref = adaptive_it != cfg.schemes.end()
                                ? static_cast<std::size_t>(adaptive_it - cfg.schemes.begin())
                                : 0;
    const bool in_basin = ns > 0 && trials[task * ns + ref].iterations_to_target >= 0;
    for (std::size_t si = 0; si < ns; ++si) trials[task * ns + si].in_basin = in_basin;
  });

  ConvergenceResult res;
  res.max_iters = cfg.max_iters;
  res.trials = std::move(trials);
  for (std::size_t ki = 0; ki < nk; ++ki)
    for (std::size_t si = 0; si < ns; ++si) {
      ConvergenceSummary s{cfg.kappas[ki], cfg.schemes[si], cfg.common.trials, 0, kNaN, kNaN};
      std::vector<double> its, slopes;
      for (std::size_t t = 0; t < nt; ++t) {
        const ConvergenceTrial& tr = res.trials[(ki * nt + t) * ns + si];
        if (!tr.in_basin) continue;
        ++s.included;
        its.push_back(tr.iterations_to_target >= 0 ? tr.iterations_to_target : cfg.max_iters + 1.0);
        if (std::isfinite(tr.slope)) slopes.push_back(tr.slope);
      }
      s.median_iterations = median(its);
      s.median_slope = median(slopes);
      res.summary.push_back(s);
    }
  return res;
}

SnrResult snr_experiment(const SnrConfig& cfg) {
  check_common(cfg.common);
  const int n = cfg.instance.n;
  const std::size_t np = cfg.snr_db.size(), ns = cfg.schemes.size();
  const std::size_t nt = static_cast<std::size_t>(cfg.common.trials);
  struct Cell {
    double crb = 0.0;
    bool recovered = false;
    std::vector<double> err;
    std::vector<bool> failed;
    Eigen::VectorXd bounds;
  };
  std::vector<Cell> cells(np * nt);

  parallel_for(np * nt, cfg.common.workers, [&](std::size_t task) {
    const std::size_t pi = task / nt, t = task % nt;
    const std::uint64_t seed = trial_seed(cfg.common.master_seed, t);
    const SpikeParams truth = gen_instance(with(cfg.instance, cfg.instance.kappa, seed));
    const PsfWeights psf = PsfWeights::make(n);
    const Observation clean = observe(truth, psf);
    const double snr = snr_from_db(cfg.snr_db[pi]);
    const Observation obs = add_noise(clean, {snr, derive_seed(seed, 7)});
    Cell& cell = cells[task];
    if (std::isfinite(snr)) {
      const CrbReport rep = crb(truth, psf, noise_variance(clean, snr));
      cell.crb = rep.weighted_benchmark;
      cell.bounds = rep.bounds;
    } else {
      cell.bounds = Eigen::VectorXd::Zero(3 * truth.size());
    }
    const SpikeParams theta0 = align_to_truth(omp_init(obs, cfg.instance.r).params0, truth);
    cell.recovered = true;
    for (Eigen::Index j = 0; j < truth.size(); ++j)
      cell.recovered = cell.recovered && wrap_distance(theta0.locations[j], truth.locations[j]) <= 1.0 / psf.size();
    for (std::size_t si = 0; si < ns; ++si) {
      const RunTrace tr = run(theta0, obs, truth, make_kind(cfg.schemes[si], truth, cfg.common.a_policy),
                              {cfg.iterations, cfg.common.tol});
      cell.err.push_back(matched_error(tr.final_params, truth, n));
      cell.failed.push_back(tr.failed());
    }
  });

  SnrResult res;
  for (std::size_t pi = 0; pi < np; ++pi) {
    SnrRow row;
    row.snr_db = cfg.snr_db[pi];
    row.trials = cfg.common.trials;
    double crb_sum = 0.0, crb_rec = 0.0;
    for (std::size_t t = 0; t < nt; ++t) {
      const Cell& c = cells[pi * nt + t];
      crb_sum += c.crb;
      if (c.recovered) {
        ++row.recovered;
        crb_rec += c.crb;
      }
      for (Eigen::Index j = 0; j < cfg.instance.r; ++j)
        res.crb_table.push_back({row.snr_db, static_cast<int>(t), static_cast<int>(j), c.bounds[j],
                                 c.bounds[cfg.instance.r + j], c.bounds[2 * cfg.instance.r + j]});
    }
    row.mean_crb = crb_sum / nt;
    row.mean_crb_recovered = row.recovered > 0 ? crb_rec / row.recovered : kNaN;
    for (std::size_t si = 0; si < ns; ++si) {
      SnrSchemeStats st;
      st.scheme = cfg.schemes[si];
      std::vector<double> all;
      double sum = 0.0, sum_rec = 0.0;
      for (std::size_t t = 0; t < nt; ++t) {
        const Cell& c = cells[pi * nt + t];
        all.push_back(c.err[si]);
        sum += c.err[si];
        if (c.recovered) sum_rec += c.err[si];
        st.successes += c.err[si] <= kSuccessThreshold;
        st.failures += c.failed[si];
      }
      st.mean_error = sum / nt;
      st.median_error = median(all);
      st.mean_error_recovered = row.recovered > 0 ? sum_rec / row.recovered : kNaN;
      row.schemes.push_back(st);
    }
    res.rows.push_back(row);
  }
  return res;
}

void write_basin_csv(std::ostream& os, const std::vector<BasinRow>& rows) {
  CsvWriter csv(os, {"kappa", "scheme", "distance", "trials", "successes", "failures", "success_rate"});
  for (const BasinRow& r : rows)
    csv.row(r.kappa, to_string(r.scheme), r.distance, r.trials, r.successes, r.failures, r.rate());
}

void write_convergence_curves_csv(std::ostream& os, const ConvergenceResult& res) {
  CsvWriter csv(os, {"kappa", "scheme", "iteration", "median_weighted_error", "trials_included"});
  for (const ConvergenceSummary& s : res.summary) {
    std::vector<const ConvergenceTrial*> members;
    std::size_t len = 0;
    for (const ConvergenceTrial& t : res.trials)
      if (t.kappa == s.kappa && t.scheme == s.scheme && t.in_basin) {
        members.push_back(&t);
        len = std::max(len, t.errors.size());
      }
    for (std::size_t k = 0; k < len; ++k) {
      std::vector<double> v;
      // A trace that stopped early holds its last value.
      for (const ConvergenceTrial* t : members) v.push_back(t->errors[std::min(k, t->errors.size() - 1)]);
      csv.row(s.kappa, to_string(s.scheme), static_cast<int>(k), median(v), static_cast<int>(members.size()));
    }
  }
}

void write_convergence_summary_csv(std::ostream& os, const ConvergenceResult& res) {
  CsvWriter csv(os, {"kappa", "scheme", "trials", "included", "median_iterations_to_target",
                     "median_log10_slope", "median_rate"});
  for (const ConvergenceSummary& s : res.summary)
    csv.row(s.kappa, to_string(s.scheme), s.trials, s.included, s.median_iterations, s.median_slope,
            std::pow(10.0, s.median_slope));
}

void write_convergence_trials_csv(std::ostream& os, const ConvergenceResult& res) {
  CsvWriter csv(os, {"kappa", "scheme", "trial", "in_basin", "iterations_to_target", "log10_slope",
                     "final_weighted_error"});
  for (const ConvergenceTrial& t : res.trials)
    csv.row(t.kappa, to_string(t.scheme), t.trial, static_cast<int>(t.in_basin), t.iterations_to_target,
            t.slope, t.errors.empty() ? kNaN : t.errors.back());
}

void write_snr_csv(std::ostream& os, const SnrResult& res) {
  std::vector<std::string> header{"snr_db", "trials", "init_recovered", "crb_weighted",
                                  "crb_weighted_recovered"};
  const std::vector<SnrSchemeStats>& first = res.rows.empty() ? std::vector<SnrSchemeStats>{} : res.rows[0].schemes;
  for (const SnrSchemeStats& st : first) {
    const std::string p = to_string(st.scheme);
    for (const char* col : {"_mean_error", "_median_error", "_mean_error_recovered", "_successes", "_failures"})
      header.push_back(p + col);
  }
  CsvWriter csv(os, header);
  for (const SnrRow& r : res.rows) {
    std::vector<std::string> f{format_number(r.snr_db), format_number(r.trials), format_number(r.recovered),
                               format_number(r.mean_crb), format_number(r.mean_crb_recovered)};
    for (const SnrSchemeStats& st : r.schemes) {
      f.push_back(format_number(st.mean_error));
      f.push_back(format_number(st.median_error));
      f.push_back(format_number(st.mean_error_recovered));
      f.push_back(format_number(st.successes));
      f.push_back(format_number(st.failures));
    }
    csv.write_fields(f);
  }
}

void write_crb_csv(std::ostream& os, const SnrResult& res) {
  CsvWriter csv(os, {"snr_db", "trial", "spike", "crb_re", "crb_im", "crb_tau"});
  for (const CrbEntry& e : res.crb_table) csv.row(e.snr_db, e.trial, e.spike, e.crb_re, e.crb_im, e.crb_tau);
}

}  // namespace spikedeconv
