#include "spikedeconv/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "spikedeconv/csv.hpp"
#include "spikedeconv/errors.hpp"
#include "spikedeconv/experiments.hpp"
#include "spikedeconv/instance_io.hpp"
#include "spikedeconv/spectral_init.hpp"
#include "spikedeconv/svg_plot.hpp"
#include "spikedeconv/verification.hpp"
#include "spikedeconv/version.hpp"

namespace spikedeconv {
namespace {

namespace fs = std::filesystem;

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::pair<const char*, Command> kCommands[] = {
    {"solve", Command::solve},
    {"basin", Command::basin},
    {"dynamic-range", Command::dynamic_range},
    {"snr", Command::snr},
    {"verify-bounds", Command::verify_bounds},
    {"check-derivatives", Command::check_derivatives},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\"'[");
  const auto e = s.find_last_not_of(" \t\"']");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf" || t == "infinity") return kInf;
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw UsageError(key + ": '" + text + "' is not a number");
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::vector<std::string>& items) {
  std::vector<double> out;
  for (const std::string& item : items) {
    std::string part;
    std::istringstream ss(trim(item));
    while (std::getline(ss, part, ','))
      if (!trim(part).empty()) out.push_back(parse_real(key, part));
  }
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_number(v[i]);
  return out;
}

std::vector<PrecondType> schemes_of(const RunConfig& c) {
  if (c.scheme == "invariant") return {PrecondType::invariant};
  if (c.scheme == "adaptive") return {PrecondType::adaptive};
  return {PrecondType::invariant, PrecondType::adaptive};
}

std::string kappa_tag(const std::vector<double>& ks) {
  std::string out = "k";
  for (std::size_t i = 0; i < ks.size(); ++i) out += (i ? "-" : "") + format_number(ks[i]);
  return out;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw UsageError(key + ": " + what);
}

void validate(const RunConfig& c) {
  require(c.instance.n >= 2, "n", "must be at least 2");
  require(c.instance.r >= 1 && c.instance.r <= 2 * c.instance.n + 1, "r", "must be in 1..2n+1");
  if (c.kappa) require(*c.kappa >= 1.0 && std::isfinite(*c.kappa), "kappa", "must be finite and >= 1");
  for (double k : c.kappas) require(k >= 1.0 && std::isfinite(k), "kappas", "every entry must be finite and >= 1");
  require(c.instance.min_sep_scaled >= 0.0, "min_sep", "must be nonnegative");
  require(c.instance.min_sep_scaled * c.instance.r <= c.instance.n + 1.0, "min_sep",
          "min_sep * r must not exceed n + 1");
  require(c.scheme == "invariant" || c.scheme == "adaptive" || c.scheme == "both", "scheme",
          "must be invariant, adaptive or both");
  if (c.A) require(*c.A > 0.0 && std::isfinite(*c.A), "A", "must be 'auto' or a positive number");
  if (c.iterations) require(*c.iterations >= 1, "iterations", "must be at least 1");
  require(c.tolerance > 0.0, "tolerance", "must be positive");
  if (c.trials) require(*c.trials >= 1, "trials", "must be at least 1");
  for (double d : c.distances) require(d >= 0.0 && std::isfinite(d), "distances", "entries must be finite and >= 0");
  for (double s : c.snr_db) require(!std::isnan(s) && s > -kInf, "snr_db", "entries must be numbers or inf");
  require(!std::isnan(c.noise_snr_db) && c.noise_snr_db > -kInf, "noise_snr_db", "must be a number or inf");
  require(!c.output_dir.empty(), "output_dir", "must not be empty");
  if (c.command == Command::basin || c.command == Command::dynamic_range || c.command == Command::snr ||
      c.command == Command::solve)
    if (c.instance_file.empty())
      require(c.instance.min_sep_scaled * c.instance.r <= c.instance.n + 1.0, "min_sep", "infeasible");
}

// Writes a file, creating parent directories.
template <class Fn>
fs::path write_file(const fs::path& path, Fn&& fn) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  fn(os);
  return path;
}

void write_metadata(const RunConfig& c, const fs::path& dir, const std::string& stem) {
  write_file(dir / (stem + "_metadata.cfg"), [&](std::ostream& os) {
    os << "# spikedeconv " << kVersion << "\n";
    os << "# command " << to_string(c.command) << ", master seed " << c.seed
       << "; trial i uses instance seed derive_seed(seed, i)\n";
    os << "# equidistant initializations perturb complex amplitudes in modulus and phase\n";
    os << "# rerun with: spikedeconv --config <this file>\n";
    os << to_config_text(c);
  });
}

int run_solve(const RunConfig& c, const fs::path& dir, std::ostream& out) {
  InstanceRecord rec;
  if (!c.instance_file.empty()) {
    std::ifstream is(c.instance_file);
    if (!is) throw UsageError("instance_file: cannot open '" + c.instance_file + "'");
    rec = read_instance(is);
  } else {
    rec.n = c.instance.n;
    rec.seed = c.seed;
    InstanceSpec spec = c.instance;
    spec.seed = c.seed;
    rec.params = gen_instance(spec);
  }
  const SpikeParams& truth = rec.params;
  const Observation clean = observe(truth, PsfWeights::make(rec.n));
  const Observation obs = add_noise(clean, {snr_from_db(c.noise_snr_db), derive_seed(c.seed, 7)});
  const SpikeParams theta0 = align_to_truth(omp_init(obs, static_cast<int>(truth.size())).params0, truth);
  const APolicy policy{c.A};
  const std::string tag = "k" + format_number(c.instance.kappa) + "_seed" + std::to_string(c.seed);

  write_file(dir / ("solve_instance_seed" + std::to_string(c.seed) + ".txt"),
             [&](std::ostream& os) { write_instance(os, rec); });
  const RateConstants rc = truth.size() >= 2 ? rate_constants(truth, rec.n, policy.resolve(truth)) : RateConstants{};
  out << "instance: n=" << rec.n << " r=" << truth.size() << " seed=" << rec.seed << "\n";
  if (truth.size() >= 2)
    out << "rates: eta=" << format_number(rc.eta) << " gamma=" << format_number(rc.gamma)
        << " fixed=" << format_number(rc.predicted_rate_fixed) << (rc.fixed_hypotheses_hold ? "" : " (hypothesis violated)")
        << " adaptive=" << format_number(rc.predicted_rate_adaptive)
        << (rc.adaptive_hypotheses_hold ? "" : " (hypothesis violated)") << "\n";

  bool failed = false;
  for (PrecondType scheme : schemes_of(c)) {
    const RunTrace tr = run(theta0, obs, truth, make_kind(scheme, truth, policy), {c.resolved_iterations(), c.tolerance});
    const std::string name = to_string(scheme);
    write_file(dir / ("solve_trace_" + name + "_" + tag + ".csv"), [&](std::ostream& os) { write_trace_csv(os, tr); });
    write_file(dir / ("solve_estimate_" + name + "_" + tag + ".txt"),
               [&](std::ostream& os) { write_instance(os, {rec.n, rec.seed, tr.final_params}); });
    if (c.svg) {
      PlotSpec ps{"solve: " + name, "iteration", "weighted error", true, {}};
      PlotSeries s{name, {}, {}};
      for (const TraceRow& row : tr.rows) {
        s.x.push_back(row.iteration);
        s.y.push_back(row.weighted_error);
      }
      ps.series.push_back(s);
      write_file(dir / ("solve_trace_" + name + "_" + tag + ".svg"), [&](std::ostream& os) { write_svg_plot(os, ps); });
    }
    const double err = matched_error(tr.final_params, truth, rec.n);
    out << name << ": status=" << to_string(tr.status) << " iterations=" << tr.iterations_run
        << " final_weighted_error=" << format_number(err) << (tr.message.empty() ? "" : " (" + tr.message + ")")
        << "\n";
    failed = failed || tr.failed();
  }
  write_metadata(c, dir, "solve_" + tag);
  return failed ? kExitNumerical : kExitOk;
}

int run_basin(const RunConfig& c, const fs::path& dir, std::ostream& out) {
  BasinConfig bc;
  bc.instance = c.instance;
  bc.kappas = c.resolved_kappas();
  bc.schemes = schemes_of(c);
  bc.distances = c.resolved_distances();
  bc.iterations = c.resolved_iterations();
  bc.common = {c.seed, c.resolved_trials(), c.workers, APolicy{c.A}, c.tolerance};
  const std::vector<BasinRow> rows = basin_experiment(bc);
  const std::string stem = "basin_" + kappa_tag(bc.kappas) + "_" + c.scheme + "_seed" + std::to_string(c.seed);
  write_file(dir / (stem + ".csv"), [&](std::ostream& os) { write_basin_csv(os, rows); });
  if (c.svg) {
    PlotSpec ps{"success rate vs initialization distance", "distance", "success rate", false, {}};
    for (double k : bc.kappas)
      for (PrecondType s : bc.schemes) {
        PlotSeries ser{to_string(s) + " kappa=" + format_number(k), {}, {}, s == PrecondType::invariant};
        for (const BasinRow& r : rows)
          if (r.kappa == k && r.scheme == s) {
            ser.x.push_back(r.distance);
            ser.y.push_back(r.rate());
          }
        ps.series.push_back(ser);
      }
    write_file(dir / (stem + ".svg"), [&](std::ostream& os) { write_svg_plot(os, ps); });
  }
  int failures = 0;
  for (const BasinRow& r : rows) failures += r.failures;
  for (double k : bc.kappas)
    for (PrecondType s : bc.schemes)
      out << "kappa=" << format_number(k) << " " << to_string(s)
          << ": first distance with success rate < 0.5 = " << format_number(half_success_distance(rows, k, s)) << "\n";
  out << "failed runs: " << failures << "\n";
  write_metadata(c, dir, stem);
  return kExitOk;
}

int run_dynamic_range(const RunConfig& c, const fs::path& dir, std::ostream& out) {
  ConvergenceConfig cc;
  cc.instance = c.instance;
  cc.kappas = c.resolved_kappas();
  cc.schemes = schemes_of(c);
  cc.max_iters = c.resolved_iterations();
  cc.common = {c.seed, c.resolved_trials(), c.workers, APolicy{c.A}, c.tolerance};
  const ConvergenceResult res = convergence_experiment(cc);
  const std::string stem = "dynamic-range_" + kappa_tag(cc.kappas) + "_" + c.scheme + "_seed" + std::to_string(c.seed);
  write_file(dir / (stem + "_summary.csv"), [&](std::ostream& os) { write_convergence_summary_csv(os, res); });
  write_file(dir / (stem + "_curves.csv"), [&](std::ostream& os) { write_convergence_curves_csv(os, res); });
  write_file(dir / (stem + "_trials.csv"), [&](std::ostream& os) { write_convergence_trials_csv(os, res); });
  if (c.svg) {
    std::ostringstream curves;
    write_convergence_curves_csv(curves, res);
    PlotSpec ps{"median weighted error from spectral initialization", "iteration", "weighted error", true, {}};
    for (const ConvergenceSummary& s : res.summary) {
      PlotSeries ser{to_string(s.scheme) + " kappa=" + format_number(s.kappa), {}, {}, s.scheme == PrecondType::invariant};
      std::istringstream is(curves.str());
      std::string line;
      std::getline(is, line);
      const std::string prefix = format_number(s.kappa) + "," + to_string(s.scheme) + ",";
      while (std::getline(is, line)) {
        if (line.rfind(prefix, 0) != 0) continue;
        std::istringstream ls(line.substr(prefix.size()));
        std::string it, err;
        std::getline(ls, it, ',');
        std::getline(ls, err, ',');
        ser.x.push_back(parse_real("curve", it));
        ser.y.push_back(parse_real("curve", err));
      }
      ps.series.push_back(ser);
    }
    write_file(dir / (stem + ".svg"), [&](std::ostream& os) { write_svg_plot(os, ps); });
  }
  for (const ConvergenceSummary& s : res.summary)
    out << "kappa=" << format_number(s.kappa) << " " << to_string(s.scheme) << ": included " << s.included << "/"
        << s.trials << ", median iterations to 1e-6 = " << format_number(s.median_iterations)
        << ", median log10 slope = " << format_number(s.median_slope) << "\n";
  write_metadata(c, dir, stem);
  return kExitOk;
}

int run_snr(const RunConfig& c, const fs::path& dir, std::ostream& out) {
  SnrConfig sc;
  sc.instance = c.instance;
  sc.snr_db = c.resolved_snr_db();
  sc.schemes = schemes_of(c);
  sc.iterations = c.resolved_iterations();
  sc.common = {c.seed, c.resolved_trials(), c.workers, APolicy{c.A}, c.tolerance};
  const SnrResult res = snr_experiment(sc);
  const std::string stem =
      "snr_k" + format_number(c.instance.kappa) + "_" + c.scheme + "_seed" + std::to_string(c.seed);
  write_file(dir / (stem + ".csv"), [&](std::ostream& os) { write_snr_csv(os, res); });
  write_file(dir / (stem + "_crb.csv"), [&](std::ostream& os) { write_crb_csv(os, res); });
  if (c.svg) {
    PlotSpec ps{"mean weighted error vs SNR", "SNR (dB)", "weighted error", true, {}};
    PlotSeries crb_line{"CRB", {}, {}, true};
    for (const SnrRow& r : res.rows) {
      crb_line.x.push_back(r.snr_db);
      crb_line.y.push_back(r.mean_crb);
    }
    for (std::size_t si = 0; si < sc.schemes.size(); ++si) {
      PlotSeries ser{to_string(sc.schemes[si]), {}, {}};
      for (const SnrRow& r : res.rows) {
        ser.x.push_back(r.snr_db);
        ser.y.push_back(r.schemes[si].mean_error);
      }
      ps.series.push_back(ser);
    }
    ps.series.push_back(crb_line);
    write_file(dir / (stem + ".svg"), [&](std::ostream& os) { write_svg_plot(os, ps); });
  }
  int failures = 0;
  for (const SnrRow& r : res.rows) {
    out << "snr=" << format_number(r.snr_db) << "dB crb=" << format_number(r.mean_crb);
    for (const SnrSchemeStats& st : r.schemes) {
      out << " " << to_string(st.scheme) << "=" << format_number(st.mean_error);
      failures += st.failures;
    }
    out << "\n";
  }
  out << "failed runs: " << failures << "\n";
  write_metadata(c, dir, stem);
  return kExitOk;
}

int run_verify_bounds(const RunConfig& c, const fs::path& dir, std::ostream& out) {
  const int sum_configs = c.trials.value_or(1000);
  const int thm_n = c.trials.value_or(200);
  const KernelSumSweepReport sums = kernel_sum_sweep(sum_configs, derive_seed(c.seed, 1));
  const HessianBoundReport fixed = hessian_bound_sweep(HessianBoundKind::fixed, thm_n, derive_seed(c.seed, 2));
  const HessianBoundReport adaptive =
      hessian_bound_sweep(HessianBoundKind::adaptive, thm_n, derive_seed(c.seed, 3));
  const std::string stem = "verify-bounds_seed" + std::to_string(c.seed);
  write_file(dir / (stem + ".csv"), [&](std::ostream& os) {
    CsvWriter csv(os, {"check", "cases", "evaluations", "violations", "worst_ratio"});
    for (int o = 0; o < 4; ++o)
      csv.row("kernel_sum_order_" + std::to_string(o), sums.configurations, sums.configurations,
              sums.violations_by_order[o], sums.worst_ratio[o]);
    csv.row("hessian_fixed", fixed.instances, fixed.checks, fixed.violations, fixed.worst_ratio);
    csv.row("hessian_adaptive", adaptive.instances, adaptive.checks, adaptive.violations, adaptive.worst_ratio);
  });
  const int violations = sums.violations + fixed.violations + adaptive.violations;
  out << "kernel summation bound: " << sums.checks << " checks, " << sums.violations << " violations\n";
  out << "fixed-preconditioner Hessian bound: " << fixed.checks << " checks, " << fixed.violations
      << " violations, E(theta*) max " << format_number(fixed.max_e_at_truth) << "\n";
  out << "adaptive-preconditioner Hessian bound: " << adaptive.checks << " checks, " << adaptive.violations
      << " violations, E(theta*) max " << format_number(adaptive.max_e_at_truth) << "\n";
  out << "violated inequalities: " << violations << "\n";
  write_metadata(c, dir, stem);
  return violations == 0 ? kExitOk : kExitNumerical;
}

int run_check_derivatives(const RunConfig& c, const fs::path& dir, std::ostream& out) {
  const DerivativeCheckReport rep = derivative_check(c.trials.value_or(100), derive_seed(c.seed, 4));
  const std::string stem = "check-derivatives_seed" + std::to_string(c.seed);
  write_file(dir / (stem + ".csv"), [&](std::ostream& os) {
    CsvWriter csv(os, {"instances", "max_gradient_error", "max_hessian_error"});
    csv.row(rep.instances, rep.max_gradient_error, rep.max_hessian_error);
  });
  out << "instances: " << rep.instances << "\n";
  out << "max relative gradient FD error: " << format_number(rep.max_gradient_error) << "\n";
  out << "max relative Hessian FD error: " << format_number(rep.max_hessian_error) << "\n";
  write_metadata(c, dir, stem);
  return rep.max_gradient_error < 1e-6 && rep.max_hessian_error < 1e-5 ? kExitOk : kExitNumerical;
}

}  // namespace

std::string to_string(Command c) {
  for (const auto& [name, cmd] : kCommands)
    if (cmd == c) return name;
  return "?";
}

int RunConfig::resolved_iterations() const {
  if (iterations) return *iterations;
  return command == Command::dynamic_range ? 1000 : 200;
}

int RunConfig::resolved_trials() const { return trials.value_or(1000); }

std::vector<double> RunConfig::resolved_kappas() const {
  if (!kappas.empty()) return kappas;
  if (kappa) return {*kappa};
  if (command == Command::basin) return {1.0, 6.0};
  return {1.0, 3.0, 6.0};
}

std::vector<double> RunConfig::resolved_distances() const {
  if (!distances.empty()) return distances;
  std::vector<double> d;
  for (int i = 0; i <= 30; ++i) d.push_back(i / 20.0);
  return d;
}

std::vector<double> RunConfig::resolved_snr_db() const {
  if (!snr_db.empty()) return snr_db;
  return {10.0, 20.0, 30.0, 40.0, 50.0};
}

RunConfig parse_config(const std::vector<std::string>& args, const std::optional<std::string>& env_output_dir) {
  RunConfig c;
  std::string command = "solve", kappa_s, a_s = "auto", noise_s = "inf", out_s;
  std::vector<std::string> kappas_s, distances_s, snr_s;

  CLI::App app{"Spike deconvolution by preconditioned gradient descent", "spikedeconv"};
  app.set_config("--config", "", "flat key=value configuration file; flags override its values");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.add_option("command,--command", command,
                 "solve | basin | dynamic-range | snr | verify-bounds | check-derivatives");
  app.add_option("--n", c.instance.n, "half-bandwidth; N = 2n+1 samples (default 32)");
  app.add_option("--r", c.instance.r, "number of spikes (default 6)");
  app.add_option("--kappa", kappa_s, "dynamic range (solve default 1, snr default 3)");
  app.add_option("--kappas", kappas_s, "comma-separated dynamic ranges for basin / dynamic-range")
      ->delimiter(',');
  app.add_option("--min_sep", c.instance.min_sep_scaled, "minimum (n+1) * separation (default 2)");
  app.add_option("--seed", c.seed, "master seed (default 0)");
  app.add_option("--scheme", c.scheme, "invariant | adaptive | both (default both)");
  app.add_option("--A", a_s, "'auto' (1.5 max |a*|) or a positive value");
  app.add_option("--iterations", c.iterations, "GD iterations (default 200; 1000 for dynamic-range)");
  app.add_option("--tolerance", c.tolerance, "early-exit weighted error (default 1e-13)");
  app.add_option("--output_dir", out_s, std::string("output directory (default $") + kOutputDirEnv + " or ./spikedeconv-out)");
  app.add_option("--trials", c.trials, "trials per point (default 1000; verify-bounds 1000/200; check-derivatives 100)");
  app.add_option("--distances", distances_s, "comma-separated initialization distances for basin")
      ->delimiter(',');
  app.add_option("--snr_db", snr_s, "comma-separated SNR values in dB for snr (inf allowed)")
      ->delimiter(',');
  app.add_option("--noise_snr_db", noise_s, "SNR in dB for solve (default inf, noiseless)");
  app.add_option("--instance_file", c.instance_file, "instance record to solve instead of generating one");
  app.add_option("--workers", c.workers, "worker threads (default 0 = all cores)");
  app.add_flag("--svg", c.svg, "also write SVG plots");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string(e.get_name()) + ": " + e.what());
  }

  bool found = false;
  for (const auto& [name, cmd] : kCommands)
    if (command == name) {
      c.command = cmd;
      found = true;
    }
  if (!found) throw UsageError("command: unknown command '" + command + "'");
  if (!kappa_s.empty()) c.kappa = parse_real("kappa", kappa_s);
  c.kappas = parse_list("kappas", kappas_s);
  if (trim(a_s) != "auto") c.A = parse_real("A", a_s);
  c.distances = parse_list("distances", distances_s);
  c.snr_db = parse_list("snr_db", snr_s);
  c.noise_snr_db = parse_real("noise_snr_db", noise_s);
  c.output_dir = !out_s.empty() ? out_s : env_output_dir && !env_output_dir->empty() ? *env_output_dir : "spikedeconv-out";
  validate(c);
  c.instance.kappa = c.kappa.value_or(c.command == Command::snr ? 3.0 : 1.0);
  c.instance.seed = c.seed;
  return c;
}

std::string to_config_text(const RunConfig& c) {
  std::ostringstream os;
  os << "command=" << to_string(c.command) << "\n";
  os << "n=" << c.instance.n << "\n";
  os << "r=" << c.instance.r << "\n";
  os << "kappa=" << format_number(c.instance.kappa) << "\n";
  os << "kappas=\"" << join(c.resolved_kappas()) << "\"\n";
  os << "min_sep=" << format_number(c.instance.min_sep_scaled) << "\n";
  os << "seed=" << c.seed << "\n";
  os << "scheme=" << c.scheme << "\n";
  os << "A=" << (c.A ? format_number(*c.A) : std::string("auto")) << "\n";
  os << "iterations=" << c.resolved_iterations() << "\n";
  os << "tolerance=" << format_number(c.tolerance) << "\n";
  os << "output_dir=\"" << c.output_dir << "\"\n";
  if (c.trials) os << "trials=" << *c.trials << "\n";
  else if (c.command != Command::verify_bounds && c.command != Command::check_derivatives)
    os << "trials=" << c.resolved_trials() << "\n";
  os << "distances=\"" << join(c.resolved_distances()) << "\"\n";
  os << "snr_db=\"" << join(c.resolved_snr_db()) << "\"\n";
  os << "noise_snr_db=" << format_number(c.noise_snr_db) << "\n";
  if (!c.instance_file.empty()) os << "instance_file=\"" << c.instance_file << "\"\n";
  os << "workers=" << c.workers << "\n";
  os << "svg=" << (c.svg ? "true" : "false") << "\n";
  return os.str();
}

int execute(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    const fs::path dir(c.output_dir);
    fs::create_directories(dir);
    switch (c.command) {
      case Command::solve: return run_solve(c, dir, out);
      case Command::basin: return run_basin(c, dir, out);
      case Command::dynamic_range: return run_dynamic_range(c, dir, out);
      case Command::snr: return run_snr(c, dir, out);
      case Command::verify_bounds: return run_verify_bounds(c, dir, out);
      case Command::check_derivatives: return run_check_derivatives(c, dir, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace spikedeconv
