#include "spikedeconv/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "spikedeconv/errors.hpp"
#include "spikedeconv/rng.hpp"

namespace spikedeconv {

void InstanceSpec::validate() const {
  if (n < 2) throw DomainError("instance: n must be at least 2");
  if (r < 1) throw DomainError("instance: r must be at least 1");
  if (!(kappa >= 1.0) || !std::isfinite(kappa)) throw DomainError("instance: kappa must be >= 1");
  if (!(min_sep_scaled >= 0.0)) throw DomainError("instance: min_sep must be nonnegative");
  if (min_sep_scaled * r > n + 1.0) throw DomainError("instance: min_sep * r exceeds n + 1");
}

SpikeParams gen_instance(const InstanceSpec& spec) {
  spec.validate();
  Rng loc_rng(derive_seed(spec.seed, 0));
  Rng amp_rng(derive_seed(spec.seed, 1));
  const double min_sep = spec.min_sep_scaled / (spec.n + 1.0);

  Eigen::VectorXd tau(spec.r);
  bool ok = false;
  for (long attempt = 0; attempt < kMaxRejections && !ok; ++attempt) {
    for (int j = 0; j < spec.r; ++j) tau[j] = wrap_location(loc_rng.uniform(-0.5, 0.5));
    ok = spec.r < 2 || wraparound_separation(tau) >= min_sep;
  }
  if (!ok) throw InfeasibleError("gen_instance: separation not met after 1e6 draws");
  std::sort(tau.data(), tau.data() + tau.size());

  SpikeParams p;
  p.locations = tau;
  p.amplitudes.resize(spec.r);
  for (int j = 0; j < spec.r; ++j) {
    const double u = amp_rng.uniform();
    const double phase = 2.0 * std::numbers::pi * amp_rng.uniform();
    const double mod = 1.0 + (spec.kappa - 1.0) * u;
    p.amplitudes[j] = std::polar(mod, phase);
  }
  return p;
}

double snr_from_db(double db) { return std::pow(10.0, db / 10.0); }

double noise_variance(const Observation& clean, double snr) {
  if (!(snr > 0.0)) throw DomainError("noise_variance: snr must be positive");
  return clean.samples.squaredNorm() / (clean.samples.size() * snr);
}

Observation add_noise(const Observation& clean, const NoiseSpec& spec) {
  if (!(spec.snr > 0.0)) throw DomainError("add_noise: snr must be positive");
  if (std::isinf(spec.snr)) return clean;
  Rng rng(spec.seed);
  Eigen::VectorXcd w(clean.samples.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    const double re = rng.normal();
    const double im = rng.normal();
    w[k] = cdouble(re, im);
  }
  const double target = clean.samples.squaredNorm() / spec.snr;
  w *= std::sqrt(target / w.squaredNorm());
  Observation out = clean;
  out.samples += w;
  return out;
}

}  // namespace spikedeconv
