#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>

#include "spikedeconv/signal_model.hpp"

namespace spikedeconv {

struct InstanceSpec {
  int n = 32;
  int r = 6;
  double kappa = 1.0;
  double min_sep_scaled = 2.0;  // lower bound on (n+1) * separation
  std::uint64_t seed = 0;

  void validate() const;
};

inline constexpr long kMaxRejections = 1'000'000;

// Locations uniform on the torus, redrawn until (n+1) Delta >= min_sep_scaled,
// then sorted. Moduli uniform on [1, kappa], phases uniform on [0, 2 pi).
// Locations and amplitudes use separate sub-streams of the seed, so instances
// that differ only in kappa share their locations and phases.
SpikeParams gen_instance(const InstanceSpec& spec);

struct NoiseSpec {
  double snr = std::numeric_limits<double>::infinity();  // linear, not dB
  std::uint64_t seed = 0;
};

double snr_from_db(double db);

// Adds circular complex Gaussian noise rescaled so that
// ||clean||^2 / ||w||^2 equals snr exactly. snr = inf returns obs unchanged.
Observation add_noise(const Observation& clean, const NoiseSpec& spec);

// Per-sample variance ||clean||^2 / (N snr) implied by the realized SNR.
double noise_variance(const Observation& clean, double snr);

}  // namespace spikedeconv
