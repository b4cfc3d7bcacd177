#pragma once

#include "spikedeconv/signal_model.hpp"

namespace spikedeconv {

struct CrbReport {
  // Diagonal of the inverse Fisher information, ordered (Re a, Im a, tau).
  Eigen::VectorXd bounds;
  Eigen::MatrixXd fisher;
  // Per spike: sqrt(CRB_Re + CRB_Im) / |a*_j| and s sqrt(CRB_tau_j).
  Eigen::VectorXd amplitude_benchmark;
  Eigen::VectorXd location_benchmark;
  // Max over both per-spike benchmarks, the scalar compared against the
  // weighted error.
  double weighted_benchmark = 0.0;
};

// Fisher information (2 / sigma^2) Re(J^H J) for circular complex Gaussian
// noise with per-sample variance sigma^2, J the Jacobian of the observation
// map in the real coordinates.
CrbReport crb(const SpikeParams& truth, const PsfWeights& psf, double noise_variance);

}  // namespace spikedeconv
