#pragma once

#include <vector>

#include "spikedeconv/signal_model.hpp"

namespace spikedeconv {

// Column k + n holds g_k' e^{-i 2 pi k' k / N} over k' = -n..n, i.e. the
// observation of a unit spike at grid location k / N.
Eigen::MatrixXcd grid_dictionary(const PsfWeights& psf);

struct InitResult {
  std::vector<int> support;  // grid indices in -n..n, ascending
  SpikeParams params0;       // tau = k / N, a from least squares on the support
  std::vector<double> residual_norms;  // after each greedy round
};

// Orthogonal matching pursuit on the N-point grid. Selection uses unit-norm
// atoms with the lowest index winning ties; coefficients come from least
// squares on the unnormalized atoms of the current support. Throws
// DomainError for r > N and NumericalError when the support is rank deficient.
InitResult omp_init(const Observation& obs, int r);

// Minimum-cost perfect matching (Hungarian method); returns assignment[i] =
// column matched to row i.
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost);

// Reorders estimate so that spike j is the one matched to truth spike j under
// minimal total wrap-around location distance.
SpikeParams align_to_truth(const SpikeParams& estimate, const SpikeParams& truth);

}  // namespace spikedeconv
