#pragma once

#include <array>
#include <cstdint>

#include "spikedeconv/rng.hpp"
#include "spikedeconv/signal_model.hpp"

namespace spikedeconv {

// Locations with (n+1) * separation >= alpha: r gaps of at least alpha/(n+1)
// plus a flat Dirichlet share of the slack, randomly rotated and sorted.
Eigen::VectorXd sample_separated_locations(int n, int r, double alpha, Rng& rng);

// Random amplitudes with moduli uniform on [1, kappa] and uniform phases.
Eigen::VectorXcd sample_amplitudes(int r, double kappa, Rng& rng);

struct KernelSumSweepReport {
  int configurations = 0;
  int checks = 0;
  int violations = 0;
  std::array<int, 4> violations_by_order{};
  std::array<double, 4> worst_ratio{};  // max lhs / rhs per derivative order
};

// Random admissible configurations, r in 2..max_r, n in min_n..max_n, all orders.
KernelSumSweepReport kernel_sum_sweep(int configurations, std::uint64_t seed, int min_n = 4, int max_n = 64,
                             int max_r = 12);

enum class HessianBoundKind { fixed, adaptive };

struct HessianBoundReport {
  int instances = 0;
  int checks = 0;
  int violations = 0;
  double worst_ratio = 0.0;        // max measured / bound
  double max_e_at_truth = 0.0;     // max |E| entry at theta*
};

// Right-hand sides of the uniform Hessian bounds; eps is the weighted
// distance of the iterate that defines P and the segment.
double fixed_hessian_bound(double eps, double a_min, double A, double kappa, double alpha);
double adaptive_hessian_bound(double eps, double kappa, double alpha);

// Random instances satisfying the corresponding hypotheses; points sampled on
// the segment between theta* and a random iterate theta_k.
HessianBoundReport hessian_bound_sweep(HessianBoundKind kind, int instances, std::uint64_t seed);

struct DerivativeCheckReport {
  int instances = 0;
  double max_gradient_error = 0.0;
  double max_hessian_error = 0.0;
};

// Central differences in the scaled real coordinates (Re a, Im a, s tau).
// Errors are |fd - analytic| / max(|analytic|, 1) per entry.
DerivativeCheckReport derivative_check(int instances, std::uint64_t seed, double gradient_step = 1e-6,
                                       double hessian_step = 1e-5);

}  // namespace spikedeconv
