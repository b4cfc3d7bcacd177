#include "spikedeconv/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spikedeconv/errors.hpp"
#include "spikedeconv/experiments.hpp"
#include "spikedeconv/fejer.hpp"
#include "spikedeconv/gradient_descent.hpp"
#include "spikedeconv/preconditioner.hpp"

namespace spikedeconv {
namespace {

int uniform_int(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.uniform() * (hi - lo + 1));
}

SpikeParams segment_point(const SpikeParams& truth, const SpikeParams& end, double u) {
  SpikeParams p;
  p.amplitudes = truth.amplitudes + u * (end.amplitudes - truth.amplitudes);
  p.locations.resize(truth.size());
  for (Eigen::Index j = 0; j < truth.size(); ++j)
    p.locations[j] = wrap_location(truth.locations[j] +
                                   u * std::remainder(end.locations[j] - truth.locations[j], 1.0));
  return p;
}

}  // namespace

Eigen::VectorXd sample_separated_locations(int n, int r, double alpha, Rng& rng) {
  const double delta = alpha / (n + 1.0);
  // alpha drawn just below (n+1)/r may round delta * r a few ulps past 1
  if (r < 1 || delta * r > 1.0 + 1e-12) throw DomainError("sample_separated_locations: infeasible");
  Eigen::VectorXd gaps(r);
  for (int j = 0; j < r; ++j) gaps[j] = -std::log(1.0 - rng.uniform());
  gaps *= std::max(0.0, 1.0 - r * delta) / gaps.sum();
  gaps.array() += delta;
  Eigen::VectorXd tau(r);
  double pos = rng.uniform();
  for (int j = 0; j < r; ++j) {
    tau[j] = wrap_location(pos);
    pos += gaps[j];
  }
  std::sort(tau.data(), tau.data() + r);
  return tau;
}

Eigen::VectorXcd sample_amplitudes(int r, double kappa, Rng& rng) {
  Eigen::VectorXcd a(r);
  for (int j = 0; j < r; ++j) {
    const double mod = 1.0 + (kappa - 1.0) * rng.uniform();
    a[j] = std::polar(mod, 2.0 * std::numbers::pi * rng.uniform());
  }
  return a;
}

KernelSumSweepReport kernel_sum_sweep(int configurations, std::uint64_t seed, int min_n, int max_n, int max_r) {
  Rng rng(seed);
  KernelSumSweepReport rep;
  for (int c = 0; c < configurations; ++c) {
    const int n = uniform_int(rng, min_n, max_n);
    const int r = std::min(uniform_int(rng, 2, max_r), n + 1);
    const double alpha = rng.uniform(0.1, (n + 1.0) / r);
    const Eigen::VectorXd tau = sample_separated_locations(n, r, alpha, rng);
    const double tight = (n + 1.0) * wraparound_separation(tau);
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(r, r);
    if (rng.uniform() < 0.5) {
      const double umax = rng.uniform(0.0, 0.49) * tight / (n + 1.0);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) u(i, j) = i == j ? 0.0 : rng.uniform(-umax, umax);
    }
    ++rep.configurations;
    for (int order = 0; order <= 3; ++order) {
      const SummationCheck chk =
          check_summation_bound(std::span<const double>(tau.data(), tau.size()), u, n, order);
      ++rep.checks;
      rep.violations += !chk.holds;
      rep.violations_by_order[order] += !chk.holds;
      rep.worst_ratio[order] = std::max(rep.worst_ratio[order], chk.lhs / chk.rhs);
    }
  }
  return rep;
}

double fixed_hessian_bound(double eps, double a_min, double A, double kappa, double alpha) {
  constexpr double k_delta = 2.13, k_theta = 44.42;
  const double ratio = a_min / A;
  return 1.0 - ratio * ratio * (1.0 - eps) * (1.0 - eps) +
         (4.0 * k_delta + k_theta * eps) * kappa / (alpha * alpha) * (1.0 + eps) * (1.0 + eps);
}

double adaptive_hessian_bound(double eps, double kappa, double alpha) {
  constexpr double k_delta = 2.32, k_theta = 75.80;
  const double q = (1.0 - eps) * (1.0 - eps);
  return 1.0 / q - 1.0 + (4.0 * k_delta + k_theta * eps) * kappa / (alpha * alpha) / q;
}

HessianBoundReport hessian_bound_sweep(HessianBoundKind kind, int instances, std::uint64_t seed) {
  Rng rng(seed);
  HessianBoundReport rep;
  const double alpha_min = kind == HessianBoundKind::fixed ? 16.5 : 4.7;
  for (int c = 0; c < instances; ++c) {
    const int n = kind == HessianBoundKind::fixed ? uniform_int(rng, 32, 128) : uniform_int(rng, 9, 64);
    // the lower n bounds are the smallest that fit two spikes at alpha_min
    const int r_cap = std::min(8, static_cast<int>(std::floor((n + 1.0) / alpha_min)));
    const int r = uniform_int(rng, 2, r_cap);
    const double alpha_goal = rng.uniform(alpha_min, (n + 1.0) / r);
    const double kappa_goal = rng.uniform(1.0, 8.0);

    SpikeParams truth{sample_amplitudes(r, kappa_goal, rng), sample_separated_locations(n, r, alpha_goal, rng)};
    const PsfWeights psf = PsfWeights::make(n);
    const Observation obs = observe(truth, psf);
    const double alpha = (n + 1.0) * wraparound_separation(truth.locations);
    const double a_max = truth.amplitudes.cwiseAbs().maxCoeff();
    const double a_min = truth.amplitudes.cwiseAbs().minCoeff();
    const double kappa = a_max / a_min;

    const HessianBlocks at_truth = hessian_blocks(truth, obs);
    rep.max_e_at_truth = std::max({rep.max_e_at_truth, at_truth.e1.cwiseAbs().maxCoeff(),
                                   at_truth.e2.cwiseAbs().maxCoeff()});

    const double eps_goal = 0.95 * rng.uniform() * rng.uniform();
    const SpikeParams theta_k = sample_equidistant(truth, n, eps_goal, rng);
    const double eps = weighted_error(theta_k, truth, n);
    const double delta = alpha / (n + 1.0);
    bool hyp = eps < 1.0;
    for (Eigen::Index j = 0; j < r; ++j)
      hyp = hyp && wrap_distance(theta_k.locations[j], truth.locations[j]) <= delta / 4.0;
    if (!hyp) continue;

    Preconditioner p;
    double bound = 0.0;
    if (kind == HessianBoundKind::fixed) {
      const double A = std::max(1.5 * a_max, theta_k.amplitudes.cwiseAbs().maxCoeff());
      p = build_preconditioner(PreconditionerKind::invariant(A), theta_k.amplitudes, n);
      bound = fixed_hessian_bound(eps, a_min, A, kappa, alpha);
    } else {
      p = build_preconditioner(PreconditionerKind::adaptive(), theta_k.amplitudes, n);
      bound = adaptive_hessian_bound(eps, kappa, alpha);
    }
    ++rep.instances;
    for (double u : {0.0, 1.0, rng.uniform(), rng.uniform(), rng.uniform()}) {
      const double dev = scaled_hessian_deviation(segment_point(truth, theta_k, u), truth, p, obs);
      ++rep.checks;
      rep.violations += dev > bound;
      rep.worst_ratio = std::max(rep.worst_ratio, dev / bound);
    }
  }
  return rep;
}

DerivativeCheckReport derivative_check(int instances, std::uint64_t seed, double gradient_step,
                                       double hessian_step) {
  Rng rng(seed);
  DerivativeCheckReport rep;
  for (int c = 0; c < instances; ++c) {
    const int n = uniform_int(rng, 2, 48);
    const int r = uniform_int(rng, 1, std::min(8, n + 1));
    const double alpha = rng.uniform(0.5, std::min(4.0, (n + 1.0) / r));
    SpikeParams truth{sample_amplitudes(r, 3.0, rng), sample_separated_locations(n, r, alpha, rng)};
    const PsfWeights psf = PsfWeights::make(n);
    const Observation obs = observe(truth, psf);
    const SpikeParams theta = sample_equidistant(truth, n, rng.uniform(0.05, 0.5), rng);
    const double s = location_scale(n);
    const Eigen::Index dim = 3 * r;

    Eigen::VectorXd scale = Eigen::VectorXd::Ones(dim);
    scale.tail(r).setConstant(1.0 / s);
    auto shifted = [&](Eigen::Index i, double h) {
      Eigen::VectorXd x = to_real(theta);
      x[i] += h * scale[i];
      return from_real(x);
    };
    auto unwrapped_loss = [&](const SpikeParams& p) {
      SpikeParams q = p;
      for (Eigen::Index j = 0; j < q.size(); ++j) q.locations[j] = wrap_location(q.locations[j]);
      return loss(q, obs);
    };
    auto unwrapped_grad = [&](const SpikeParams& p) {
      SpikeParams q = p;
      for (Eigen::Index j = 0; j < q.size(); ++j) q.locations[j] = wrap_location(q.locations[j]);
      return to_real(gradient(q, obs));
    };

    const Eigen::VectorXd g = unwrapped_grad(theta).cwiseProduct(scale);
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double fd = (unwrapped_loss(shifted(i, gradient_step)) - unwrapped_loss(shifted(i, -gradient_step))) /
                        (2.0 * gradient_step);
      rep.max_gradient_error = std::max(rep.max_gradient_error, std::abs(fd - g[i]) / std::max(std::abs(g[i]), 1.0));
    }

    const Eigen::MatrixXd h = scale.asDiagonal() * real_hessian(hessian_blocks(theta, obs).h) * scale.asDiagonal();
    for (Eigen::Index i = 0; i < dim; ++i) {
      const Eigen::VectorXd col = (unwrapped_grad(shifted(i, hessian_step)) - unwrapped_grad(shifted(i, -hessian_step)))
                                      .cwiseProduct(scale) /
                                  (2.0 * hessian_step);
      for (Eigen::Index k = 0; k < dim; ++k)
        rep.max_hessian_error =
            std::max(rep.max_hessian_error, std::abs(col[k] - h(k, i)) / std::max(std::abs(h(k, i)), 1.0));
    }
    ++rep.instances;
  }
  return rep;
}

}  // namespace spikedeconv
