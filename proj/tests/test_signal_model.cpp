#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "spikedeconv/errors.hpp"
#include "spikedeconv/fejer.hpp"
#include "spikedeconv/preconditioner.hpp"
#include "spikedeconv/rng.hpp"
#include "spikedeconv/signal_model.hpp"
#include "spikedeconv/verification.hpp"

using namespace spikedeconv;
using oracle::pi;

namespace {

SpikeParams random_params(int n, int r, double alpha, double kappa, std::uint64_t seed) {
  Rng rng(seed);
  SpikeParams p;
  p.locations = sample_separated_locations(n, r, alpha, rng);
  p.amplitudes = sample_amplitudes(r, kappa, rng);
  return p;
}

// Nearby point: relative amplitude and scaled location perturbations of size eps.
SpikeParams perturb(const SpikeParams& p, int n, double eps, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double s = std::sqrt(2.0 / 3.0 * pi * pi * n * (n + 2.0));
  SpikeParams q = p;
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    q.amplitudes[j] *= cdouble(1.0 + eps * u(gen), eps * u(gen));
    q.locations[j] = wrap_location(p.locations[j] + eps * u(gen) / s);
  }
  return q;
}

double scale(int n) { return std::sqrt(2.0 / 3.0 * pi * pi * n * (n + 2.0)); }

}  // namespace

TEST_CASE("wrap-around separation") {
  CHECK(wraparound_separation(std::vector<double>{0.0, -0.5}) == doctest::Approx(0.5));
  CHECK(wraparound_separation(std::vector<double>{-0.45, 0.45}) == doctest::Approx(0.1));
  CHECK_THROWS_AS(wraparound_separation(std::vector<double>{0.1}), DomainError);
  CHECK_THROWS_AS(wraparound_separation(std::vector<double>{0.1, 0.7}), DomainError);

  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> t(6);
    for (auto& x : t) x = u(gen);
    CHECK(wraparound_separation(t) == doctest::Approx(oracle::separation(t)).epsilon(1e-14));
  }
}

TEST_CASE("location wrapping") {
  CHECK(wrap_location(0.5) == -0.5);
  CHECK(wrap_location(-0.5) == -0.5);
  CHECK(wrap_location(1.25) == doctest::Approx(0.25));
  CHECK(wrap_location(-0.75) == doctest::Approx(0.25));
  CHECK(wrap_distance(0.45, -0.45) == doctest::Approx(0.1));
}

TEST_CASE("psf weights have unit norm") {
  for (int n : {2, 8, 32}) {
    const auto psf = PsfWeights::make(n);
    CHECK(psf.g.size() == 2 * n + 1);
    CHECK(psf.g.squaredNorm() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("observation of simple measures") {
  const int n = 10;
  const auto psf = PsfWeights::make(n);
  SpikeParams one{Eigen::VectorXcd::Ones(1), Eigen::VectorXd::Zero(1)};
  const auto x = observe(one, psf);
  CHECK((x.samples - psf.g.cast<cdouble>()).norm() < 1e-15);

  SpikeParams cancel{Eigen::VectorXcd(2), Eigen::VectorXd::Constant(2, 0.3)};
  cancel.amplitudes << 1.0, -1.0;
  CHECK(observe(cancel, psf).samples.norm() < 1e-14);
}

TEST_CASE("observation matches the direct sum and is linear in amplitudes") {
  const int n = 16;
  const auto psf = PsfWeights::make(n);
  const auto p = random_params(n, 4, 2.0, 5.0, 1);
  const auto x = observe(p, psf);
  CHECK((x.samples - oracle::observe(p.amplitudes, p.locations, n)).norm() < 1e-12);

  SpikeParams q = p;
  q.amplitudes = cdouble(2.0, -1.0) * p.amplitudes;
  CHECK((observe(q, psf).samples - cdouble(2.0, -1.0) * x.samples).norm() < 1e-12);
}

TEST_CASE("loss examples") {
  const int n = 12;
  const auto psf = PsfWeights::make(n);
  SpikeParams truth{Eigen::VectorXcd::Ones(1), Eigen::VectorXd::Zero(1)};
  const auto obs = observe(truth, psf);
  CHECK(loss(truth, obs) < 1e-20);
  SpikeParams two = truth;
  two.amplitudes[0] = 2.0;
  CHECK(loss(two, obs) == doctest::Approx(0.5).epsilon(1e-14));

  const auto t6 = random_params(n, 3, 2.0, 3.0, 2);
  const auto p6 = perturb(t6, n, 0.2, 9);
  const auto obs6 = observe(t6, psf);
  CHECK(loss(p6, obs6) ==
        doctest::Approx(oracle::loss(p6.amplitudes, p6.locations, obs6.samples, n)).epsilon(1e-12));
}

TEST_CASE("dimension mismatch is a domain error") {
  const auto psf = PsfWeights::make(8);
  SpikeParams good{Eigen::VectorXcd::Ones(2), Eigen::VectorXd::Zero(2)};
  good.locations[1] = 0.25;
  const auto obs = observe(good, psf);
  SpikeParams bad{Eigen::VectorXcd::Ones(2), Eigen::VectorXd::Zero(3)};
  CHECK_THROWS_AS(loss(bad, obs), DomainError);
  CHECK_THROWS_AS(gradient(bad, obs), DomainError);
  CHECK_THROWS_AS(hessian_blocks(bad, obs), DomainError);
  Observation short_obs = obs;
  short_obs.samples.conservativeResize(5);
  CHECK_THROWS_AS(loss(good, short_obs), DomainError);
}

TEST_CASE("gradient vanishes at the truth") {
  const int n = 32;
  const auto truth = random_params(n, 6, 2.0, 6.0, 4);
  const auto obs = observe(truth, PsfWeights::make(n));
  const auto g = gradient(truth, obs);
  CHECK(g.amplitudes.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(g.locations.cwiseAbs().maxCoeff() < 1e-12 * scale(n) * 6.0);
}

TEST_CASE("single spike amplitude gradient is the amplitude error") {
  const int n = 9;
  SpikeParams truth{Eigen::VectorXcd::Constant(1, 1.5), Eigen::VectorXd::Constant(1, 0.1)};
  SpikeParams p = truth;
  p.amplitudes[0] = 2.25;
  const auto g = gradient(p, observe(truth, PsfWeights::make(n)));
  CHECK(std::abs(g.amplitudes[0] - cdouble(0.75, 0.0)) < 1e-14);
  CHECK(std::abs(g.locations[0]) < 1e-12);
}

TEST_CASE("gradient matches central differences of the loss") {
  // Scaled coordinates (Re a, Im a, s tau) keep the three blocks comparable.
  double worst = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    const int n = 8 + 2 * inst;
    const int r = 1 + inst % 5;
    const double s = scale(n);
    const auto truth = random_params(n, r, 1.0, 4.0, 100 + inst);
    const auto p = perturb(truth, n, 0.3, 200 + inst);
    const auto obs = observe(truth, PsfWeights::make(n));

    Eigen::VectorXd z(3 * r);
    for (int j = 0; j < r; ++j) {
      z[j] = p.amplitudes[j].real();
      z[r + j] = p.amplitudes[j].imag();
      z[2 * r + j] = s * p.locations[j];
    }
    auto f = [&](const Eigen::VectorXd& w) {
      Eigen::VectorXd y = w;
      y.tail(r) /= s;
      return oracle::loss_real(y, obs.samples, n);
    };
    const Eigen::VectorXd fd = oracle::fd_gradient(f, z, Eigen::VectorXd::Constant(3 * r, 1e-6));
    const auto g = gradient(p, obs);
    for (int j = 0; j < r; ++j) {
      const double an[3] = {g.amplitudes[j].real(), g.amplitudes[j].imag(), g.locations[j] / s};
      for (int c = 0; c < 3; ++c) {
        const double err = std::abs(fd[c * r + j] - an[c]) / std::max(std::abs(an[c]), 1.0);
        worst = std::max(worst, err);
      }
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("single-spike Hessian in real coordinates matches the explicit formula") {
  // For r = 1 the loss is |a|^2/2 - Re(conj(a) q(tau)) + const with
  // q(tau) = sum_k g_k e^{i 2 pi k tau} x_k, so every second derivative is
  // a derivative of q.
  const int n = 7;
  const auto psf = PsfWeights::make(n);
  SpikeParams truth{Eigen::VectorXcd::Constant(1, cdouble(0.8, 0.6)), Eigen::VectorXd::Constant(1, 0.05)};
  SpikeParams p{Eigen::VectorXcd::Constant(1, cdouble(1.1, -0.3)), Eigen::VectorXd::Constant(1, 0.09)};
  const auto obs = observe(truth, psf);

  cdouble q1 = 0.0, q2 = 0.0;
  for (int k = -n; k <= n; ++k) {
    const cdouble e = psf.g[k + n] * std::exp(cdouble(0.0, 2.0 * pi * k * p.locations[0])) * obs.samples[k + n];
    const cdouble w(0.0, 2.0 * pi * k);
    q1 += w * e;
    q2 += w * w * e;
  }
  const cdouble a = p.amplitudes[0];
  Eigen::Matrix3d expected;
  expected << 1.0, 0.0, -q1.real(),
              0.0, 1.0, -q1.imag(),
              -q1.real(), -q1.imag(), -(std::conj(a) * q2).real();
  const Eigen::MatrixXd got = real_hessian(hessian_blocks(p, obs).h);
  CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-10 * expected.cwiseAbs().maxCoeff());
}

TEST_CASE("Hessian matches the finite-difference Jacobian of the gradient") {
  double worst = 0.0, asym = 0.0;
  for (int inst = 0; inst < 12; ++inst) {
    const int n = 10 + 3 * inst;
    const int r = 2 + inst % 4;
    const double s = scale(n);
    const auto truth = random_params(n, r, 1.5, 5.0, 300 + inst);
    const auto p = perturb(truth, n, 0.25, 400 + inst);
    const auto obs = observe(truth, PsfWeights::make(n));

    Eigen::VectorXd z = to_real(p);
    z.tail(r) *= s;
    auto grad_map = [&](const Eigen::VectorXd& w) {
      Eigen::VectorXd y = w;
      y.tail(r) /= s;
      Eigen::VectorXd g = to_real(gradient(from_real(y), obs));
      g.tail(r) /= s;
      return g;
    };
    const Eigen::MatrixXd fd = oracle::fd_jacobian(grad_map, z, Eigen::VectorXd::Constant(3 * r, 1e-5));
    Eigen::MatrixXd an = real_hessian(hessian_blocks(p, obs).h);
    an.bottomRows(r) /= s;
    an.rightCols(r) /= s;
    asym = std::max(asym, (an - an.transpose()).cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < an.rows(); ++i)
      for (Eigen::Index j = 0; j < an.cols(); ++j)
        worst = std::max(worst, std::abs(fd(i, j) - an(i, j)) / std::max(std::abs(an(i, j)), 1.0));
  }
  CHECK(worst < 1e-5);
  CHECK(asym < 1e-9);
}

TEST_CASE("Hessian structure at and away from the truth") {
  const int n = 32;
  const auto truth = random_params(n, 6, 2.0, 6.0, 5);
  const auto obs = observe(truth, PsfWeights::make(n));
  const auto at = hessian_blocks(truth, obs);
  CHECK(at.e1.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(at.e2.cwiseAbs().maxCoeff() < 1e-12 * scale(n) * scale(n));
  CHECK(loss(truth, obs) < 1e-24);

  const auto away = hessian_blocks(perturb(truth, n, 0.4, 6), obs);
  for (const auto* hb : {&at, &away}) {
    CHECK((hb->d0.diagonal().array() - 1.0).abs().maxCoeff() < 1e-12);
    CHECK((hb->d2.diagonal().array() - 1.0).abs().maxCoeff() < 1e-12);
    CHECK(hb->d1.diagonal().cwiseAbs().maxCoeff() < 1e-12);
    CHECK((hb->d0 - hb->d0.transpose()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((hb->d1 + hb->d1.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK(away.e1.cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("kernel-sum and residual gradients agree on noiseless data") {
  for (int inst = 0; inst < 10; ++inst) {
    const int n = 16 + 4 * inst;
    const auto truth = random_params(n, 4, 2.0, 6.0, 500 + inst);
    const auto p = perturb(truth, n, 0.3, 600 + inst);
    const auto obs = observe(truth, PsfWeights::make(n));
    const auto g1 = gradient(p, obs);
    const auto g2 = gradient_kernel_form(p, truth, n);
    CHECK((g1.amplitudes - g2.amplitudes).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((g1.locations - g2.locations).cwiseAbs().maxCoeff() < 1e-10 * scale(n));
  }
}

TEST_CASE("scaled Hessian deviation at the truth") {
  SUBCASE("single spike with adaptive scaling is exact") {
    const int n = 20;
    SpikeParams truth{Eigen::VectorXcd::Constant(1, cdouble(-1.2, 2.0)), Eigen::VectorXd::Constant(1, 0.3)};
    const auto obs = observe(truth, PsfWeights::make(n));
    const auto P = build_preconditioner(PreconditionerKind::adaptive(), truth.amplitudes, n);
    CHECK(scaled_hessian_deviation(truth, truth, P, obs) < 1e-10);
  }
  SUBCASE("six separated spikes stay below the adaptive constant") {
    const int n = 128;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const double alpha = 15.0;
      const auto truth = random_params(n, 6, alpha, 6.0, 700 + seed);
      const auto obs = observe(truth, PsfWeights::make(n));
      const auto P = build_preconditioner(PreconditionerKind::adaptive(), truth.amplitudes, n);
      const double kappa = truth.amplitudes.cwiseAbs().maxCoeff() / truth.amplitudes.cwiseAbs().minCoeff();
      const double sep = (n + 1) * wraparound_separation(truth.locations);
      CHECK(scaled_hessian_deviation(truth, truth, P, obs) <= 4.0 * 2.32 * kappa / (sep * sep));
    }
  }
  SUBCASE("zero truth amplitude is rejected") {
    SpikeParams truth{Eigen::VectorXcd::Zero(1), Eigen::VectorXd::Zero(1)};
    SpikeParams p{Eigen::VectorXcd::Ones(1), Eigen::VectorXd::Zero(1)};
    const auto obs = observe(p, PsfWeights::make(4));
    const auto P = build_preconditioner(PreconditionerKind::adaptive(), p.amplitudes, 4);
    CHECK_THROWS_AS(scaled_hessian_deviation(p, truth, P, obs), DomainError);
  }
}

TEST_CASE("uniform Hessian bounds hold on small random sweeps") {
  for (auto kind : {HessianBoundKind::fixed, HessianBoundKind::adaptive}) {
    const auto rep = hessian_bound_sweep(kind, 8, 17);
    CHECK(rep.instances == 8);
    CHECK(rep.checks > 0);
    CHECK(rep.violations == 0);
    CHECK(rep.max_e_at_truth < 1e-12);
  }
}
