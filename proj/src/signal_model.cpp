#include "spikedeconv/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "spikedeconv/errors.hpp"
#include "spikedeconv/fejer.hpp"
#include "spikedeconv/preconditioner.hpp"

namespace spikedeconv {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Column j holds g_k e^{-i 2 pi k tau_j}, row k + n.
Eigen::MatrixXcd atoms(const Eigen::VectorXd& tau, const PsfWeights& psf) {
  const int n = psf.n;
  Eigen::MatrixXcd out(psf.size(), tau.size());
  for (Eigen::Index j = 0; j < tau.size(); ++j)
    for (int k = -n; k <= n; ++k) out(k + n, j) = std::polar(psf.g[k + n], -kTwoPi * k * tau[j]);
  return out;
}

void require_match(const SpikeParams& params, const Observation& obs) {
  params.validate();
  if (obs.psf.g.size() != obs.psf.size() || obs.samples.size() != obs.psf.size())
    throw DomainError("observation length does not match 2n+1");
}

}  // namespace

void SpikeParams::validate() const {
  if (amplitudes.size() != locations.size())
    throw DomainError("SpikeParams: amplitudes and locations differ in length");
  if (amplitudes.size() < 1) throw DomainError("SpikeParams: need at least one spike");
  for (Eigen::Index j = 0; j < locations.size(); ++j)
    if (!(locations[j] >= -0.5 && locations[j] < 0.5))
      throw DomainError("SpikeParams: location " + std::to_string(j) + " not in [-1/2, 1/2)");
}

PsfWeights PsfWeights::make(int n) {
  if (n < 2) throw DomainError("PsfWeights: n must be at least 2");
  PsfWeights p;
  p.n = n;
  p.g.resize(2 * n + 1);
  const double m = n + 1.0;
  for (int k = -n; k <= n; ++k) p.g[k + n] = std::sqrt((1.0 - std::abs(k) / m) / m);
  return p;
}

double wrap_location(double t) {
  double w = std::remainder(t, 1.0);
  if (w >= 0.5) w = -0.5;
  return w;
}

double wrap_distance(double t, double s) { return std::abs(std::remainder(t - s, 1.0)); }

double wraparound_separation(std::span<const double> locations) {
  const std::size_t r = locations.size();
  if (r < 2) throw DomainError("wraparound_separation: needs at least two locations");
  for (double t : locations)
    if (!(t >= -0.5 && t < 0.5)) throw DomainError("wraparound_separation: location not wrapped");
  double best = 1.0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j) best = std::min(best, wrap_distance(locations[i], locations[j]));
  return best;
}

double wraparound_separation(const Eigen::VectorXd& locations) {
  return wraparound_separation(std::span<const double>(locations.data(), locations.size()));
}

Observation observe(const SpikeParams& params, const PsfWeights& psf) {
  params.validate();
  return {atoms(params.locations, psf) * params.amplitudes, psf};
}

Eigen::VectorXcd residual(const SpikeParams& params, const Observation& obs) {
  require_match(params, obs);
  return atoms(params.locations, obs.psf) * params.amplitudes - obs.samples;
}

double loss(const SpikeParams& params, const Observation& obs) {
  return 0.5 * residual(params, obs).squaredNorm();
}

double Gradient::inf_norm() const {
  double m = 0.0;
  if (amplitudes.size() > 0) m = amplitudes.cwiseAbs().maxCoeff();
  if (locations.size() > 0) m = std::max(m, locations.cwiseAbs().maxCoeff());
  return m;
}

ResidualCorrelations residual_correlations(const SpikeParams& params, const Observation& obs) {
  const Eigen::MatrixXcd phi = atoms(params.locations, obs.psf);
  require_match(params, obs);
  const Eigen::VectorXcd res = phi * params.amplitudes - obs.samples;
  const int n = obs.psf.n;
  Eigen::VectorXcd w1(res.size()), w2(res.size());
  for (int k = -n; k <= n; ++k) {
    const double om = kTwoPi * k;
    w1[k + n] = cdouble(0.0, om) * res[k + n];
    w2[k + n] = -om * om * res[k + n];
  }
  ResidualCorrelations c;
  c.c0 = phi.adjoint() * res;
  c.c1 = phi.adjoint() * w1;
  c.c2 = phi.adjoint() * w2;
  return c;
}

Gradient gradient(const SpikeParams& params, const Observation& obs) {
  const ResidualCorrelations c = residual_correlations(params, obs);
  Gradient g;
  g.amplitudes = c.c0;
  g.locations = (params.amplitudes.conjugate().cwiseProduct(c.c1)).real();
  return g;
}

Gradient gradient_kernel_form(const SpikeParams& params, const SpikeParams& truth, int n) {
  params.validate();
  truth.validate();
  const Eigen::Index r = params.size();
  Gradient g{Eigen::VectorXcd::Zero(r), Eigen::VectorXd::Zero(r)};
  for (Eigen::Index j = 0; j < r; ++j) {
    cdouble sa = 0.0, st = 0.0;
    for (Eigen::Index l = 0; l < r; ++l) {
      const double d = params.locations[j] - params.locations[l];
      sa += params.amplitudes[l] * fejer_eval(d, n, 0);
      st += params.amplitudes[l] * fejer_eval(d, n, 1);
    }
    for (Eigen::Index l = 0; l < truth.size(); ++l) {
      const double d = params.locations[j] - truth.locations[l];
      sa -= truth.amplitudes[l] * fejer_eval(d, n, 0);
      st -= truth.amplitudes[l] * fejer_eval(d, n, 1);
    }
    g.amplitudes[j] = sa;
    g.locations[j] = (std::conj(params.amplitudes[j]) * st).real();
  }
  return g;
}

HessianBlocks hessian_blocks(const SpikeParams& params, const Observation& obs) {
  const ResidualCorrelations c = residual_correlations(params, obs);
  const int n = obs.psf.n;
  const Eigen::Index r = params.size();
  const double s = location_scale(n);
  const double f2 = -fejer_curvature(n);

  HessianBlocks hb;
  hb.d0.resize(r, r);
  hb.d1.resize(r, r);
  hb.d2.resize(r, r);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < r; ++j) {
      const double d = params.locations[i] - params.locations[j];
      hb.d0(i, j) = fejer_eval(d, n, 0);
      hb.d1(i, j) = -fejer_eval(d, n, 1) / s;
      hb.d2(i, j) = fejer_eval(d, n, 2) / f2;
    }
  for (Eigen::Index i = 0; i < r; ++i) {
    hb.d0(i, i) = 1.0;
    hb.d1(i, i) = 0.0;
    hb.d2(i, i) = 1.0;
  }

  Eigen::MatrixXcd dm(2 * r, 2 * r);
  dm << hb.d0.cast<cdouble>(), hb.d1.cast<cdouble>(), hb.d1.transpose().cast<cdouble>(),
      hb.d2.cast<cdouble>();
  Eigen::VectorXcd scale(2 * r);
  scale.head(r).setOnes();
  scale.tail(r) = s * params.amplitudes;
  hb.g_matrix = scale.conjugate().asDiagonal() * dm * scale.asDiagonal();

  // The location-location entry pairs conj(a_j) with the second-derivative
  // correlation; that is what the real Hessian requires (same modulus as a_j).
  hb.e1 = c.c1.asDiagonal();
  hb.e2 = params.amplitudes.conjugate().cwiseProduct(c.c2).asDiagonal();

  hb.h = hb.g_matrix;
  hb.h.topRightCorner(r, r) += hb.e1;
  hb.h.bottomLeftCorner(r, r) += hb.e1.adjoint();
  hb.h.bottomRightCorner(r, r) += hb.e2;
  return hb;
}

Eigen::VectorXd to_real(const SpikeParams& params) {
  const Eigen::Index r = params.size();
  Eigen::VectorXd x(3 * r);
  x << params.amplitudes.real(), params.amplitudes.imag(), params.locations;
  return x;
}

SpikeParams from_real(const Eigen::VectorXd& x) {
  if (x.size() % 3 != 0 || x.size() == 0) throw DomainError("from_real: length must be 3r");
  const Eigen::Index r = x.size() / 3;
  SpikeParams p;
  p.amplitudes.resize(r);
  for (Eigen::Index j = 0; j < r; ++j) p.amplitudes[j] = cdouble(x[j], x[r + j]);
  p.locations = x.tail(r);
  return p;
}

Eigen::VectorXd to_real(const Gradient& grad) {
  const Eigen::Index r = grad.amplitudes.size();
  Eigen::VectorXd x(3 * r);
  x << grad.amplitudes.real(), grad.amplitudes.imag(), grad.locations;
  return x;
}

Eigen::MatrixXd real_hessian(const Eigen::MatrixXcd& h) {
  if (h.rows() != h.cols() || h.rows() % 2 != 0) throw DomainError("real_hessian: need 2r x 2r");
  const Eigen::Index r = h.rows() / 2;
  const Eigen::MatrixXcd haa = h.topLeftCorner(r, r);
  const Eigen::MatrixXcd hat = h.topRightCorner(r, r);
  const Eigen::MatrixXcd hta = h.bottomLeftCorner(r, r);
  const Eigen::MatrixXcd htt = h.bottomRightCorner(r, r);
  Eigen::MatrixXd out(3 * r, 3 * r);
  out.block(0, 0, r, r) = haa.real();
  out.block(0, r, r, r) = -haa.imag();
  out.block(r, 0, r, r) = haa.imag();
  out.block(r, r, r, r) = haa.real();
  out.block(0, 2 * r, r, r) = hat.real();
  out.block(r, 2 * r, r, r) = hat.imag();
  out.block(2 * r, 0, r, r) = hta.real();
  out.block(2 * r, r, r, r) = -hta.imag();
  out.block(2 * r, 2 * r, r, r) = htt.real();
  return out;
}

double scaled_hessian_deviation(const SpikeParams& params, const SpikeParams& truth,
                                const Preconditioner& precond, const Observation& obs) {
  truth.validate();
  const Eigen::Index r = params.size();
  if (truth.size() != r || precond.diag.size() != 2 * r)
    throw DomainError("scaled_hessian_deviation: size mismatch");
  Eigen::VectorXd weight(2 * r);  // |S| entries
  const double s = location_scale(obs.psf.n);
  for (Eigen::Index j = 0; j < r; ++j) {
    const double mod = std::abs(truth.amplitudes[j]);
    if (!(mod > 0.0)) throw DomainError("scaled_hessian_deviation: zero truth amplitude");
    weight[j] = 1.0 / mod;
    weight[r + j] = s;
  }
  const Eigen::MatrixXcd h = hessian_blocks(params, obs).h;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < 2 * r; ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < 2 * r; ++j) {
      // Diagonal phases of S cancel, so only moduli matter off the diagonal.
      const cdouble v = precond.diag[i] * h(i, j);
      row += (i == j) ? std::abs(v - 1.0) : weight[i] * std::abs(v) / weight[j];
    }
    worst = std::max(worst, row);
  }
  return worst;
}

}  // namespace spikedeconv
