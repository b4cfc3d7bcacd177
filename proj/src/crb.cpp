#include "spikedeconv/crb.hpp"

#include <cmath>
#include <numbers>

#include "spikedeconv/errors.hpp"
#include "spikedeconv/fejer.hpp"

namespace spikedeconv {

CrbReport crb(const SpikeParams& truth, const PsfWeights& psf, double noise_variance) {
  truth.validate();
  if (!(noise_variance > 0.0) || !std::isfinite(noise_variance))
    throw DomainError("crb: noise variance must be positive and finite");
  const int n = psf.n;
  const Eigen::Index r = truth.size();
  Eigen::MatrixXcd jac(psf.size(), 3 * r);
  for (Eigen::Index j = 0; j < r; ++j)
    for (int k = -n; k <= n; ++k) {
      const cdouble atom = std::polar(psf.g[k + n], -2.0 * std::numbers::pi * k * truth.locations[j]);
      jac(k + n, j) = atom;
      jac(k + n, r + j) = cdouble(0.0, 1.0) * atom;
      jac(k + n, 2 * r + j) = truth.amplitudes[j] * cdouble(0.0, -2.0 * std::numbers::pi * k) * atom;
    }
  CrbReport rep;
  rep.fisher = (2.0 / noise_variance) * (jac.adjoint() * jac).real();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(rep.fisher);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 1e-14 * ldlt.vectorD().maxCoeff())
    throw NumericalError("crb: Fisher information is singular");
  const Eigen::MatrixXd inv = ldlt.solve(Eigen::MatrixXd::Identity(3 * r, 3 * r));
  rep.bounds = inv.diagonal();

  const double s = location_scale(n);
  rep.amplitude_benchmark.resize(r);
  rep.location_benchmark.resize(r);
  for (Eigen::Index j = 0; j < r; ++j) {
    rep.amplitude_benchmark[j] = std::sqrt(rep.bounds[j] + rep.bounds[r + j]) / std::abs(truth.amplitudes[j]);
    rep.location_benchmark[j] = s * std::sqrt(rep.bounds[2 * r + j]);
  }
  rep.weighted_benchmark =
      std::max(rep.amplitude_benchmark.maxCoeff(), rep.location_benchmark.maxCoeff());
  return rep;
}

}  // namespace spikedeconv
