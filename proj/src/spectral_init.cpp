#include "spikedeconv/spectral_init.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "spikedeconv/errors.hpp"

namespace spikedeconv {

Eigen::MatrixXcd grid_dictionary(const PsfWeights& psf) {
  const int n = psf.n;
  const int N = psf.size();
  Eigen::MatrixXcd dict(N, N);
  for (int k = -n; k <= n; ++k)
    for (int q = -n; q <= n; ++q)
      dict(q + n, k + n) =
          std::polar(psf.g[q + n], -2.0 * std::numbers::pi * static_cast<double>(q) * k / N);
  return dict;
}

InitResult omp_init(const Observation& obs, int r) {
  const int n = obs.psf.n;
  const int N = obs.psf.size();
  if (obs.samples.size() != N) throw DomainError("omp_init: observation length mismatch");
  if (r < 1 || r > N) throw DomainError("omp_init: need 1 <= r <= N");

  const Eigen::MatrixXcd dict = grid_dictionary(obs.psf);
  const Eigen::VectorXd norms = dict.colwise().norm();
  std::vector<int> cols;  // column indices, selection order
  std::vector<bool> used(N, false);
  Eigen::VectorXcd res = obs.samples;
  Eigen::VectorXcd coef;
  InitResult out;

  for (int round = 0; round < r; ++round) {
    const Eigen::VectorXcd corr = dict.adjoint() * res;
    int best = -1;
    double best_val = -1.0;
    for (int c = 0; c < N; ++c) {
      if (used[c] || !(norms[c] > 0.0)) continue;
      const double v = std::abs(corr[c]) / norms[c];
      if (v > best_val) {
        best_val = v;
        best = c;
      }
    }
    if (best < 0) throw NumericalError("omp_init: no admissible atom left");
    used[best] = true;
    cols.push_back(best);

    Eigen::MatrixXcd sub(N, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) sub.col(static_cast<Eigen::Index>(i)) = dict.col(cols[i]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(sub);
    if (qr.rank() < sub.cols()) throw NumericalError("omp_init: rank-deficient support");
    coef = qr.solve(obs.samples);
    res = obs.samples - sub * coef;
    out.residual_norms.push_back(res.norm());
  }

  std::vector<std::size_t> order(cols.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cols[a] < cols[b]; });
  out.params0.amplitudes.resize(r);
  out.params0.locations.resize(r);
  for (int i = 0; i < r; ++i) {
    const int k = cols[order[i]] - n;
    out.support.push_back(k);
    out.params0.locations[i] = wrap_location(static_cast<double>(k) / N);
    out.params0.amplitudes[i] = coef[static_cast<Eigen::Index>(order[i])];
  }
  return out;
}

std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw DomainError("min_cost_assignment: cost matrix must be square");
  // Shortest augmenting path with potentials, 1-based with a dummy column 0.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> done(n + 1, false);
    do {
      done[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (done[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (done[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> assignment(n, -1);
  for (int j = 1; j <= n; ++j) assignment[p[j] - 1] = j - 1;
  return assignment;
}

SpikeParams align_to_truth(const SpikeParams& estimate, const SpikeParams& truth) {
  const Eigen::Index r = truth.size();
  if (estimate.size() != r) throw DomainError("align_to_truth: size mismatch");
  Eigen::MatrixXd cost(r, r);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < r; ++j) cost(i, j) = wrap_distance(truth.locations[i], estimate.locations[j]);
  const std::vector<int> a = min_cost_assignment(cost);
  SpikeParams out;
  out.amplitudes.resize(r);
  out.locations.resize(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    out.amplitudes[i] = estimate.amplitudes[a[i]];
    out.locations[i] = estimate.locations[a[i]];
  }
  return out;
}

}  // namespace spikedeconv
