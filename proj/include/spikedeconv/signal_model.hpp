#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>

namespace spikedeconv {

using cdouble = std::complex<double>;

struct Preconditioner;

// theta = [a; tau]: r complex amplitudes and r locations on the torus.
struct SpikeParams {
  Eigen::VectorXcd amplitudes;
  Eigen::VectorXd locations;

  Eigen::Index size() const { return amplitudes.size(); }
  // Throws DomainError unless sizes match, r >= 1 and locations are wrapped.
  void validate() const;
};

// g_k = sqrt((1 - |k|/(n+1)) / (n+1)), stored at index k + n for k = -n..n.
struct PsfWeights {
  int n = 0;
  Eigen::VectorXd g;

  static PsfWeights make(int n);
  int size() const { return 2 * n + 1; }
};

struct Observation {
  Eigen::VectorXcd samples;
  PsfWeights psf;
};

// Canonical representative in [-1/2, 1/2).
double wrap_location(double t);

// |t - s| measured around the unit torus, in [0, 1/2].
double wrap_distance(double t, double s);

// Minimal wrap-around distance over all pairs. Needs r >= 2 and wrapped locations.
double wraparound_separation(std::span<const double> locations);
double wraparound_separation(const Eigen::VectorXd& locations);

// samples_k = g_k sum_l a_l e^{-i 2 pi k tau_l}, k = -n..n.
Observation observe(const SpikeParams& params, const PsfWeights& psf);

// Phi(mu(theta)) - x.
Eigen::VectorXcd residual(const SpikeParams& params, const Observation& obs);

double loss(const SpikeParams& params, const Observation& obs);

// grad_a_j = <Phi delta_{tau_j}, residual> equals dL/dRe a_j + i dL/dIm a_j.
// grad_tau_j = Re(conj(a_j) <Phi delta'_{tau_j}, residual>).
struct Gradient {
  Eigen::VectorXcd amplitudes;
  Eigen::VectorXd locations;

  double inf_norm() const;
};

Gradient gradient(const SpikeParams& params, const Observation& obs);

// Kernel-sum form of the gradient for noiseless data generated by truth:
// grad_a_j = sum_l a_l F(tau_j - tau_l) - sum_l a*_l F(tau_j - tau*_l).
Gradient gradient_kernel_form(const SpikeParams& params, const SpikeParams& truth, int n);

// Correlations of the residual with the atom and its first two location
// derivatives, c_m(j) = sum_k (i 2 pi k)^m g_k e^{i 2 pi k tau_j} residual_k.
struct ResidualCorrelations {
  Eigen::VectorXcd c0, c1, c2;
};

ResidualCorrelations residual_correlations(const SpikeParams& params, const Observation& obs);

// H = G + E with G = diag([1; s a])^H D diag([1; s a]), s = sqrt(-F''(0)),
// D = [[D0, D1], [D1^T, D2]] and E = [[0, E1], [E1^H, E2]].
struct HessianBlocks {
  Eigen::MatrixXd d0, d1, d2;
  Eigen::MatrixXcd g_matrix;
  Eigen::MatrixXcd e1, e2;  // diagonal
  Eigen::MatrixXcd h;
};

HessianBlocks hessian_blocks(const SpikeParams& params, const Observation& obs);

// Real coordinates ordered (Re a_1..Re a_r, Im a_1..Im a_r, tau_1..tau_r).
Eigen::VectorXd to_real(const SpikeParams& params);
SpikeParams from_real(const Eigen::VectorXd& x);  // locations are not wrapped
Eigen::VectorXd to_real(const Gradient& grad);

// Maps the complex 2r x 2r Hessian onto the 3r x 3r Hessian of the loss in
// the real coordinates above:
//   [Re a, Re a] = Re Haa   [Re a, Im a] = -Im Haa   [*, tau] = Re/Im Hat
//   [Im a, Re a] = Im Haa   [Im a, Im a] =  Re Haa   [tau, Re a] = Re Hta
//   [tau, Im a] = -Im Hta   [tau, tau] = Re Htt
Eigen::MatrixXd real_hessian(const Eigen::MatrixXcd& h);

// ||S P H(params) S^-1 - I||_inf with S = diag([1/a*; s 1]), as a max
// absolute row sum over complex moduli.
double scaled_hessian_deviation(const SpikeParams& params, const SpikeParams& truth,
                                const Preconditioner& precond, const Observation& obs);

}  // namespace spikedeconv
