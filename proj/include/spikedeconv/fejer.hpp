#pragma once

#include <Eigen/Dense>
#include <span>

namespace spikedeconv {

// Below these distances to the nearest integer fejer_eval switches to the
// series. The third-derivative closed form cancels badly up to about 3e-3.
inline constexpr double kFejerSingularThreshold = 1e-4;
inline constexpr double kFejerThirdOrderThreshold = 1e-2;

double fejer_series_threshold(int order);

// Normalized Fejer kernel F(t) = sin^2((n+1)pi t) / ((n+1)^2 sin^2(pi t)) and
// its derivatives up to order 3. Periodic with period 1, F(0) = 1.
double fejer_eval(double t, int n, int order);

// Closed trigonometric form. Loses accuracy (and is 0/0) near integers.
double fejer_closed_form(double t, int n, int order);

// Term-by-term differentiated trigonometric polynomial
//   sum_k (i 2 pi k)^order (1 - |k|/(n+1)) e^{i 2 pi k t} / (n+1).
double fejer_series(double t, int n, int order);

// -F''(0) = (2/3) pi^2 n (n+2).
double fejer_curvature(int n);

// sqrt(-F''(0)), the scale that makes location errors comparable to
// relative amplitude errors.
double location_scale(int n);

struct BoundParams {
  double alpha = 0.0;  // (n+1) * separation
  double beta = 0.0;   // (n+1) * max |perturbation|
};

struct BoundConstants {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;
  double operator[](int order) const;
};

// Constants of the kernel summation bound
//   max_i sum_{j != i} |F^(l)(tau_j - tau_i + u_ij)| <= C_l (n+1)^l ((n+1) Delta)^-2.
// C3 uses 64 pi / 3 as its leading coefficient (see README).
BoundConstants bound_constants(const BoundParams& params);

struct SummationCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
  double alpha = 0.0;
  double beta = 0.0;
};

// Evaluates both sides of the summation bound for the given locations.
// u(i, j) perturbs the pair (i, j); the diagonal is ignored. alpha and beta
// are taken as tight as the inputs allow. A single location gives lhs = 0
// and rhs = +inf.
SummationCheck check_summation_bound(std::span<const double> tau, const Eigen::MatrixXd& u, int n,
                                     int order);

}  // namespace spikedeconv
