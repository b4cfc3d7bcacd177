#include "spikedeconv/fejer.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "spikedeconv/errors.hpp"
#include "spikedeconv/signal_model.hpp"

namespace spikedeconv {
namespace {

constexpr double kPi = std::numbers::pi;

void require_order(int order) {
  if (order < 0 || order > 3) throw DomainError("fejer: derivative order must be in 0..3");
}

void require_n(int n) {
  if (n < 2) throw DomainError("fejer: n must be at least 2");
}

// t reduced to [-1/2, 1/2]; exact for the reduction itself.
double reduce(double t) { return std::remainder(t, 1.0); }

// Evaluates on |x| and restores the parity, so f(-t) = +-f(t) holds exactly.
// Odd orders vanish at the half period.
template <class Fn>
double symmetric(double t, int order, Fn&& fn) {
  const double x = reduce(t);
  const double ax = std::abs(x);
  if (order % 2 == 1) {
    if (ax == 0.5) return 0.0;
    const double v = fn(ax);
    return x < 0 ? -v : v;
  }
  return fn(ax);
}

double series_at(double x, int n, int order);
double closed_at(double x, int n, int order);

}  // namespace

double fejer_series(double t, int n, int order) {
  require_n(n);
  require_order(order);
  return symmetric(t, order, [&](double x) { return series_at(x, n, order); });
}

double fejer_closed_form(double t, int n, int order) {
  require_n(n);
  require_order(order);
  return symmetric(t, order, [&](double x) { return closed_at(x, n, order); });
}

namespace {

double series_at(double x, int n, int order) {
  const double m = n + 1.0;
  // k and -k pair up; only the real part survives.
  double acc = (order == 0) ? 1.0 : 0.0;
  for (int k = 1; k <= n; ++k) {
    const double w = 2.0 * (1.0 - k / m);
    const double om = 2.0 * kPi * k;
    const double arg = om * x;
    switch (order) {
      case 0: acc += w * std::cos(arg); break;
      case 1: acc -= w * om * std::sin(arg); break;
      case 2: acc -= w * om * om * std::cos(arg); break;
      default: acc += w * om * om * om * std::sin(arg); break;
    }
  }
  return acc / m;
}

double closed_at(double x, int n, int order) {
  const double m = n + 1.0;
  const double s = std::sin(m * kPi * x);
  const double c = std::cos(m * kPi * x);
  const double sp = std::sin(kPi * x);
  const double cot = std::cos(kPi * x) / sp;
  const double csc2 = 1.0 / (sp * sp);
  const double pi2 = kPi * kPi;
  const double pi3 = pi2 * kPi;
  switch (order) {
    case 0:
      return s * s / (m * m) * csc2;
    case 1:
      return (2.0 * kPi / m * c * s - 2.0 * kPi / (m * m) * s * s * cot) * csc2;
    case 2:
      // The last factor is 3 cot^2 + 1; the printed 2 cot^2 + 1 drops a term.
      return (2.0 * pi2 * (c * c - s * s) - 8.0 * pi2 / m * c * s * cot +
              2.0 * pi2 / (m * m) * s * s * (3.0 * cot * cot + 1.0)) *
             csc2;
    default:
      return (-8.0 * pi3 * m * c * s - 12.0 * pi3 * (c * c - s * s) * cot +
              12.0 * pi3 / m * c * s * (3.0 * cot * cot + 1.0) -
              8.0 * pi3 / (m * m) * s * s * (3.0 * cot * cot * cot + 2.0 * cot)) *
             csc2;
  }
}

}  // namespace

double fejer_series_threshold(int order) {
  require_order(order);
  return order == 3 ? kFejerThirdOrderThreshold : kFejerSingularThreshold;
}

double fejer_eval(double t, int n, int order) {
  require_n(n);
  require_order(order);
  if (std::abs(reduce(t)) < fejer_series_threshold(order)) return fejer_series(t, n, order);
  return fejer_closed_form(t, n, order);
}

double fejer_curvature(int n) { return 2.0 / 3.0 * kPi * kPi * n * (n + 2.0); }

double location_scale(int n) { return std::sqrt(fejer_curvature(n)); }

double BoundConstants::operator[](int order) const {
  switch (order) {
    case 0: return c0;
    case 1: return c1;
    case 2: return c2;
    case 3: return c3;
    default: throw DomainError("bound constants: order must be in 0..3");
  }
}

BoundConstants bound_constants(const BoundParams& p) {
  if (!(p.alpha > 0.0) || !(p.beta >= 0.0) || !std::isfinite(p.alpha))
    throw DomainError("bound_constants: need alpha > 0 and beta >= 0");
  if (p.beta >= p.alpha / 2.0) throw DomainError("bound_constants: need beta < alpha / 2");
  const double d = 1.0 / (p.alpha - 2.0 * p.beta);
  const double pi2 = kPi * kPi;
  BoundConstants k;
  k.c0 = 4.0 / pi2 * d * p.alpha;
  k.c1 = (4.0 / kPi * d + 8.0 / pi2 * d * d) * p.alpha;
  k.c2 = (80.0 / 9.0 * d + 16.0 / kPi * d * d + 64.0 / (3.0 * pi2) * d * d * d) * p.alpha;
  k.c3 = (64.0 * kPi / 3.0 * d + 1488.0 / 27.0 * d * d + 192.0 / kPi * d * d * d +
          192.0 / pi2 * d * d * d * d) *
         p.alpha;
  return k;
}

SummationCheck check_summation_bound(std::span<const double> tau, const Eigen::MatrixXd& u, int n,
                                     int order) {
  require_n(n);
  require_order(order);
  const auto r = static_cast<Eigen::Index>(tau.size());
  if (r < 1) throw DomainError("check_summation_bound: empty location set");
  if (u.rows() != r || u.cols() != r)
    throw DomainError("check_summation_bound: perturbation matrix must be r x r");
  SummationCheck out;
  if (r == 1) {
    out.rhs = std::numeric_limits<double>::infinity();
    return out;
  }
  const double m = n + 1.0;
  const double delta = wraparound_separation(tau);
  double umax = 0.0;
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < r; ++j)
      if (i != j) umax = std::max(umax, std::abs(u(i, j)));
  out.alpha = m * delta;
  out.beta = m * umax;
  if (out.beta >= out.alpha / 2.0)
    throw DomainError("check_summation_bound: perturbation too large for the separation");
  for (Eigen::Index i = 0; i < r; ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < r; ++j)
      if (j != i) row += std::abs(fejer_eval(tau[j] - tau[i] + u(i, j), n, order));
    out.lhs = std::max(out.lhs, row);
  }
  const BoundConstants c = bound_constants({out.alpha, out.beta});
  out.rhs = c[order] * std::pow(m, order) / (out.alpha * out.alpha);
  out.holds = out.lhs <= out.rhs;
  return out;
}

}  // namespace spikedeconv
