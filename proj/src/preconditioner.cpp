#include "spikedeconv/preconditioner.hpp"

#include <cmath>

#include "spikedeconv/errors.hpp"
#include "spikedeconv/fejer.hpp"

namespace spikedeconv {

std::string to_string(PrecondType type) {
  return type == PrecondType::invariant ? "invariant" : "adaptive";
}

PrecondType parse_precond_type(const std::string& name) {
  if (name == "invariant" || name == "fixed") return PrecondType::invariant;
  if (name == "adaptive") return PrecondType::adaptive;
  throw DomainError("unknown preconditioner '" + name + "'");
}

Preconditioner build_preconditioner(const PreconditionerKind& kind,
                                    const Eigen::VectorXcd& current_amplitudes, int n) {
  const Eigen::Index r = current_amplitudes.size();
  if (r < 1) throw DomainError("build_preconditioner: empty amplitude vector");
  const double curv = fejer_curvature(n);
  Preconditioner p{kind, Eigen::VectorXd::Ones(2 * r)};
  if (kind.type == PrecondType::invariant) {
    if (!(kind.A > 0.0) || !std::isfinite(kind.A))
      throw DomainError("build_preconditioner: A must be positive and finite");
    p.diag.tail(r).setConstant(1.0 / (curv * kind.A * kind.A));
    return p;
  }
  for (Eigen::Index j = 0; j < r; ++j) {
    const double mod = std::abs(current_amplitudes[j]);
    if (!(mod > 0.0) || !std::isfinite(mod))
      throw DegenerateIterateError("adaptive preconditioner: amplitude " + std::to_string(j) +
                                   " is zero or not finite");
    p.diag[r + j] = 1.0 / (curv * mod * mod);
  }
  return p;
}

}  // namespace spikedeconv
