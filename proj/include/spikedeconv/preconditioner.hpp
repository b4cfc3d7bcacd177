#pragma once

#include <Eigen/Dense>
#include <string>

namespace spikedeconv {

enum class PrecondType { invariant, adaptive };

struct PreconditionerKind {
  PrecondType type = PrecondType::adaptive;
  double A = 0.0;  // only used by the invariant kind

  static PreconditionerKind invariant(double A) { return {PrecondType::invariant, A}; }
  static PreconditionerKind adaptive() { return {PrecondType::adaptive, 0.0}; }
};

std::string to_string(PrecondType type);
PrecondType parse_precond_type(const std::string& name);

// diag = [1_r; 1/(s^2 A^2)] (invariant) or [1_r; 1/(s^2 |a_j|^2)] (adaptive).
struct Preconditioner {
  PreconditionerKind kind;
  Eigen::VectorXd diag;

  Eigen::Index r() const { return diag.size() / 2; }
};

// Throws DomainError for A <= 0 and DegenerateIterateError when an adaptive
// amplitude is zero.
Preconditioner build_preconditioner(const PreconditionerKind& kind,
                                    const Eigen::VectorXcd& current_amplitudes, int n);

}  // namespace spikedeconv
