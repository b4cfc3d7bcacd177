#pragma once

#include <stdexcept>

namespace spikedeconv {

// Precondition violated by the caller (bad order, bad sizes, infeasible bounds...).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Rank-deficient solves, singular information matrices, non-finite values.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An adaptive iterate hit a zero amplitude.
struct DegenerateIterateError : NumericalError {
  using NumericalError::NumericalError;
};

// Instance generation could not meet its separation constraint.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace spikedeconv
