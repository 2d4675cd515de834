#pragma once

#include <stdexcept>
#include <string>

namespace en {

/// Argument outside the documented domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A quadrature or iterative solver ran out of its evaluation/iteration budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integrand returned NaN or infinity at an interior node.
class NonFiniteIntegrand : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sampled decay of an integrand contradicts the declared decay hint.
class TailBoundUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two independent evaluation routes disagree beyond their error estimates.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Witness search exhausted its range without a certified value.
class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sparse factorization or linear solve failed.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace en
