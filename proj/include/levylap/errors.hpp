#pragma once

#include <stdexcept>
#include <string>

namespace levylap {

// Input lies outside the domain of an operation (chart domain, t outside [0, 1], r = 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Floating-point failure: NaN/Inf, singular metric, integrator breakdown.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated a documented precondition (non-antisymmetric input, open loop, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Holonomy classifier found an algebra dimension that no connected subgroup of SO(3) has.
class ClassificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace levylap
