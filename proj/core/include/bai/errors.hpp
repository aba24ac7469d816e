#pragma once

#include <stdexcept>
#include <string>

namespace bai {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The best arm is not unique (means tied within tolerance).
class TieError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A bracketed search could not find a sign change.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Statistics are not yet defined (count < 2 or zero variance).
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An optimization did not certify its optimality conditions.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bai
