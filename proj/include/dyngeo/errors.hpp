#pragma once

#include <stdexcept>
#include <string>

#include "dyngeo/types.hpp"

namespace dyngeo {

class DyngeoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A point left the model's chart domain.
class DomainError : public DyngeoError {
 public:
  using DyngeoError::DyngeoError;
};

// omega(x) is numerically singular.
class SingularFormError : public DyngeoError {
 public:
  using DyngeoError::DyngeoError;
};

// Adaptive integration could not proceed (step underflow, step budget,
// non-finite state). Carries the state and time where it gave up.
class IntegrationError : public DyngeoError {
 public:
  IntegrationError(const std::string& what, double t, Vec state)
      : DyngeoError(what), t_(t), state_(std::move(state)) {}
  double time() const { return t_; }
  const Vec& state() const { return state_; }

 private:
  double t_;
  Vec state_;
};

// Newton / refinement loops that ran out of iterations.
class ConvergenceError : public DyngeoError {
 public:
  using DyngeoError::DyngeoError;
};

class ConfigError : public DyngeoError {
 public:
  using DyngeoError::DyngeoError;
};

// Operation called with arguments violating its precondition (wrong model
// kind, mismatched endpoints, unsupported order, ...).
class InvalidArgument : public DyngeoError {
 public:
  using DyngeoError::DyngeoError;
};

}  // namespace dyngeo
