#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace remedy {

// Input problems (bad files, malformed JSON/DSL, trace/pipeline mismatch).
// The CLI maps these to exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

// Failures of localization or remediation on well-formed input.
// The CLI maps these to exit code 2.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyDomainError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A restriction whose result has no HyperparamDomain form (an interior hole
// in a wide or real-valued range).
class UnrepresentableDomainError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotInChoiceError : public DomainError {
 public:
  using DomainError::DomainError;
};

class WouldEmptyChoiceError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotNumericError : public DomainError {
 public:
  using DomainError::DomainError;
};

class TypeMismatchError : public DomainError {
 public:
  using DomainError::DomainError;
};

class UnsatisfiableBranchError : public DomainError {
 public:
  using DomainError::DomainError;
};

class LitFalseConstraintError : public DomainError {
 public:
  using DomainError::DomainError;
};

class AllBucketsEmptyError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NoExplanationError : public DomainError {
 public:
  NoExplanationError(const std::string& message, std::string best_partial,
                     std::vector<std::string> misclassified)
      : DomainError(message),
        best_partial_(std::move(best_partial)),
        misclassified_(std::move(misclassified)) {}

  const std::string& best_partial() const { return best_partial_; }
  const std::vector<std::string>& misclassified() const { return misclassified_; }

 private:
  std::string best_partial_;
  std::vector<std::string> misclassified_;
};

// Every observed instance failed; nothing to generalize from.
class AllFailedError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace remedy
