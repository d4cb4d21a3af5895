#pragma once

#include <stdexcept>
#include <string>

namespace rdl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad caller data: malformed shapes, non-states, out-of-domain operators.
class InputError : public Error {
 public:
  using Error::Error;
};

/// The numerics could not produce an answer for otherwise valid input.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public InputError {
 public:
  using InputError::InputError;
};

class UnitarityError : public InputError {
 public:
  UnitarityError(const std::string& what, double deviation)
      : InputError(what), deviation_(deviation) {}
  double deviation() const { return deviation_; }

 private:
  double deviation_;
};

class HermiticityError : public InputError {
 public:
  HermiticityError(const std::string& what, double deviation)
      : InputError(what), deviation_(deviation) {}
  double deviation() const { return deviation_; }

 private:
  double deviation_;
};

class NotAStateError : public InputError {
 public:
  NotAStateError(const std::string& what, double min_eigenvalue)
      : InputError(what), min_eigenvalue_(min_eigenvalue) {}
  /// Smallest eigenvalue of the offending matrix (NaN when the failure was
  /// not a positivity failure).
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

class EmptyFamilyError : public InputError {
 public:
  using InputError::InputError;
};

class NotInVSError : public InputError {
 public:
  NotInVSError(const std::string& what, double residual)
      : InputError(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class SingularSystemError : public InputError {
 public:
  SingularSystemError(const std::string& what, double condition)
      : InputError(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

class IncompleteDomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SamplingExhaustedError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace rdl
