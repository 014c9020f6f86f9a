#ifndef OSC_ERROR_HPP
#define OSC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace osc {

/// Base of every error raised by the library. `exit_code()` is the CLI
/// contract: 1 usage/IO, 2 invalid geometry, 3 non-convergence,
/// 4 precondition violation.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 1; }
};

class IoError : public Error {
public:
  using Error::Error;
};

class GeometryError : public Error {
public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

class PreconditionError : public Error {
public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

// Cut-system construction ran out of attempts.
class ConstructionError : public GeometryError {
public:
  using GeometryError::GeometryError;
};

// An open path has an endpoint lying on a cut.
class PerturbationError : public PreconditionError {
public:
  using PreconditionError::PreconditionError;
};

class SizeError : public PreconditionError {
public:
  using PreconditionError::PreconditionError;
};

class DegenerateInputError : public PreconditionError {
public:
  using PreconditionError::PreconditionError;
};

class AlignmentError : public GeometryError {
public:
  using GeometryError::GeometryError;
};

class SamplingError : public PreconditionError {
public:
  using PreconditionError::PreconditionError;
};

class ConjugacyError : public PreconditionError {
public:
  using PreconditionError::PreconditionError;
};

class NonConvergenceError : public Error {
public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

}  // namespace osc

#endif  // OSC_ERROR_HPP
