#pragma once

#include <stdexcept>
#include <string>

namespace dshell {

// Failure of a numerical procedure (non-convergence, pole hit, singular prefactor).
// The CLI maps these to exit code 1.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Argument sits on (or too close to) a pole of a Gamma factor. In the Green
// matrix these are the unperturbed oscillator levels.
class PoleError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

// E within 1e-12 of +/-m, where the off-diagonal Green prefactor 1/(E -/+ m) is singular.
class SingularPrefactorError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

// Caller supplied parameters outside the documented domain. Exit code 2.
class InvalidInput : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

} // namespace dshell
