#ifndef EQPROX_ERRORS_HPP
#define EQPROX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace eqprox {

/// Bad argument: dimension mismatch, out-of-range scalar, malformed set.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation produced a NaN or an infinity.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An objective evaluated to a non-finite value at a sampled abscissa.
class EvaluationError : public NumericalError {
 public:
  EvaluationError(const std::string& what, double abscissa)
      : NumericalError(what), abscissa_(abscissa) {}
  double abscissa() const noexcept { return abscissa_; }

 private:
  double abscissa_;
};

class UnsupportedMethodError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Global 1D search was requested over an unbounded set.
class MissingBracketError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class RootBracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace eqprox

#endif  // EQPROX_ERRORS_HPP
