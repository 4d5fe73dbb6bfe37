#ifndef AOT_ERRORS_HPP
#define AOT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace aot {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid input data (negative weights, non-finite entries, bad ranges).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Dimension disagreement between measures, costs, plans or potentials.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Equality-constrained problem with mismatched total masses.
class BalanceError : public Error {
 public:
  using Error::Error;
};

/// Iteration limit reached before the requested tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Recovered dual certificate failed feasibility or gap checks.
class CertificationError : public Error {
 public:
  using Error::Error;
};

/// Stratified sampling could not satisfy the per-class quota.
class SamplingError : public Error {
 public:
  using Error::Error;
};

/// Training loss became non-finite.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace aot

#endif  // AOT_ERRORS_HPP
