// Error hierarchy shared by all modules.

#ifndef MORPHOFORGE_ERRORS_HPP
#define MORPHOFORGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace morpho {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad row structure in a data file (wrong column count, unreadable line).
struct ParseError : Error {
  using Error::Error;
};

// Structurally parseable input that violates a domain invariant.
struct ValidationError : Error {
  using Error::Error;
};

// Caller passed arguments outside an operation's contract.
struct ArgumentError : Error {
  using Error::Error;
};

// Blend cannot be produced from its components by copy/delete alone.
struct NotDerivableError : Error {
  using Error::Error;
};

// Model training failed (divergence, degenerate data).
struct TrainingError : Error {
  using Error::Error;
};

// Closed-form or MLE fit is impossible on the given data.
struct FitError : Error {
  using Error::Error;
};

struct PredictionError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace morpho

#endif
