#pragma once

#include <stdexcept>
#include <string>

namespace atspec {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- model ---------------------------------------------------------------

/// A linkage graph violates a structural invariant; the message names it.
class InvalidGraph : public Error {
public:
  using Error::Error;
};

/// A label refers to a state that was never declared.
class UnknownState : public Error {
public:
  using Error::Error;
};

/// The graph does not match any topology the requested operation supports.
class UnsupportedTopology : public Error {
public:
  using Error::Error;
};

/// Parameter struct fails its own invariants (negative magnitude, gamma <= 0).
class InvalidParams : public Error {
public:
  using Error::Error;
};

// --- linkage_dsl ---------------------------------------------------------

/// Common base for parse diagnostics; carries the 1-based source location.
class ParseError : public Error {
public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

private:
  int line_;
  int column_;
};

/// Malformed statement: unknown keyword, wrong token count, bad number.
class SyntaxError : public ParseError {
public:
  using ParseError::ParseError;
};

/// Well-formed statement that contradicts the document or the graph rules.
class SemanticError : public ParseError {
public:
  using ParseError::ParseError;
};

/// preset() name is not one of the known linkage patterns.
class UnknownPreset : public Error {
public:
  using Error::Error;
};

/// preset() magnitude count does not match the pattern's coupling count.
class ArityMismatch : public Error {
public:
  using Error::Error;
};

// --- closed_form ---------------------------------------------------------

/// Denominator underflowed to zero against a nonzero numerator. Cannot occur
/// for gamma > 0; kept as a defensive guard.
class NonFinite : public Error {
public:
  using Error::Error;
};

/// The dark-line quartic would need a complex square root.
class DegenerateDarkLines : public Error {
public:
  using Error::Error;
};

// --- dressed -------------------------------------------------------------

/// Root iteration did not meet the residual tolerance within the cap.
class NoConvergence : public Error {
public:
  using Error::Error;
};

/// Roots coincide within tolerance; per-root factors are undefined there.
class DegenerateRoots : public Error {
public:
  using Error::Error;
};

// --- oracle --------------------------------------------------------------

/// The linear system is singular and inconsistent with the initial vector.
class SingularSystem : public Error {
public:
  using Error::Error;
};

/// Integration step fails the preconditions (positive, at most horizon/100).
class InvalidStep : public Error {
public:
  using Error::Error;
};

// --- analysis ------------------------------------------------------------

/// Sampling grid fails its preconditions (ordering, size, finiteness).
class InvalidGrid : public Error {
public:
  using Error::Error;
};

/// A half-maximum crossing is not bracketed by the series; the caller may
/// widen the grid and retry.
class UnbracketedCrossing : public Error {
public:
  using Error::Error;
};

}  // namespace atspec
