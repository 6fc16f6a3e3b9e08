#pragma once

#include <stdexcept>
#include <string>

namespace tmsr {

// Diagnostic codes for spec-file problems. Each maps to a distinct E_* tag.
enum class Diag {
  syntax,
  header,
  undeclared,
  duplicate,
  sort,
  arity,
  time_fact,
  rule_shape,
  param,
  io,
};

const char* diag_code(Diag d);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SpecError : public Error {
 public:
  SpecError(Diag code, int line, int column, const std::string& message);

  Diag code() const { return code_; }
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  Diag code_;
  int line_;
  int column_;
  std::string detail_;
};

// The model is well-formed but unsuitable for the requested analysis
// (e.g. a verifier invoked on a non-progressive system).
class InputError : public Error {
 public:
  using Error::Error;
};

// A created fact exceeded the declared fact-size bound k.
class KBoundError : public Error {
 public:
  using Error::Error;
};

// Generator output would exceed the configured rule ceiling.
class LimitError : public Error {
 public:
  using Error::Error;
};

class SubstitutionError : public Error {
 public:
  explicit SubstitutionError(const std::string& variable)
      : Error("substitution does not cover variable '" + variable + "'"), variable_(variable) {}
  const std::string& variable() const { return variable_; }

 private:
  std::string variable_;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace tmsr
