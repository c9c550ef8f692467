#pragma once

#include <stdexcept>
#include <string>

namespace turbo {

// Error taxonomy shared by the library, the C API and the CLI.
// Contract-family errors map to exit status 1, numeric errors to status 2.
class Error : public std::runtime_error {
 public:
  enum class Kind { contract, numeric };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Shape disagreement between operands.
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(Kind::contract, what) {}
};

// Invalid hyperparameter or argument value (p >= 1, tau <= 0, ...).
class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what) : Error(Kind::contract, what) {}
};

// Violated precondition that is not a plain shape or parameter problem.
class ContractError : public Error {
 public:
  explicit ContractError(const std::string& what) : Error(Kind::contract, what) {}
};

// A row with (near-)zero norm where a direction is required.
class DegenerateRowError : public Error {
 public:
  explicit DegenerateRowError(const std::string& what) : Error(Kind::contract, what) {}
};

// Malformed input file.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(Kind::contract, what) {}
};

// Well-formed file whose contents violate the declared schema.
class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& what) : Error(Kind::contract, what) {}
};

// Filesystem failure.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(Kind::contract, what) {}
};

// Non-finite values where finite ones are required (NaN/Inf gradients etc).
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(Kind::numeric, what) {}
};

}  // namespace turbo
