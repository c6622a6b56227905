#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace liftlim {

/// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text. `line` and `column` are 1-based; line 0 means "not from a file".
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error(format(line, column, message)), line_(line), column_(column), message_(message) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  static std::string format(std::size_t line, std::size_t column, const std::string& message) {
    if (line == 0) return "column " + std::to_string(column) + ": " + message;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
  }

  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

class ReferenceError : public Error {
 public:
  explicit ReferenceError(std::string name)
      : Error("undefined reference '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class AlphabetMismatch : public Error {
 public:
  AlphabetMismatch() : Error("words belong to different alphabets") {}
  explicit AlphabetMismatch(const std::string& what) : Error(what) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error("dimension mismatch: " + what) {}
};

/// Coset enumeration ran out of budget. Infinite index and a small budget look the same.
class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(std::size_t partial_cosets)
      : Error("coset enumeration budget exceeded after " + std::to_string(partial_cosets) +
              " live cosets (infinite index or insufficient budget)"),
        partial_(partial_cosets) {}
  std::size_t partial_cosets() const { return partial_; }

 private:
  std::size_t partial_;
};

class UnsupportedBackend : public Error {
 public:
  explicit UnsupportedBackend(const std::string& what) : Error("unsupported backend: " + what) {}
};

/// Two words of one source coset land in different target cosets.
class CoherenceViolation : public Error {
 public:
  CoherenceViolation(std::string first, std::string second, const std::string& what)
      : Error("coherence violation: " + what), first_(std::move(first)), second_(std::move(second)) {}
  const std::string& first() const { return first_; }
  const std::string& second() const { return second_; }

 private:
  std::string first_;
  std::string second_;
};

class NormalityViolation : public Error {
 public:
  NormalityViolation(std::size_t stage, std::string witness)
      : Error("thread entry at stage " + std::to_string(stage) + " is not normal; " + witness +
              " leaves the subgroup"),
        stage_(stage), witness_(std::move(witness)) {}
  std::size_t stage() const { return stage_; }
  const std::string& witness() const { return witness_; }

 private:
  std::size_t stage_;
  std::string witness_;
};

class NonCofinal : public Error {
 public:
  explicit NonCofinal(const std::string& what) : Error("index sequence is not cofinal: " + what) {}
};

class UnknownEntry : public Error {
 public:
  explicit UnknownEntry(const std::string& name) : Error("unknown gallery entry '" + name + "'") {}
};

class ParamOutOfRange : public Error {
 public:
  explicit ParamOutOfRange(const std::string& what) : Error("parameter out of range: " + what) {}
};

}  // namespace liftlim
