#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ktaint {

/// Malformed input text. `line` and `column` are 1-based; 0 means unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t line, std::size_t column)
      : std::runtime_error(format(message, line, column)),
        message_(std::move(message)),
        line_(line),
        column_(column) {}

  const std::string& message() const { return message_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  static std::string format(const std::string& message, std::size_t line,
                            std::size_t column) {
    if (line == 0 && column == 0) return message;
    if (line == 0) return "column " + std::to_string(column) + ": " + message;
    return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
  }

  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

/// A well-formed request that cannot be honored (bad arity, unknown
/// operator, setter on an extension property, ...).
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ktaint
