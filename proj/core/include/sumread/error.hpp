#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sumread {

/// Violated precondition on an argument (bad ratio, empty reference list...).
class ArgumentError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input data. `line` is 1-based when known, `offset` is a byte
/// offset into the stream when known; either may be zero.
class DataError : public std::runtime_error {
public:
  DataError(const std::string& what, std::size_t line = 0, std::size_t offset = 0)
      : std::runtime_error(what), line_(line), offset_(offset) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t line_;
  std::size_t offset_;
};

/// One bad record found while reading an otherwise well-formed input.
struct RecordError {
  std::string record;  // record id when known, else empty
  std::size_t line = 0;
  std::string message;
};

/// Raised in strict mode on the first record-level error.
class RecordErrorException : public DataError {
public:
  explicit RecordErrorException(RecordError error)
      : DataError(describe(error), error.line), error_(std::move(error)) {}

  const RecordError& error() const noexcept { return error_; }

  static std::string describe(const RecordError& e) {
    std::string out;
    if (e.line != 0) out += "line " + std::to_string(e.line) + ": ";
    if (!e.record.empty()) out += "record '" + e.record + "': ";
    return out + e.message;
  }

private:
  RecordError error_;
};

enum class ErrorMode { strict, collect };

}  // namespace sumread
