#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace latalign {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data is well-formed but semantically unusable (dangling norm ids,
/// corrupted provenance, duplicate manifest rows, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Malformed input. `line()` is 1-based; 0 when the error is not tied to a line.
class ParseError : public DataError {
 public:
  ParseError(std::string source, std::size_t line, const std::string &message)
      : DataError(Format(source, line, message)), source_(std::move(source)), line_(line) {}

  const std::string &source() const { return source_; }
  std::size_t line() const { return line_; }

 private:
  static std::string Format(const std::string &source, std::size_t line, const std::string &message) {
    std::string out = source.empty() ? std::string("<input>") : source;
    if (line > 0) out += ":" + std::to_string(line);
    return out + ": " + message;
  }

  std::string source_;
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class PathLimitExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace latalign
