#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace iotk {

/// Base for every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. `line` and `column` are 1-based; 0 means unknown.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t line, std::size_t column = 0);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed text that does not match the expected schema (missing or
/// unknown field, wrong type). `path` names the offending field.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& what);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Violated precondition on a value passed to an operation.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace iotk
