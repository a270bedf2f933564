#include "iotk/errors.hpp"

#include <utility>

namespace iotk {

namespace {

std::string with_position(const std::string& what, std::size_t line, std::size_t column) {
  if (line == 0) return what;
  std::string out = "line " + std::to_string(line);
  if (column != 0) out += ", column " + std::to_string(column);
  return out + ": " + what;
}

}  // namespace

SyntaxError::SyntaxError(const std::string& what, std::size_t line, std::size_t column)
    : Error(with_position(what, line, column)), line_(line), column_(column) {}

SchemaError::SchemaError(std::string path, const std::string& what)
    : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

}  // namespace iotk
