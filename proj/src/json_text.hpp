#pragma once

// Strict JSON reading and canonical writing shared by the document formats.

#include <set>
#include <string>
#include <string_view>

#include <json.hpp>

#include "iotk/types.hpp"

namespace iotk::detail {

using Json = nlohmann::ordered_json;

/// Parses JSON text; throws SyntaxError with line/column, also on duplicate
/// object keys.
Json parse_json(std::string_view text);

/// Canonical text: two-space indent, arrays of scalars inline, shortest
/// round-trip numbers. Throws InvalidArgument on non-finite numbers.
/// No trailing newline.
std::string dump_canonical(const Json& value);

double as_real(const Json& value, const std::string& path);
std::string as_string(const Json& value, const std::string& path);
Vec3 as_vec3(const Json& value, const std::string& path);
ValueRange as_range(const Json& value, const std::string& path);

Json vec3_json(const Vec3& v);
Json range_json(double min, double max);

/// Walks the keys of one JSON object. `require`/`optional` mark keys as
/// consumed; `finish` rejects any key that was never consumed.
class ObjectReader {
 public:
  ObjectReader(const Json& value, std::string path);

  const Json& require(const std::string& key);
  const Json* optional(const std::string& key);
  void finish() const;

  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  const std::string& path() const { return path_; }

 private:
  const Json& value_;
  std::string path_;
  std::set<std::string> consumed_;
};

}  // namespace iotk::detail
