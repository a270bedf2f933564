#include "json_text.hpp"

#include <cmath>
#include <vector>

#include "iotk/errors.hpp"
#include "iotk/numfmt.hpp"

namespace iotk::detail {

namespace {

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  const std::size_t end = std::min(byte, text.size());
  for (std::size_t i = 0; i + 1 < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

bool is_scalar(const Json& v) { return !v.is_object() && !v.is_array(); }

void dump_into(const Json& v, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (v.is_object()) {
    if (v.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += pad + "  " + Json(it.key()).dump() + ": ";
      dump_into(it.value(), indent + 2, out);
    }
    out += "\n" + pad + "}";
  } else if (v.is_array()) {
    if (v.empty()) {
      out += "[]";
      return;
    }
    bool inline_array = true;
    for (const Json& e : v) inline_array = inline_array && is_scalar(e);
    if (inline_array) {
      out += "[";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        dump_into(v[i], indent, out);
      }
      out += "]";
    } else {
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",\n";
        out += pad + "  ";
        dump_into(v[i], indent + 2, out);
      }
      out += "\n" + pad + "]";
    }
  } else if (v.is_number()) {
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw InvalidArgument("cannot serialize non-finite number");
    out += format_real(d);
  } else {
    out += v.dump();
  }
}

}  // namespace

Json parse_json(std::string_view text) {
  std::vector<std::set<std::string>> keys;
  std::string duplicate;
  auto callback = [&](int, Json::parse_event_t event, Json& parsed) {
    switch (event) {
      case Json::parse_event_t::object_start:
        keys.emplace_back();
        break;
      case Json::parse_event_t::object_end:
        keys.pop_back();
        break;
      case Json::parse_event_t::key:
        if (!keys.back().insert(parsed.get<std::string>()).second && duplicate.empty())
          duplicate = parsed.get<std::string>();
        break;
      default:
        break;
    }
    return true;
  };
  Json out;
  try {
    out = Json::parse(text.begin(), text.end(), callback);
  } catch (const Json::parse_error& e) {
    auto [line, column] = line_column(text, e.byte);
    std::string msg = e.what();
    // Drop nlohmann's "[json.exception.parse_error.101] parse error at line 1, column 2: " prefix.
    if (auto pos = msg.find(": "); pos != std::string::npos) msg = msg.substr(pos + 2);
    throw SyntaxError(msg, line, column);
  }
  if (!duplicate.empty()) throw SyntaxError("duplicate key \"" + duplicate + "\"", 0);
  return out;
}

std::string dump_canonical(const Json& value) {
  std::string out;
  dump_into(value, 0, out);
  return out;
}

double as_real(const Json& value, const std::string& path) {
  if (!value.is_number()) throw SchemaError(path, "expected a number");
  return value.get<double>();
}

std::string as_string(const Json& value, const std::string& path) {
  if (!value.is_string()) throw SchemaError(path, "expected a string");
  return value.get<std::string>();
}

Vec3 as_vec3(const Json& value, const std::string& path) {
  if (!value.is_array() || value.size() != 3) throw SchemaError(path, "expected an array of 3 numbers");
  return {as_real(value[0], path + "[0]"), as_real(value[1], path + "[1]"), as_real(value[2], path + "[2]")};
}

ValueRange as_range(const Json& value, const std::string& path) {
  if (!value.is_array() || value.size() != 2) throw SchemaError(path, "expected [min, max]");
  return {as_real(value[0], path + "[0]"), as_real(value[1], path + "[1]")};
}

Json vec3_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Json range_json(double min, double max) { return Json::array({min, max}); }

ObjectReader::ObjectReader(const Json& value, std::string path) : value_(value), path_(std::move(path)) {
  if (!value_.is_object()) throw SchemaError(path_, "expected an object");
}

const Json& ObjectReader::require(const std::string& key) {
  auto it = value_.find(key);
  if (it == value_.end()) throw SchemaError(child(key), "missing required field");
  consumed_.insert(key);
  return *it;
}

const Json* ObjectReader::optional(const std::string& key) {
  auto it = value_.find(key);
  if (it == value_.end()) return nullptr;
  consumed_.insert(key);
  return &*it;
}

void ObjectReader::finish() const {
  for (auto it = value_.begin(); it != value_.end(); ++it)
    if (!consumed_.contains(it.key())) throw SchemaError(child(it.key()), "unknown field");
}

}  // namespace iotk::detail
