#include "iotk/asset_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

#include "iotk/numfmt.hpp"
#include "json_text.hpp"

namespace iotk {

using detail::as_range;
using detail::as_real;
using detail::as_string;
using detail::as_vec3;
using detail::Json;
using detail::ObjectReader;

namespace {

std::string summarize(const ValidationReport& report) {
  const auto errors = report.errors();
  std::string msg = "asset violates " + std::to_string(errors.size()) + " invariant(s)";
  if (!errors.empty()) msg += ": " + errors.front().code + ": " + errors.front().message;
  return msg;
}

template <typename E>
E read_enum(const Json& value, const std::string& path, std::optional<E> (*from)(std::string_view)) {
  const std::string s = as_string(value, path);
  auto e = from(s);
  if (!e) throw SchemaError(path, "unrecognized value \"" + s + "\"");
  return *e;
}

// ---------------------------------------------------------------------------
// Reading
// ---------------------------------------------------------------------------

JointSpec read_joint(const Json& value, const std::string& path) {
  ObjectReader r(value, path);
  JointSpec j;
  j.type = read_enum<JointType>(r.require("type"), r.child("type"), joint_type_from_string);
  const bool fixed = j.type == JointType::fixed;
  const bool revolute = j.type == JointType::revolute;

  if (const Json* axis = fixed ? r.optional("axis") : &r.require("axis")) j.axis = as_vec3(*axis, r.child("axis"));
  if (const Json* origin = revolute ? &r.require("origin") : r.optional("origin"))
    j.origin = as_vec3(*origin, r.child("origin"));
  if (const Json* range = fixed ? r.optional("range") : &r.require("range")) {
    const ValueRange rr = as_range(*range, r.child("range"));
    j.range_min = rr.min;
    j.range_max = rr.max;
  }
  r.finish();
  return j;
}

StateSpace read_space(const Json& value, const std::string& path) {
  ObjectReader r(value, path);
  const StateKind kind = read_enum<StateKind>(r.require("kind"), r.child("kind"), state_kind_from_string);
  StateSpace s;
  if (kind == StateKind::discrete) {
    const Json& labels = r.require("labels");
    if (!labels.is_array()) throw SchemaError(r.child("labels"), "expected an array of strings");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < labels.size(); ++i)
      names.push_back(as_string(labels[i], r.child("labels") + "[" + std::to_string(i) + "]"));
    s = StateSpace::discrete(std::move(names));
  } else {
    const double min = as_real(r.require("min"), r.child("min"));
    const double max = as_real(r.require("max"), r.child("max"));
    const StateUnit unit = read_enum<StateUnit>(r.require("unit"), r.child("unit"), state_unit_from_string);
    s = StateSpace::continuous(min, max, unit);
  }
  r.finish();
  return s;
}

std::optional<double> optional_real(ObjectReader& r, const std::string& key) {
  if (const Json* v = r.optional(key)) return as_real(*v, r.child(key));
  return std::nullopt;
}

MappingSpec read_mapping(const Json& value, const std::string& path) {
  ObjectReader r(value, path);
  const MappingKind kind = read_enum<MappingKind>(r.require("type"), r.child("type"), mapping_kind_from_string);
  ObjectReader p(r.require("params"), r.child("params"));
  MappingSpec m;
  switch (kind) {
    case MappingKind::binary:
      m.params = BinaryParams{as_real(p.require("on_value"), p.child("on_value")),
                              as_real(p.require("off_value"), p.child("off_value"))};
      break;
    case MappingKind::step: {
      StepParams s;
      s.threshold = optional_real(p, "threshold");
      s.low_value = as_real(p.require("low_value"), p.child("low_value"));
      s.high_value = as_real(p.require("high_value"), p.child("high_value"));
      m.params = s;
      break;
    }
    case MappingKind::linear: {
      LinearParams l;
      l.slope = optional_real(p, "slope");
      l.offset = optional_real(p, "offset");
      m.params = l;
      break;
    }
    case MappingKind::cumulative:
      m.params = CumulativeParams{as_real(p.require("delta"), p.child("delta")),
                                  as_real(p.require("initial"), p.child("initial")),
                                  as_real(p.require("clamp_min"), p.child("clamp_min")),
                                  as_real(p.require("clamp_max"), p.child("clamp_max"))};
      break;
  }
  p.finish();
  r.finish();
  return m;
}

std::optional<Vec3> optional_vec3(ObjectReader& r, const std::string& key) {
  if (const Json* v = r.optional(key)) return as_vec3(*v, r.child(key));
  return std::nullopt;
}

PhysicalEffectSpec read_effect(const Json& value, const std::string& path) {
  ObjectReader r(value, path);
  const EffectKind kind = read_enum<EffectKind>(r.require("type"), r.child("type"), effect_kind_from_string);
  ObjectReader p(r.require("params"), r.child("params"));
  PhysicalEffectSpec e;
  switch (kind) {
    case EffectKind::geometry:
      e.params = GeometryEffect{as_string(p.require("target_joint"), p.child("target_joint"))};
      break;
    case EffectKind::illumination: {
      IlluminationEffect ill;
      ill.source_position = optional_vec3(p, "source_position");
      ill.intensity_range = as_range(p.require("intensity_range"), p.child("intensity_range"));
      e.params = ill;
      break;
    }
    case EffectKind::temperature: {
      TemperatureEffect temp;
      temp.heat_source_position = optional_vec3(p, "heat_source_position");
      temp.temp_range = as_range(p.require("temp_range"), p.child("temp_range"));
      e.params = temp;
      break;
    }
    case EffectKind::fluid: {
      FluidEffect fluid;
      fluid.emitter_position = as_vec3(p.require("emitter_position"), p.child("emitter_position"));
      fluid.droplet_size_range = as_range(p.require("droplet_size_range"), p.child("droplet_size_range"));
      e.params = fluid;
      break;
    }
  }
  p.finish();
  r.finish();
  return e;
}

Part read_part(const Json& value, const std::string& path) {
  ObjectReader r(value, path);
  Part part;
  part.id = as_string(r.require("id"), r.child("id"));
  part.role = read_enum<PartRole>(r.require("role"), r.child("role"), part_role_from_string);
  {
    ObjectReader g(r.require("geometry"), r.child("geometry"));
    part.geometry.file = as_string(g.require("file"), g.child("file"));
    part.geometry.format =
        read_enum<GeometryFormat>(g.require("format"), g.child("format"), geometry_format_from_string);
    g.finish();
  }
  part.joint = read_joint(r.require("joint"), r.child("joint"));
  r.finish();
  return part;
}

FunctionTemplate read_template(const Json& value, const std::string& path) {
  ObjectReader r(value, path);
  FunctionTemplate t;
  t.receptor_id = as_string(r.require("receptor"), r.child("receptor"));
  t.effector_id = as_string(r.require("effector"), r.child("effector"));
  t.receptor_space = read_space(r.require("receptor_space"), r.child("receptor_space"));
  t.effector_space = read_space(r.require("effector_space"), r.child("effector_space"));
  t.mapping = read_mapping(r.require("mapping"), r.child("mapping"));
  t.effect = read_effect(r.require("effect"), r.child("effect"));
  r.finish();
  return t;
}

// ---------------------------------------------------------------------------
// Writing
// ---------------------------------------------------------------------------

Json joint_json(const JointSpec& j) {
  Json out = Json::object();
  out["type"] = std::string(to_string(j.type));
  out["axis"] = detail::vec3_json(j.axis);
  out["origin"] = detail::vec3_json(j.origin);
  out["range"] = detail::range_json(j.range_min, j.range_max);
  return out;
}

Json space_json(const StateSpace& s) {
  Json out = Json::object();
  out["kind"] = std::string(to_string(s.kind));
  if (s.is_discrete()) {
    out["labels"] = s.labels;
  } else {
    out["min"] = s.min;
    out["max"] = s.max;
    out["unit"] = std::string(to_string(s.unit));
  }
  return out;
}

Json mapping_json(const MappingSpec& m) {
  Json params = Json::object();
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, BinaryParams>) {
          params["on_value"] = p.on_value;
          params["off_value"] = p.off_value;
        } else if constexpr (std::is_same_v<P, StepParams>) {
          if (p.threshold) params["threshold"] = *p.threshold;
          params["low_value"] = p.low_value;
          params["high_value"] = p.high_value;
        } else if constexpr (std::is_same_v<P, LinearParams>) {
          if (p.slope) params["slope"] = *p.slope;
          if (p.offset) params["offset"] = *p.offset;
        } else {
          params["delta"] = p.delta;
          params["initial"] = p.initial;
          params["clamp_min"] = p.clamp_min;
          params["clamp_max"] = p.clamp_max;
        }
      },
      m.params);
  Json out = Json::object();
  out["type"] = std::string(to_string(m.kind()));
  out["params"] = std::move(params);
  return out;
}

Json effect_json(const PhysicalEffectSpec& e) {
  Json params = Json::object();
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, GeometryEffect>) {
          params["target_joint"] = p.target_joint;
        } else if constexpr (std::is_same_v<P, IlluminationEffect>) {
          if (p.source_position) params["source_position"] = detail::vec3_json(*p.source_position);
          params["intensity_range"] = detail::range_json(p.intensity_range.min, p.intensity_range.max);
        } else if constexpr (std::is_same_v<P, TemperatureEffect>) {
          if (p.heat_source_position) params["heat_source_position"] = detail::vec3_json(*p.heat_source_position);
          params["temp_range"] = detail::range_json(p.temp_range.min, p.temp_range.max);
        } else {
          params["emitter_position"] = detail::vec3_json(p.emitter_position);
          params["droplet_size_range"] = detail::range_json(p.droplet_size_range.min, p.droplet_size_range.max);
        }
      },
      e.params);
  Json out = Json::object();
  out["type"] = std::string(to_string(e.kind()));
  out["params"] = std::move(params);
  return out;
}

// ---------------------------------------------------------------------------
// Line-oriented text helpers
// ---------------------------------------------------------------------------

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view strip_comment(std::string_view line) {
  if (auto pos = line.find('#'); pos != std::string_view::npos) line = line.substr(0, pos);
  return line;
}

double finite_real(std::string_view token, std::size_t line, const char* what) {
  auto v = parse_real(token);
  if (!v || !std::isfinite(*v))
    throw SyntaxError(std::string("expected a finite number for ") + what + ", got \"" + std::string(token) + "\"",
                      line);
  return *v;
}

std::size_t parse_index(std::string_view token, std::size_t line) {
  std::size_t value = 0;
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || end != token.data() + token.size())
    throw SyntaxError("expected a vertex index, got \"" + std::string(token) + "\"", line);
  return value;
}

void add_polygon(PartGeometry& g, const std::vector<std::size_t>& poly, std::size_t line) {
  if (poly.size() < 3) throw SyntaxError("face needs at least 3 vertices", line);
  for (std::size_t idx : poly)
    if (idx >= g.points.size()) throw SyntaxError("face vertex index " + std::to_string(idx) + " out of range", line);
  for (std::size_t k = 1; k + 1 < poly.size(); ++k) g.faces.push_back({poly[0], poly[k], poly[k + 1]});
}

PartGeometry parse_xyz(std::string_view text) {
  PartGeometry g;
  const auto lines = split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto tokens = split_ws(strip_comment(lines[n]));
    if (tokens.empty()) continue;
    if (tokens.size() != 3)
      throw SyntaxError("expected 3 coordinates, got " + std::to_string(tokens.size()), n + 1);
    g.points.emplace_back(finite_real(tokens[0], n + 1, "x"), finite_real(tokens[1], n + 1, "y"),
                          finite_real(tokens[2], n + 1, "z"));
  }
  return g;
}

PartGeometry parse_obj(std::string_view text) {
  PartGeometry g;
  const auto lines = split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto tokens = split_ws(strip_comment(lines[n]));
    if (tokens.empty()) continue;
    if (tokens[0] == "v") {
      if (tokens.size() != 4 && tokens.size() != 5) throw SyntaxError("vertex needs 3 coordinates", n + 1);
      g.points.emplace_back(finite_real(tokens[1], n + 1, "x"), finite_real(tokens[2], n + 1, "y"),
                            finite_real(tokens[3], n + 1, "z"));
    } else if (tokens[0] == "f") {
      std::vector<std::size_t> poly;
      for (std::size_t k = 1; k < tokens.size(); ++k) {
        std::string_view ref = tokens[k].substr(0, tokens[k].find('/'));
        long long idx = 0;
        auto [end, ec] = std::from_chars(ref.data(), ref.data() + ref.size(), idx);
        if (ec != std::errc{} || end != ref.data() + ref.size() || idx == 0)
          throw SyntaxError("bad face vertex reference \"" + std::string(tokens[k]) + "\"", n + 1);
        const long long count = static_cast<long long>(g.points.size());
        const long long zero_based = idx > 0 ? idx - 1 : count + idx;
        if (zero_based < 0 || zero_based >= count)
          throw SyntaxError("face vertex index " + std::to_string(idx) + " out of range", n + 1);
        poly.push_back(static_cast<std::size_t>(zero_based));
      }
      add_polygon(g, poly, n + 1);
    }
  }
  return g;
}

PartGeometry parse_ply(std::string_view text) {
  struct Element {
    std::string name;
    std::size_t count = 0;
    std::vector<std::string> scalar_props;  // names, in order; list props as "list:<name>"
  };
  const auto lines = split_lines(text);
  if (lines.empty() || split_ws(lines[0]) != std::vector<std::string_view>{"ply"})
    throw SyntaxError("missing \"ply\" magic", 1);

  std::vector<Element> elements;
  std::size_t n = 1;
  bool ended = false;
  for (; n < lines.size(); ++n) {
    const auto tokens = split_ws(lines[n]);
    if (tokens.empty() || tokens[0] == "comment" || tokens[0] == "obj_info") continue;
    if (tokens[0] == "format") {
      if (tokens.size() < 2 || tokens[1] != "ascii") throw SyntaxError("only ascii PLY is supported", n + 1);
    } else if (tokens[0] == "element") {
      if (tokens.size() != 3) throw SyntaxError("malformed element line", n + 1);
      elements.push_back({std::string(tokens[1]), parse_index(tokens[2], n + 1), {}});
    } else if (tokens[0] == "property") {
      if (elements.empty()) throw SyntaxError("property before element", n + 1);
      if (tokens.size() == 3) {
        elements.back().scalar_props.emplace_back(tokens[2]);
      } else if (tokens.size() == 5 && tokens[1] == "list") {
        elements.back().scalar_props.push_back("list:" + std::string(tokens[4]));
      } else {
        throw SyntaxError("malformed property line", n + 1);
      }
    } else if (tokens[0] == "end_header") {
      ended = true;
      ++n;
      break;
    } else {
      throw SyntaxError("unexpected header line \"" + std::string(lines[n]) + "\"", n + 1);
    }
  }
  if (!ended) throw SyntaxError("missing end_header", lines.size());

  PartGeometry g;
  for (const Element& el : elements) {
    auto position = [&](const std::string& name) -> std::ptrdiff_t {
      for (std::size_t i = 0; i < el.scalar_props.size(); ++i)
        if (el.scalar_props[i] == name) return static_cast<std::ptrdiff_t>(i);
      return -1;
    };
    for (std::size_t k = 0; k < el.count; ++k, ++n) {
      while (n < lines.size() && split_ws(lines[n]).empty()) ++n;
      if (n >= lines.size()) throw SyntaxError("unexpected end of data in element " + el.name, lines.size());
      const auto tokens = split_ws(lines[n]);
      if (el.name == "vertex") {
        const auto ix = position("x"), iy = position("y"), iz = position("z");
        if (ix < 0 || iy < 0 || iz < 0) throw SyntaxError("vertex element lacks x/y/z", n + 1);
        if (tokens.size() < el.scalar_props.size()) throw SyntaxError("vertex has too few values", n + 1);
        g.points.emplace_back(finite_real(tokens[ix], n + 1, "x"), finite_real(tokens[iy], n + 1, "y"),
                              finite_real(tokens[iz], n + 1, "z"));
      } else if (el.name == "face") {
        if (tokens.empty()) throw SyntaxError("empty face", n + 1);
        const std::size_t count = parse_index(tokens[0], n + 1);
        if (tokens.size() < count + 1) throw SyntaxError("face has too few indices", n + 1);
        std::vector<std::size_t> poly;
        for (std::size_t i = 0; i < count; ++i) poly.push_back(parse_index(tokens[i + 1], n + 1));
        add_polygon(g, poly, n + 1);
      }
    }
  }
  return g;
}

MaskImage mask_from_column_runs(std::size_t h, std::size_t w, const std::vector<std::size_t>& counts) {
  MaskImage m(w, h);
  std::size_t pos = 0;
  std::uint8_t value = 0;
  for (std::size_t run : counts) {
    for (std::size_t k = 0; k < run; ++k, ++pos) {
      const std::size_t col = pos / h;
      const std::size_t row = pos % h;
      m.at(row, col) = value;
    }
    value ^= 1;
  }
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public API
// ---------------------------------------------------------------------------

SemanticError::SemanticError(ValidationReport report) : Error(summarize(report)), report_(std::move(report)) {}

InteractiveObjectAsset read_asset_document(std::string_view text) {
  const Json doc = detail::parse_json(text);
  ObjectReader r(doc, "");
  InteractiveObjectAsset asset;
  asset.format_version = as_string(r.require("format_version"), "format_version");
  static const std::regex kVersion(R"(1(\.[0-9]+)?)");
  if (!std::regex_match(asset.format_version, kVersion))
    throw SchemaError("format_version", "unsupported version \"" + asset.format_version + "\"");
  asset.object_id = as_string(r.require("object_id"), "object_id");
  const Json& parts = r.require("parts");
  if (!parts.is_array()) throw SchemaError("parts", "expected an array");
  for (std::size_t i = 0; i < parts.size(); ++i)
    asset.parts.push_back(read_part(parts[i], "parts[" + std::to_string(i) + "]"));
  asset.function_template = read_template(r.require("function_template"), "function_template");
  if (const Json* meta = r.optional("metadata")) {
    if (!meta->is_object()) throw SchemaError("metadata", "expected an object of strings");
    for (auto it = meta->begin(); it != meta->end(); ++it)
      asset.metadata[it.key()] = as_string(it.value(), "metadata." + it.key());
  }
  r.finish();
  return asset;
}

InteractiveObjectAsset parse_asset(std::string_view text) {
  ValidationReport report = validate_asset(read_asset_document(text));
  if (report.has_errors()) throw SemanticError(std::move(report));
  return std::move(report.canonical);
}

std::string serialize_asset(const InteractiveObjectAsset& asset) {
  const ValidationReport report = validate_asset(asset);
  if (report.has_errors()) throw InvalidArgument("cannot serialize invalid asset: " + summarize(report));

  Json doc = Json::object();
  doc["format_version"] = asset.format_version;
  doc["object_id"] = asset.object_id;
  Json parts = Json::array();
  for (const Part& p : asset.parts) {
    Json part = Json::object();
    part["id"] = p.id;
    part["role"] = std::string(to_string(p.role));
    Json geometry = Json::object();
    geometry["file"] = p.geometry.file;
    geometry["format"] = std::string(to_string(p.geometry.format));
    part["geometry"] = std::move(geometry);
    part["joint"] = joint_json(p.joint);
    parts.push_back(std::move(part));
  }
  doc["parts"] = std::move(parts);

  const FunctionTemplate& t = asset.function_template;
  Json tmpl = Json::object();
  tmpl["receptor"] = t.receptor_id;
  tmpl["effector"] = t.effector_id;
  tmpl["receptor_space"] = space_json(t.receptor_space);
  tmpl["effector_space"] = space_json(t.effector_space);
  tmpl["mapping"] = mapping_json(t.mapping);
  tmpl["effect"] = effect_json(t.effect);
  doc["function_template"] = std::move(tmpl);

  Json meta = Json::object();
  for (const auto& [k, v] : asset.metadata) meta[k] = v;
  doc["metadata"] = std::move(meta);
  return detail::dump_canonical(doc) + "\n";
}

InteractiveObjectAsset load_asset(const std::filesystem::path& path) { return parse_asset(read_file(path)); }

JointSpec parse_joint_document(std::string_view text) { return read_joint(detail::parse_json(text), ""); }

std::string serialize_joint_document(const JointSpec& joint) {
  return detail::dump_canonical(joint_json(joint)) + "\n";
}

PartGeometry parse_pointcloud(std::string_view text, GeometryFormat format) {
  PartGeometry g;
  switch (format) {
    case GeometryFormat::xyz:
      g = parse_xyz(text);
      break;
    case GeometryFormat::ply_ascii:
      g = parse_ply(text);
      break;
    case GeometryFormat::obj:
      g = parse_obj(text);
      break;
  }
  if (g.points.empty()) throw SyntaxError("point cloud has no points", 0);
  return g;
}

PartGeometry load_pointcloud(const std::filesystem::path& path, GeometryFormat format) {
  const std::string text = read_file(path);
  try {
    return parse_pointcloud(text, format);
  } catch (const SyntaxError& e) {
    throw SyntaxError(path.string() + ": " + e.what(), e.line());
  }
}

std::string write_xyz(const PartGeometry& geometry) {
  std::string out;
  for (const Vec3& p : geometry.points)
    out += format_real(p.x()) + " " + format_real(p.y()) + " " + format_real(p.z()) + "\n";
  return out;
}

PartGeometry load_part_geometry(const Part& part, const std::filesystem::path& base_dir) {
  std::filesystem::path file(part.geometry.file);
  if (file.is_relative()) file = base_dir / file;
  return load_pointcloud(file, part.geometry.format);
}

MaskImage parse_pgm(std::string_view bytes) {
  std::size_t pos = 0;
  auto skip_space_and_comments = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_uint = [&](const char* what) {
    skip_space_and_comments();
    std::size_t start = pos;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (start == pos) throw SyntaxError(std::string("PGM header: expected ") + what, 0);
    return parse_index(bytes.substr(start, pos - start), 0);
  };

  if (bytes.substr(0, 2) != "P5") throw SyntaxError("PGM header: expected magic P5", 0);
  pos = 2;
  const std::size_t width = read_uint("width");
  const std::size_t height = read_uint("height");
  const std::size_t maxval = read_uint("maxval");
  if (width == 0 || height == 0) throw SyntaxError("PGM header: dimensions must be positive", 0);
  if (maxval != 255) throw SyntaxError("PGM header: maxval must be 255", 0);
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos])))
    throw SyntaxError("PGM header: missing whitespace before raster", 0);
  ++pos;
  if (bytes.size() - pos != width * height)
    throw SyntaxError("PGM raster has " + std::to_string(bytes.size() - pos) + " bytes, header declares " +
                          std::to_string(width * height),
                      0);
  MaskImage m(width, height);
  for (std::size_t i = 0; i < width * height; ++i) m.pixels[i] = bytes[pos + i] != 0 ? 1 : 0;
  return m;
}

std::string write_pgm(const MaskImage& mask) {
  std::string out = "P5\n" + std::to_string(mask.width) + " " + std::to_string(mask.height) + "\n255\n";
  for (std::uint8_t p : mask.pixels) out.push_back(static_cast<char>(p ? 255 : 0));
  return out;
}

MaskImage parse_rle(std::string_view text) {
  const Json doc = detail::parse_json(text);
  ObjectReader r(doc, "");
  const Json& size = r.require("size");
  const Json& counts = r.require("counts");
  r.finish();
  if (!size.is_array() || size.size() != 2 || !size[0].is_number_unsigned() || !size[1].is_number_unsigned())
    throw SchemaError("size", "expected [height, width] as non-negative integers");
  const std::size_t h = size[0].get<std::size_t>();
  const std::size_t w = size[1].get<std::size_t>();
  if (h == 0 || w == 0) throw SchemaError("size", "dimensions must be positive");
  if (!counts.is_array()) throw SchemaError("counts", "expected an array of run lengths");
  std::vector<std::size_t> runs;
  std::size_t total = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (!counts[i].is_number_unsigned())
      throw SchemaError("counts[" + std::to_string(i) + "]", "expected a non-negative integer");
    runs.push_back(counts[i].get<std::size_t>());
    total += runs.back();
  }
  if (total != h * w)
    throw SchemaError("counts", "runs sum to " + std::to_string(total) + " but size is " + std::to_string(h * w));
  return mask_from_column_runs(h, w, runs);
}

std::string write_rle(const MaskImage& mask) {
  std::vector<std::size_t> runs;
  std::uint8_t value = 0;
  std::size_t run = 0;
  for (std::size_t col = 0; col < mask.width; ++col) {
    for (std::size_t row = 0; row < mask.height; ++row) {
      const std::uint8_t p = mask.at(row, col) ? 1 : 0;
      if (p != value) {
        runs.push_back(run);
        run = 0;
        value = p;
      }
      ++run;
    }
  }
  runs.push_back(run);
  std::string out = "{\"size\": [" + std::to_string(mask.height) + ", " + std::to_string(mask.width) + "], \"counts\": [";
  for (std::size_t i = 0; i < runs.size(); ++i) out += (i ? ", " : "") + std::to_string(runs[i]);
  return out + "]}\n";
}

MaskImage load_mask(const std::filesystem::path& path, MaskFormat format) {
  const std::string bytes = read_file(path);
  try {
    return format == MaskFormat::pgm ? parse_pgm(bytes) : parse_rle(bytes);
  } catch (const SyntaxError& e) {
    throw SyntaxError(path.string() + ": " + e.what(), e.line(), e.column());
  } catch (const SchemaError& e) {
    throw SchemaError(e.path(), path.string() + ": " + e.what());
  }
}

std::map<std::string, std::vector<std::size_t>> parse_index_masks(std::string_view text) {
  const Json doc = detail::parse_json(text);
  if (!doc.is_object()) throw SchemaError("", "expected an object of index lists");
  std::map<std::string, std::vector<std::size_t>> out;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!it.value().is_array()) throw SchemaError(it.key(), "expected an array of indices");
    auto& indices = out[it.key()];
    for (const Json& v : it.value()) {
      if (!v.is_number_unsigned()) throw SchemaError(it.key(), "expected non-negative integer indices");
      indices.push_back(v.get<std::size_t>());
    }
  }
  return out;
}

ActuationTrace parse_trace(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0] != "t,receptor_state") throw SyntaxError("expected header \"t,receptor_state\"", 1);
  ActuationTrace trace;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const std::size_t comma = lines[n].find(',');
    if (comma == std::string_view::npos || lines[n].find(',', comma + 1) != std::string_view::npos)
      throw SyntaxError("expected 2 fields", n + 1);
    ActuationSample s;
    s.t = finite_real(lines[n].substr(0, comma), n + 1, "t");
    s.receptor_state = finite_real(lines[n].substr(comma + 1), n + 1, "receptor_state");
    if (!trace.samples.empty() && !(s.t > trace.samples.back().t))
      throw SyntaxError("time " + format_real(s.t) + " is not after " + format_real(trace.samples.back().t), n + 1);
    trace.samples.push_back(s);
  }
  return trace;
}

std::string write_trace(const ActuationTrace& trace) {
  std::string out = "t,receptor_state\n";
  for (const ActuationSample& s : trace.samples) out += format_real(s.t) + "," + format_real(s.receptor_state) + "\n";
  return out;
}

std::string write_state_trace(const StateTrace& trace) {
  std::string out = "t,receptor_state,effector_state\n";
  for (const StateSample& s : trace.samples)
    out += format_real(s.t) + "," + format_real(s.receptor_state) + "," + format_real(s.effector_state) + "\n";
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("error writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename into " + path.string());
  }
}

}  // namespace iotk
