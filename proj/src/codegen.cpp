#include "iotk/codegen.hpp"

#include <cctype>
#include <algorithm>
#include <map>
#include <optional>

#include "iotk/numfmt.hpp"
#include "iotk/runtime.hpp"
#include "iotk/validate.hpp"

namespace iotk {

namespace {

// ---------------------------------------------------------------------------
// Templates. Placeholders are {{name}}; every placeholder must be bound.
// ---------------------------------------------------------------------------

constexpr std::string_view kHeader = R"(# Function template script for {{object}} ({{target}}).
# Generated by iotk. The toolkit emits this file and never runs it.
#
)";

constexpr std::string_view kBranchInline = R"(    if {{condition}}:{{condition_comment}}
        {{high_statement}}
    else:
        {{low_statement}}
)";

constexpr std::string_view kBranchAssign = R"(    if {{condition}}:{{condition_comment}}
        {{variable}} = {{high}}
    else:
        {{variable}} = {{low}}
)";

constexpr std::string_view kCumulativeUpdate = R"(    pressed = bool({{receptor}})
    if pressed and not _template_state["pressed"]:
        _template_state["effector"] = min(max(_template_state["effector"] + {{delta}}, {{clamp_min}}), {{clamp_max}})
    _template_state["pressed"] = pressed
)";

constexpr std::string_view kCumulativeState = R"(_template_state = {"effector": {{initial}}, "pressed": False})";

// Isaac Sim: receptor and effector states are articulation joint positions.
constexpr std::string_view kIsaacRead = R"(    joint_state = scene[{{object_key}}].data.joint_pos # get receptor state
)";
constexpr std::string_view kIsaacReceptor = "joint_state[0][{{receptor_dof}}]";
constexpr std::string_view kIsaacJointTarget =
    "scene[{{object_key}}].set_joint_position_target(torch.Tensor([[{{value}}{{receptor_column}}]]), "
    "joint_ids=[{{joint_ids}}]) # change effector state";
constexpr std::string_view kIsaacPrimAttribute =
    "stage.GetPrimAtPath({{prim_path}}).GetAttribute({{attribute}}).Set({{value}}) # change effector state";

// BEHAVIOR: object states; toggles for discrete receptors, joints otherwise.
constexpr std::string_view kBehaviorToggled = "{{object}}.states[object_states.ToggledOn].get_value()";
constexpr std::string_view kBehaviorJoint = "{{object}}.states[object_states.Joint].get_value()";
constexpr std::string_view kBehaviorVisible = "{{effector}}.visible = {{value}}";
constexpr std::string_view kBehaviorIntensity = "{{effector}}.intensity = {{value}}";
constexpr std::string_view kBehaviorTemperature = "{{effector}}.states[object_states.Temperature].set_value({{value}})";
constexpr std::string_view kBehaviorJointTarget = "{{object}}.joints[{{joint_key}}].set_pos({{value}})";
constexpr std::string_view kBehaviorDroplet = "{{effector}}.states[object_states.ParticleSource].droplet_size = {{value}}";

// Genesis: the receptor is a dof of the entity; effects are applied once
// after the mapping assigns the effector value.
constexpr std::string_view kGenesisRead = R"(    {{object}}_position = {{object}}.get_dofs_position(dofs_idx)[0]
)";
constexpr std::string_view kGenesisLinear =
    "change_rate * ({{object}}_position - joint_limits[dofs_idx[0], 0]) + {{base_name}}";
constexpr std::string_view kGenesisEmit = R"(    emitter.emit(
        pos=emitter_position_recentered,
        direction=np.array([0.0, 0.0, -1.0]),
        speed=5,
        droplet_shape="circle",
        droplet_size=droplet_size,
    )
)";
constexpr std::string_view kGenesisControl =
    "    {{object}}.control_dofs_position(np.array([effector_target]), effector_dofs_idx)\n";
constexpr std::string_view kGenesisLight = "    light.intensity = intensity\n";
constexpr std::string_view kGenesisHeat = "    heat_source.temperature = temperature\n";

using Vars = std::map<std::string, std::string>;

std::string render(std::string_view tmpl, const Vars& vars) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t open = tmpl.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      return out;
    }
    const std::size_t close = tmpl.find("}}", open);
    out.append(tmpl.substr(pos, open - pos));
    const std::string key(tmpl.substr(open + 2, close - open - 2));
    auto it = vars.find(key);
    if (it == vars.end()) throw UnsupportedTemplate("template placeholder '" + key + "' is unbound");
    out += it->second;
    pos = close + 2;
  }
}

// ---------------------------------------------------------------------------
// Python text helpers
// ---------------------------------------------------------------------------

std::string py_ident(std::string_view name) {
  std::string out;
  for (char c : name) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out.front()))) out.insert(out.begin(), '_');
  return out;
}

std::string py_str(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

std::string py_real(double v) { return format_real(v); }

std::string py_bool(double v) { return v != 0.0 ? "True" : "False"; }

std::string py_tuple(const Vec3& v) {
  return "(" + py_real(v.x()) + ", " + py_real(v.y()) + ", " + py_real(v.z()) + ")";
}

std::string manifest_vec(const Vec3& v) {
  return format_real(v.x()) + " " + format_real(v.y()) + " " + format_real(v.z());
}

// ---------------------------------------------------------------------------
// Emission context
// ---------------------------------------------------------------------------

/// How a target writes the effector value.
struct EffectWriter {
  std::vector<std::string> imports;
  std::vector<std::string> module_lines;
  std::vector<std::string> params;    // function parameters
  std::vector<std::string> setup;     // body lines before the mapping
  std::string inline_statement;       // template over {{value}}; empty means assign style
  std::string variable;               // assign style: variable the mapping sets
  std::string apply_block;            // assign style: applied after the mapping
  std::string base_name;              // genesis linear base constant
  bool boolean_values = false;        // branch constants printed as True/False
};

struct Context {
  const InteractiveObjectAsset& asset;
  const Target& target;
  MappingSpec mapping;
  std::optional<Vec3> anchor;
  std::string object;      // python identifier
  std::string effector;    // python identifier
  std::string object_key;  // python string literal
};

std::optional<std::size_t> dof_index(const InteractiveObjectAsset& asset, std::string_view part_id) {
  std::size_t dof = 0;
  for (const Part& p : asset.parts) {
    if (p.joint.is_fixed()) continue;
    if (p.id == part_id) return dof;
    ++dof;
  }
  return std::nullopt;
}

std::size_t require_dof(const InteractiveObjectAsset& asset, std::string_view part_id, const Target& target) {
  auto dof = dof_index(asset, part_id);
  if (!dof)
    throw UnsupportedTemplate(target.id + " reads joint state, but part '" + std::string(part_id) +
                              "' has a fixed joint");
  return *dof;
}

std::string anchor_constant(const Context& ctx, const char* name) {
  const bool derived = [&] {
    const auto& e = ctx.asset.function_template.effect.params;
    if (auto* ill = std::get_if<IlluminationEffect>(&e)) return !ill->source_position.has_value();
    if (auto* temp = std::get_if<TemperatureEffect>(&e)) return !temp->heat_source_position.has_value();
    return false;
  }();
  return std::string(name) + " = " + py_tuple(*ctx.anchor) +
         (derived ? "  # bounding-box center of the effector" : "");
}

std::string effect_prim_path(const Context& ctx) {
  return py_str("/World/" + ctx.asset.object_id + "/" + ctx.asset.function_template.effector_id);
}

EffectWriter isaacsim_writer(const Context& ctx) {
  const auto& t = ctx.asset.function_template;
  EffectWriter w;
  w.imports = {"import torch"};
  w.params = {"scene"};
  auto prim = [&](const char* attribute, const char* constant) {
    w.imports.push_back("import omni.usd");
    w.module_lines.push_back(anchor_constant(ctx, constant));
    w.setup.push_back("    stage = omni.usd.get_context().get_stage()");
    w.inline_statement = render(kIsaacPrimAttribute, {{"prim_path", effect_prim_path(ctx)},
                                                      {"attribute", py_str(attribute)},
                                                      {"value", "{{value}}"}});
  };
  switch (t.effect.kind()) {
    case EffectKind::geometry: {
      const auto& g = std::get<GeometryEffect>(t.effect.params);
      const std::size_t receptor_dof = require_dof(ctx.asset, t.receptor_id, ctx.target);
      const std::size_t effector_dof = require_dof(ctx.asset, g.target_joint, ctx.target);
      Vars v{{"object_key", ctx.object_key}, {"value", "{{value}}"}};
      if (receptor_dof == effector_dof) {
        v["receptor_column"] = "";
        v["joint_ids"] = std::to_string(effector_dof);
      } else {
        w.setup.push_back("    receptor_target = joint_state[0][" + std::to_string(receptor_dof) + "]");
        v["receptor_column"] = ", receptor_target";
        v["joint_ids"] = std::to_string(effector_dof) + ", " + std::to_string(receptor_dof);
      }
      w.inline_statement = render(kIsaacJointTarget, v);
      break;
    }
    case EffectKind::illumination:
      prim("inputs:intensity", "LIGHT_POSITION");
      break;
    case EffectKind::temperature:
      prim("iotk:temperature", "HEAT_SOURCE_POSITION");
      break;
    case EffectKind::fluid:
      prim("iotk:droplet_size", "EMITTER_POSITION");
      break;
  }
  return w;
}

EffectWriter behavior_writer(const Context& ctx) {
  const auto& t = ctx.asset.function_template;
  EffectWriter w;
  w.imports = {"from omnigibson import object_states"};
  w.params = {ctx.object, ctx.effector};
  const Vars v{{"object", ctx.object}, {"effector", ctx.effector}, {"value", "{{value}}"}};
  const MappingKind m = ctx.mapping.kind();
  switch (t.effect.kind()) {
    case EffectKind::illumination: {
      w.module_lines.push_back(anchor_constant(ctx, "LIGHT_POSITION"));
      const bool toggle = t.effector_space.is_discrete() && (m == MappingKind::binary || m == MappingKind::step);
      w.boolean_values = toggle;
      w.inline_statement = render(toggle ? kBehaviorVisible : kBehaviorIntensity, v);
      break;
    }
    case EffectKind::temperature:
      w.module_lines.push_back(anchor_constant(ctx, "HEAT_SOURCE_POSITION"));
      w.inline_statement = render(kBehaviorTemperature, v);
      break;
    case EffectKind::geometry: {
      Vars gv = v;
      gv["joint_key"] = py_str(std::get<GeometryEffect>(t.effect.params).target_joint);
      w.inline_statement = render(kBehaviorJointTarget, gv);
      break;
    }
    case EffectKind::fluid:
      w.module_lines.push_back(anchor_constant(ctx, "EMITTER_POSITION"));
      w.inline_statement = render(kBehaviorDroplet, v);
      break;
  }
  return w;
}

EffectWriter genesis_writer(const Context& ctx) {
  const auto& t = ctx.asset.function_template;
  EffectWriter w;
  w.imports = {"import numpy as np"};
  w.params = {ctx.object, "dofs_idx", "joint_limits"};
  switch (t.effect.kind()) {
    case EffectKind::fluid:
      w.module_lines.push_back("emitter_position_recentered = np.array([" + py_real(ctx.anchor->x()) + ", " +
                               py_real(ctx.anchor->y()) + ", " + py_real(ctx.anchor->z()) +
                               "])  # emitter_position as given; no recentering is applied");
      w.params.push_back("emitter");
      w.variable = "droplet_size";
      w.apply_block = std::string(kGenesisEmit);
      w.base_name = "MIN_DROPLET_SIZE";
      break;
    case EffectKind::geometry:
      require_dof(ctx.asset, std::get<GeometryEffect>(t.effect.params).target_joint, ctx.target);
      w.params.push_back("effector_dofs_idx");
      w.variable = "effector_target";
      w.apply_block = render(kGenesisControl, {{"object", ctx.object}});
      w.base_name = "MIN_EFFECTOR_TARGET";
      break;
    case EffectKind::illumination:
      w.module_lines.push_back(anchor_constant(ctx, "LIGHT_POSITION"));
      w.params.push_back("light");
      w.variable = "intensity";
      w.apply_block = std::string(kGenesisLight);
      w.base_name = "MIN_INTENSITY";
      break;
    case EffectKind::temperature:
      w.module_lines.push_back(anchor_constant(ctx, "HEAT_SOURCE_POSITION"));
      w.params.push_back("heat_source");
      w.variable = "temperature";
      w.apply_block = std::string(kGenesisHeat);
      w.base_name = "MIN_TEMPERATURE";
      break;
  }
  return w;
}

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

Manifest build_manifest(const Context& ctx) {
  const auto& t = ctx.asset.function_template;
  Manifest m;
  m.emplace_back("object_id", ctx.asset.object_id);
  m.emplace_back("target", ctx.target.id);
  m.emplace_back("mapping", std::string(to_string(ctx.mapping.kind())));
  m.emplace_back("effect", std::string(to_string(t.effect.kind())));
  m.emplace_back("receptor", t.receptor_id);
  m.emplace_back("effector", t.effector_id);
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, BinaryParams>) {
          m.emplace_back("on_value", format_real(p.on_value));
          m.emplace_back("off_value", format_real(p.off_value));
        } else if constexpr (std::is_same_v<P, StepParams>) {
          m.emplace_back("threshold", format_real(*p.threshold));
          m.emplace_back("low_value", format_real(p.low_value));
          m.emplace_back("high_value", format_real(p.high_value));
        } else if constexpr (std::is_same_v<P, LinearParams>) {
          m.emplace_back("slope", format_real(*p.slope));
          m.emplace_back("offset", format_real(*p.offset));
        } else {
          m.emplace_back("delta", format_real(p.delta));
          m.emplace_back("initial", format_real(p.initial));
          m.emplace_back("clamp_min", format_real(p.clamp_min));
          m.emplace_back("clamp_max", format_real(p.clamp_max));
        }
      },
      ctx.mapping.params);
  std::visit(
      [&](const auto& e) {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, GeometryEffect>) {
          m.emplace_back("target_joint", e.target_joint);
        } else if constexpr (std::is_same_v<E, IlluminationEffect>) {
          m.emplace_back("anchor", manifest_vec(*ctx.anchor));
          m.emplace_back("intensity_min", format_real(e.intensity_range.min));
          m.emplace_back("intensity_max", format_real(e.intensity_range.max));
        } else if constexpr (std::is_same_v<E, TemperatureEffect>) {
          m.emplace_back("anchor", manifest_vec(*ctx.anchor));
          m.emplace_back("temp_min", format_real(e.temp_range.min));
          m.emplace_back("temp_max", format_real(e.temp_range.max));
        } else {
          m.emplace_back("anchor", manifest_vec(*ctx.anchor));
          m.emplace_back("droplet_size_min", format_real(e.droplet_size_range.min));
          m.emplace_back("droplet_size_max", format_real(e.droplet_size_range.max));
        }
      },
      t.effect.params);
  return m;
}

// ---------------------------------------------------------------------------
// Body assembly
// ---------------------------------------------------------------------------

std::string receptor_expression(const Context& ctx) {
  const auto& t = ctx.asset.function_template;
  switch (ctx.target.name) {
    case TargetName::isaacsim:
      return render(kIsaacReceptor,
                    {{"receptor_dof", std::to_string(require_dof(ctx.asset, t.receptor_id, ctx.target))}});
    case TargetName::behavior:
      return render(t.receptor_space.is_discrete() ? kBehaviorToggled : kBehaviorJoint, {{"object", ctx.object}});
    case TargetName::genesis:
      require_dof(ctx.asset, t.receptor_id, ctx.target);
      return ctx.object + "_position";
  }
  return {};
}

std::string read_block(const Context& ctx) {
  switch (ctx.target.name) {
    case TargetName::isaacsim:
      return render(kIsaacRead, {{"object_key", ctx.object_key}});
    case TargetName::genesis:
      return render(kGenesisRead, {{"object", ctx.object}});
    case TargetName::behavior:
      return {};
  }
  return {};
}

std::string statement(const EffectWriter& w, const std::string& value) {
  return render(w.inline_statement, {{"value", value}});
}

std::string body(const Context& ctx, const EffectWriter& w, std::vector<std::string>& module_lines) {
  const std::string receptor = receptor_expression(ctx);
  const bool assign = w.inline_statement.empty();
  std::string out;

  auto branch = [&](const std::string& condition, const std::string& comment, double high, double low) {
    if (assign) {
      out += render(kBranchAssign, {{"condition", condition},
                                    {"condition_comment", comment},
                                    {"variable", w.variable},
                                    {"high", py_real(high)},
                                    {"low", py_real(low)}});
      out += w.apply_block;
    } else {
      auto value = [&](double v) { return w.boolean_values ? py_bool(v) : py_real(v); };
      out += render(kBranchInline, {{"condition", condition},
                                    {"condition_comment", comment},
                                    {"high_statement", statement(w, value(high))},
                                    {"low_statement", statement(w, value(low))}});
    }
  };

  switch (ctx.mapping.kind()) {
    case MappingKind::binary: {
      const auto& p = std::get<BinaryParams>(ctx.mapping.params);
      branch(receptor, "", p.on_value, p.off_value);
      break;
    }
    case MappingKind::step: {
      const auto& p = std::get<StepParams>(ctx.mapping.params);
      branch(receptor + " > " + py_real(*p.threshold), " # check with THRESHOLD", p.high_value, p.low_value);
      break;
    }
    case MappingKind::linear: {
      const auto& p = std::get<LinearParams>(ctx.mapping.params);
      if (ctx.target.name == TargetName::genesis) {
        const Part* r = ctx.asset.receptor();
        const double base = *p.slope * r->joint.range_min + *p.offset;
        module_lines.push_back("change_rate = " + py_real(*p.slope));
        module_lines.push_back(w.base_name + " = " + py_real(base));
        const std::string expr = render(kGenesisLinear, {{"object", ctx.object}, {"base_name", w.base_name}});
        out += "    " + w.variable + " = " + expr + "\n" + w.apply_block;
      } else {
        const std::string expr = py_real(*p.slope) + " * " + receptor + " + " + py_real(*p.offset);
        out += assign ? "    " + w.variable + " = " + expr + "\n" + w.apply_block : "    " + statement(w, expr) + "\n";
      }
      break;
    }
    case MappingKind::cumulative: {
      const auto& p = std::get<CumulativeParams>(ctx.mapping.params);
      module_lines.push_back(render(kCumulativeState, {{"initial", py_real(p.initial)}}));
      out += render(kCumulativeUpdate, {{"receptor", receptor},
                                        {"delta", py_real(p.delta)},
                                        {"clamp_min", py_real(p.clamp_min)},
                                        {"clamp_max", py_real(p.clamp_max)}});
      const std::string current = "_template_state[\"effector\"]";
      out += assign ? "    " + w.variable + " = " + current + "\n" + w.apply_block
                    : "    " + statement(w, current) + "\n";
      break;
    }
  }
  return out;
}

std::optional<Vec3> resolve_anchor(const InteractiveObjectAsset& asset, const PartGeometry* effector_geometry) {
  auto from_geometry = [&]() -> Vec3 {
    if (effector_geometry == nullptr)
      throw InvalidArgument("asset '" + asset.object_id +
                            "' omits the effect source position; effector geometry is required to derive it");
    return compute_effect_anchor(*effector_geometry);
  };
  const auto& e = asset.function_template.effect.params;
  if (auto* ill = std::get_if<IlluminationEffect>(&e))
    return ill->source_position ? *ill->source_position : from_geometry();
  if (auto* temp = std::get_if<TemperatureEffect>(&e))
    return temp->heat_source_position ? *temp->heat_source_position : from_geometry();
  if (auto* fluid = std::get_if<FluidEffect>(&e)) return fluid->emitter_position;
  return std::nullopt;
}

std::vector<Target> make_targets() {
  std::vector<Target> targets(3);
  targets[0].name = TargetName::genesis;
  targets[0].id = "genesis";
  targets[0].capabilities = {EffectKind::fluid};
  targets[0].shebang = "#!/usr/bin/env python3";
  targets[1].name = TargetName::isaacsim;
  targets[1].id = "isaacsim";
  targets[1].capabilities = {EffectKind::geometry};
  // Isaac Sim scripts run under the simulator's own interpreter.
  targets[2].name = TargetName::behavior;
  targets[2].id = "behavior";
  targets[2].capabilities = {EffectKind::illumination, EffectKind::temperature};
  targets[2].shebang = "#!/usr/bin/env python3";
  return targets;
}

}  // namespace

const std::vector<Target>& list_targets() {
  static const std::vector<Target> targets = make_targets();
  return targets;
}

const Target* find_target(std::string_view id) {
  for (const Target& t : list_targets())
    if (t.id == id) return &t;
  return nullptr;
}

Vec3 compute_effect_anchor(const PartGeometry& geometry) {
  if (geometry.points.empty()) throw InvalidArgument("cannot compute an anchor for empty geometry");
  Vec3 lo = geometry.points.front();
  Vec3 hi = lo;
  for (const Vec3& p : geometry.points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (lo + hi) / 2.0;
}

bool needs_effector_geometry(const InteractiveObjectAsset& asset) {
  const auto& e = asset.function_template.effect.params;
  if (auto* ill = std::get_if<IlluminationEffect>(&e)) return !ill->source_position;
  if (auto* temp = std::get_if<TemperatureEffect>(&e)) return !temp->heat_source_position;
  return false;
}

EmittedScript emit_script(const InteractiveObjectAsset& asset, const Target& target,
                          const PartGeometry* effector_geometry) {
  const ValidationReport report = validate_asset(asset);
  if (report.has_errors())
    throw InvalidArgument("asset '" + asset.object_id + "' does not validate: " + report.errors().front().message);
  const InteractiveObjectAsset& canonical = report.canonical;

  Context ctx{canonical,
              target,
              resolve_mapping(canonical.function_template),
              resolve_anchor(canonical, effector_geometry),
              py_ident(canonical.object_id),
              py_ident(canonical.function_template.effector_id),
              py_str(canonical.object_id)};

  EffectWriter writer;
  switch (target.name) {
    case TargetName::isaacsim:
      writer = isaacsim_writer(ctx);
      break;
    case TargetName::behavior:
      writer = behavior_writer(ctx);
      break;
    case TargetName::genesis:
      writer = genesis_writer(ctx);
      break;
  }
  if (writer.inline_statement.empty() && writer.variable.empty())
    throw UnsupportedTemplate("no template registered for " + std::string(to_string(ctx.mapping.kind())) + "/" +
                              std::string(to_string(canonical.function_template.effect.kind())) + "/" + target.id);

  EmittedScript script;
  script.target = target;
  script.manifest = build_manifest(ctx);

  std::vector<std::string> module_lines = writer.module_lines;
  const std::string function_body = read_block(ctx) + [&] {
    std::string setup;
    for (const std::string& line : writer.setup) setup += line + "\n";
    return setup;
  }() + body(ctx, writer, module_lines);

  std::string& out = script.source_text;
  if (!target.shebang.empty()) out += target.shebang + "\n";
  out += render(kHeader, {{"object", py_str(canonical.object_id)}, {"target", target.id}});
  out += "# manifest-begin\n";
  for (const auto& [key, value] : script.manifest) out += "# " + key + ": " + value + "\n";
  out += "# manifest-end\n";
  std::vector<std::string> imports;
  for (const std::string& imp : writer.imports)
    if (std::find(imports.begin(), imports.end(), imp) == imports.end()) imports.push_back(imp);
  for (const std::string& imp : imports) out += imp + "\n";
  if (!module_lines.empty()) {
    out += "\n";
    for (const std::string& line : module_lines) out += line + "\n";
  }
  std::string params;
  for (std::size_t i = 0; i < writer.params.size(); ++i) params += (i ? ", " : "") + writer.params[i];
  out += "\n\ndef apply_function_template(" + params + "):\n";
  out += function_body;
  return script;
}

std::string script_file_name(const InteractiveObjectAsset& asset, const Target& target) {
  return asset.object_id + "." + target.id + "." + target.extension;
}

Manifest parse_manifest(std::string_view source_text) {
  Manifest m;
  bool inside = false;
  bool closed = false;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= source_text.size() && !closed) {
    std::size_t end = source_text.find('\n', start);
    if (end == std::string_view::npos) end = source_text.size();
    const std::string_view line = source_text.substr(start, end - start);
    ++line_no;
    if (line == "# manifest-begin") {
      if (inside) throw SyntaxError("nested manifest-begin", line_no);
      inside = true;
    } else if (line == "# manifest-end") {
      if (!inside) throw SyntaxError("manifest-end without manifest-begin", line_no);
      closed = true;
    } else if (inside) {
      if (line.substr(0, 2) != "# ") throw SyntaxError("manifest line must start with \"# \"", line_no);
      const std::string_view entry = line.substr(2);
      const std::size_t colon = entry.find(": ");
      if (colon == std::string_view::npos) throw SyntaxError("manifest line needs \"key: value\"", line_no);
      m.emplace_back(std::string(entry.substr(0, colon)), std::string(entry.substr(colon + 2)));
    }
    if (end == source_text.size()) break;
    start = end + 1;
  }
  if (!closed) throw SyntaxError("script has no complete manifest block", 0);
  return m;
}

}  // namespace iotk
