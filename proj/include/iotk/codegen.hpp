#pragma once

#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "iotk/errors.hpp"
#include "iotk/types.hpp"

namespace iotk {

enum class TargetName { genesis, isaacsim, behavior };

/// A simulator that scripts can be emitted for. `capabilities` lists the
/// physical effects with a demonstrated, golden-tested pairing; every effect
/// is still accepted for every target.
struct Target {
  TargetName name = TargetName::genesis;
  std::string id;  // "genesis", "isaacsim", "behavior"
  std::set<EffectKind> capabilities;
  std::string extension = "script";
  std::string shebang;  // first line of the script when nonempty
};

/// The registered targets, in a fixed order: genesis, isaacsim, behavior.
const std::vector<Target>& list_targets();

/// nullptr when no target has that id.
const Target* find_target(std::string_view id);

/// No template is registered for a (mapping, effect, target) triple, or the
/// asset lacks something the target's accessors need (e.g. a receptor dof).
class UnsupportedTemplate : public Error {
 public:
  using Error::Error;
};

using Manifest = std::vector<std::pair<std::string, std::string>>;

struct EmittedScript {
  std::string source_text;
  Target target;
  Manifest manifest;  // also embedded in source_text as comments
};

/// Center of the axis-aligned bounding box of the points. Throws
/// InvalidArgument on empty geometry.
Vec3 compute_effect_anchor(const PartGeometry& geometry);

/// True when the effect's source position is omitted, so emit_script must be
/// given the effector geometry.
bool needs_effector_geometry(const InteractiveObjectAsset& asset);

/// Compiles the asset's function template into a script for `target`.
///
/// Omitted threshold/slope/offset are derived; an omitted light or heat
/// source position is the bounding-box center of `effector_geometry`, which
/// must then be provided. Output is a pure function of the inputs.
///
/// Throws InvalidArgument for an invalid asset or missing geometry, and
/// UnsupportedTemplate when the triple cannot be emitted.
EmittedScript emit_script(const InteractiveObjectAsset& asset, const Target& target,
                          const PartGeometry* effector_geometry = nullptr);

/// "<object_id>.<target>.<extension>"
std::string script_file_name(const InteractiveObjectAsset& asset, const Target& target);

/// Reads the manifest block back out of an emitted script. Throws
/// SyntaxError if the block is missing or malformed.
Manifest parse_manifest(std::string_view source_text);

}  // namespace iotk
