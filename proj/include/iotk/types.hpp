#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace iotk {

using Vec3 = Eigen::Vector3d;

// ---------------------------------------------------------------------------
// State spaces
// ---------------------------------------------------------------------------

enum class StateKind { discrete, continuous };

enum class StateUnit { radian, meter, celsius, intensity_fraction, flow_fraction };

/// Receptor or effector state space. Discrete spaces are ordered label lists,
/// encoded as the integer index 0..n-1 at runtime.
struct StateSpace {
  StateKind kind = StateKind::continuous;
  std::vector<std::string> labels;  // discrete only
  double min = 0.0;                 // continuous only
  double max = 1.0;
  StateUnit unit = StateUnit::radian;

  static StateSpace discrete(std::vector<std::string> labels);
  static StateSpace continuous(double min, double max, StateUnit unit);

  bool is_discrete() const { return kind == StateKind::discrete; }
  bool is_continuous() const { return kind == StateKind::continuous; }

  friend bool operator==(const StateSpace&, const StateSpace&) = default;
};

// ---------------------------------------------------------------------------
// Joints
// ---------------------------------------------------------------------------

enum class JointType { fixed, prismatic, revolute };

/// Articulation of a single part relative to an implicit base: type, unit
/// axis, origin (meters) and range of motion (radians or meters).
struct JointSpec {
  JointType type = JointType::fixed;
  Vec3 axis = Vec3::UnitZ();
  Vec3 origin = Vec3::Zero();
  double range_min = 0.0;
  double range_max = 0.0;

  bool is_fixed() const { return type == JointType::fixed; }

  friend bool operator==(const JointSpec&, const JointSpec&) = default;
};

// ---------------------------------------------------------------------------
// Mappings
// ---------------------------------------------------------------------------

enum class MappingKind { binary, step, linear, cumulative };

struct BinaryParams {
  double on_value = 1.0;
  double off_value = 0.0;
  friend bool operator==(const BinaryParams&, const BinaryParams&) = default;
};

/// `threshold` may be omitted in the document; it is then derived from the
/// receptor range (see runtime::derive_step_threshold).
struct StepParams {
  std::optional<double> threshold;
  double low_value = 0.0;
  double high_value = 1.0;
  friend bool operator==(const StepParams&, const StepParams&) = default;
};

/// `slope` and `offset` may be omitted; they are then derived from the
/// receptor/effector ranges (see runtime::derive_linear_slope).
struct LinearParams {
  std::optional<double> slope;
  std::optional<double> offset;
  friend bool operator==(const LinearParams&, const LinearParams&) = default;
};

struct CumulativeParams {
  double delta = 1.0;
  double initial = 0.0;
  double clamp_min = 0.0;
  double clamp_max = 1.0;
  friend bool operator==(const CumulativeParams&, const CumulativeParams&) = default;
};

struct MappingSpec {
  std::variant<BinaryParams, StepParams, LinearParams, CumulativeParams> params;

  MappingKind kind() const { return static_cast<MappingKind>(params.index()); }

  friend bool operator==(const MappingSpec&, const MappingSpec&) = default;
};

// ---------------------------------------------------------------------------
// Physical effects
// ---------------------------------------------------------------------------

enum class EffectKind { geometry, illumination, temperature, fluid };

struct ValueRange {
  double min = 0.0;
  double max = 0.0;
  friend bool operator==(const ValueRange&, const ValueRange&) = default;
};

struct GeometryEffect {
  std::string target_joint;  // part id
  friend bool operator==(const GeometryEffect&, const GeometryEffect&) = default;
};

/// Light source position defaults to the center of the effector's bounding box.
struct IlluminationEffect {
  std::optional<Vec3> source_position;
  ValueRange intensity_range;
  friend bool operator==(const IlluminationEffect&, const IlluminationEffect&) = default;
};

/// Heat source position defaults to the center of the effector's bounding box.
struct TemperatureEffect {
  std::optional<Vec3> heat_source_position;
  ValueRange temp_range;  // celsius
  friend bool operator==(const TemperatureEffect&, const TemperatureEffect&) = default;
};

struct FluidEffect {
  Vec3 emitter_position = Vec3::Zero();
  ValueRange droplet_size_range;
  friend bool operator==(const FluidEffect&, const FluidEffect&) = default;
};

struct PhysicalEffectSpec {
  std::variant<GeometryEffect, IlluminationEffect, TemperatureEffect, FluidEffect> params;

  EffectKind kind() const { return static_cast<EffectKind>(params.index()); }

  friend bool operator==(const PhysicalEffectSpec&, const PhysicalEffectSpec&) = default;
};

// ---------------------------------------------------------------------------
// Parts, geometry, assets
// ---------------------------------------------------------------------------

enum class PartRole { receptor, effector, base };

enum class GeometryFormat { xyz, ply_ascii, obj };

/// Reference to a geometry file, resolved relative to the asset document.
struct GeometryRef {
  std::string file;
  GeometryFormat format = GeometryFormat::xyz;
  friend bool operator==(const GeometryRef&, const GeometryRef&) = default;
};

struct PartGeometry {
  std::vector<Vec3> points;  // meters
  std::vector<std::array<std::size_t, 3>> faces;
};

struct Part {
  std::string id;
  PartRole role = PartRole::base;
  GeometryRef geometry;
  JointSpec joint;
  friend bool operator==(const Part&, const Part&) = default;
};

struct FunctionTemplate {
  std::string receptor_id;
  std::string effector_id;
  StateSpace receptor_space;
  StateSpace effector_space;
  MappingSpec mapping;
  PhysicalEffectSpec effect;
  friend bool operator==(const FunctionTemplate&, const FunctionTemplate&) = default;
};

struct InteractiveObjectAsset {
  std::string format_version = "1.0";
  std::string object_id;
  std::vector<Part> parts;
  FunctionTemplate function_template;
  std::map<std::string, std::string> metadata;

  const Part* find_part(std::string_view id) const;
  const Part* receptor() const;
  const Part* effector() const;

  friend bool operator==(const InteractiveObjectAsset&, const InteractiveObjectAsset&) = default;
};

// ---------------------------------------------------------------------------
// Enum <-> text. Names are the document spellings.
// ---------------------------------------------------------------------------

std::string_view to_string(StateKind);
std::string_view to_string(StateUnit);
std::string_view to_string(JointType);
std::string_view to_string(MappingKind);
std::string_view to_string(EffectKind);
std::string_view to_string(PartRole);
std::string_view to_string(GeometryFormat);

std::optional<StateKind> state_kind_from_string(std::string_view);
std::optional<StateUnit> state_unit_from_string(std::string_view);
std::optional<JointType> joint_type_from_string(std::string_view);
std::optional<MappingKind> mapping_kind_from_string(std::string_view);
std::optional<EffectKind> effect_kind_from_string(std::string_view);
std::optional<PartRole> part_role_from_string(std::string_view);
std::optional<GeometryFormat> geometry_format_from_string(std::string_view);

inline constexpr std::array<MappingKind, 4> kAllMappingKinds = {
    MappingKind::binary, MappingKind::step, MappingKind::linear, MappingKind::cumulative};
inline constexpr std::array<EffectKind, 4> kAllEffectKinds = {
    EffectKind::geometry, EffectKind::illumination, EffectKind::temperature, EffectKind::fluid};

}  // namespace iotk
