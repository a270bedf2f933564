#include "iotk/types.hpp"

#include <algorithm>
#include <utility>

namespace iotk {

StateSpace StateSpace::discrete(std::vector<std::string> labels) {
  StateSpace s;
  s.kind = StateKind::discrete;
  s.labels = std::move(labels);
  return s;
}

StateSpace StateSpace::continuous(double min, double max, StateUnit unit) {
  StateSpace s;
  s.kind = StateKind::continuous;
  s.min = min;
  s.max = max;
  s.unit = unit;
  return s;
}

const Part* InteractiveObjectAsset::find_part(std::string_view id) const {
  auto it = std::find_if(parts.begin(), parts.end(), [&](const Part& p) { return p.id == id; });
  return it == parts.end() ? nullptr : &*it;
}

const Part* InteractiveObjectAsset::receptor() const { return find_part(function_template.receptor_id); }

const Part* InteractiveObjectAsset::effector() const { return find_part(function_template.effector_id); }

namespace {

template <typename E, std::size_t N>
using NameTable = std::array<std::pair<E, std::string_view>, N>;

constexpr NameTable<StateKind, 2> kStateKinds{{
    {StateKind::discrete, "discrete"},
    {StateKind::continuous, "continuous"},
}};

constexpr NameTable<StateUnit, 5> kStateUnits{{
    {StateUnit::radian, "radian"},
    {StateUnit::meter, "meter"},
    {StateUnit::celsius, "celsius"},
    {StateUnit::intensity_fraction, "intensity-fraction"},
    {StateUnit::flow_fraction, "flow-fraction"},
}};

constexpr NameTable<JointType, 3> kJointTypes{{
    {JointType::fixed, "fixed"},
    {JointType::prismatic, "prismatic"},
    {JointType::revolute, "revolute"},
}};

constexpr NameTable<MappingKind, 4> kMappingKinds{{
    {MappingKind::binary, "binary"},
    {MappingKind::step, "step"},
    {MappingKind::linear, "linear"},
    {MappingKind::cumulative, "cumulative"},
}};

constexpr NameTable<EffectKind, 4> kEffectKinds{{
    {EffectKind::geometry, "geometry"},
    {EffectKind::illumination, "illumination"},
    {EffectKind::temperature, "temperature"},
    {EffectKind::fluid, "fluid"},
}};

constexpr NameTable<PartRole, 3> kPartRoles{{
    {PartRole::receptor, "receptor"},
    {PartRole::effector, "effector"},
    {PartRole::base, "base"},
}};

constexpr NameTable<GeometryFormat, 3> kGeometryFormats{{
    {GeometryFormat::xyz, "xyz"},
    {GeometryFormat::ply_ascii, "ply-ascii"},
    {GeometryFormat::obj, "obj"},
}};

template <typename E, std::size_t N>
std::string_view name_of(const NameTable<E, N>& table, E value) {
  for (const auto& [e, name] : table)
    if (e == value) return name;
  return "?";
}

template <typename E, std::size_t N>
std::optional<E> value_of(const NameTable<E, N>& table, std::string_view name) {
  for (const auto& [e, n] : table)
    if (n == name) return e;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(StateKind v) { return name_of(kStateKinds, v); }
std::string_view to_string(StateUnit v) { return name_of(kStateUnits, v); }
std::string_view to_string(JointType v) { return name_of(kJointTypes, v); }
std::string_view to_string(MappingKind v) { return name_of(kMappingKinds, v); }
std::string_view to_string(EffectKind v) { return name_of(kEffectKinds, v); }
std::string_view to_string(PartRole v) { return name_of(kPartRoles, v); }
std::string_view to_string(GeometryFormat v) { return name_of(kGeometryFormats, v); }

std::optional<StateKind> state_kind_from_string(std::string_view s) { return value_of(kStateKinds, s); }
std::optional<StateUnit> state_unit_from_string(std::string_view s) { return value_of(kStateUnits, s); }
std::optional<JointType> joint_type_from_string(std::string_view s) { return value_of(kJointTypes, s); }
std::optional<MappingKind> mapping_kind_from_string(std::string_view s) { return value_of(kMappingKinds, s); }
std::optional<EffectKind> effect_kind_from_string(std::string_view s) { return value_of(kEffectKinds, s); }
std::optional<PartRole> part_role_from_string(std::string_view s) { return value_of(kPartRoles, s); }
std::optional<GeometryFormat> geometry_format_from_string(std::string_view s) {
  return value_of(kGeometryFormats, s);
}

}  // namespace iotk
