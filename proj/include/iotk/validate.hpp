#pragma once

#include <set>
#include <string>
#include <vector>

#include "iotk/types.hpp"

namespace iotk {

enum class Severity { error, warning };

/// One violated invariant. `code` is a stable machine-readable identifier.
struct Violation {
  std::string code;
  std::string message;
  Severity severity = Severity::error;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Result of validate_asset. An empty violation list means the asset was
/// already canonical; `canonical` always holds the auto-fixed copy (unit
/// joint axes).
struct ValidationReport {
  std::vector<Violation> violations;
  InteractiveObjectAsset canonical;

  bool empty() const { return violations.empty(); }
  bool has_errors() const;
  std::vector<Violation> errors() const;
};

namespace codes {
inline constexpr const char* kMissingObjectId = "missing-object-id";
inline constexpr const char* kEmptyPartId = "empty-part-id";
inline constexpr const char* kDuplicatePartId = "duplicate-part-id";
inline constexpr const char* kDuplicateReceptor = "duplicate-receptor";
inline constexpr const char* kDuplicateEffector = "duplicate-effector";
inline constexpr const char* kMissingReceptor = "missing-receptor";
inline constexpr const char* kMissingEffector = "missing-effector";
inline constexpr const char* kAxisNormalized = "axis-normalized";
inline constexpr const char* kAxisInvalid = "axis-invalid";
inline constexpr const char* kOriginNotFinite = "origin-not-finite";
inline constexpr const char* kRangeInvalid = "range-invalid";
inline constexpr const char* kStateSpaceInvalid = "state-space-invalid";
inline constexpr const char* kTemplatePartUnresolved = "template-part-unresolved";
inline constexpr const char* kTemplateRoleMismatch = "template-role-mismatch";
inline constexpr const char* kTemplateSamePart = "template-same-part";
inline constexpr const char* kMappingIncompatible = "mapping-incompatible";
inline constexpr const char* kMappingParamNotFinite = "mapping-param-not-finite";
inline constexpr const char* kBinaryLabelCount = "binary-label-count";
inline constexpr const char* kStepThresholdOutOfRange = "step-threshold-out-of-range";
inline constexpr const char* kLinearSlopeInvalid = "linear-slope-invalid";
inline constexpr const char* kCumulativeInitialOutOfRange = "cumulative-initial-out-of-range";
inline constexpr const char* kCumulativeDeltaZero = "cumulative-delta-zero";
inline constexpr const char* kEffectRangeInvalid = "effect-range-invalid";
inline constexpr const char* kEffectPositionNotFinite = "effect-position-not-finite";
inline constexpr const char* kEffectTargetJoint = "effect-target-joint";
inline constexpr const char* kGeometryEmpty = "geometry-empty";
inline constexpr const char* kGeometryNotFinite = "geometry-not-finite";
inline constexpr const char* kGeometryFaceOutOfBounds = "geometry-face-out-of-bounds";
}  // namespace codes

/// Checks every structural invariant of the asset. Never throws; violations
/// are returned as data.
ValidationReport validate_asset(const InteractiveObjectAsset& asset);

/// Point-set invariants: nonempty, finite coordinates, face indices in bounds.
std::vector<Violation> validate_geometry(const PartGeometry& geometry);

/// Admissible mapping kinds for a receptor/effector state-space pair.
///
///   (discrete,   discrete,   stateless) -> {binary}
///   (continuous, discrete,   stateless) -> {step}
///   (continuous, continuous, stateless) -> {linear}
///   (discrete,   discrete,   stateful)  -> {cumulative}
///
/// Every other combination yields the empty set.
std::set<MappingKind> classify_mapping(const StateSpace& receptor, const StateSpace& effector,
                                       bool stateful);

/// Only cumulative mappings read the previous effector state.
constexpr bool is_stateful(MappingKind kind) { return kind == MappingKind::cumulative; }

}  // namespace iotk
