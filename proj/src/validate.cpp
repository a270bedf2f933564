#include "iotk/validate.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "iotk/numfmt.hpp"
#include "iotk/runtime.hpp"

namespace iotk {

bool ValidationReport::has_errors() const {
  for (const Violation& v : violations)
    if (v.severity == Severity::error) return true;
  return false;
}

std::vector<Violation> ValidationReport::errors() const {
  std::vector<Violation> out;
  for (const Violation& v : violations)
    if (v.severity == Severity::error) out.push_back(v);
  return out;
}

std::set<MappingKind> classify_mapping(const StateSpace& receptor, const StateSpace& effector, bool stateful) {
  const bool rd = receptor.is_discrete();
  const bool ed = effector.is_discrete();
  if (stateful) {
    if (rd && ed) return {MappingKind::cumulative};
    return {};
  }
  if (rd && ed) return {MappingKind::binary};
  if (!rd && ed) return {MappingKind::step};
  if (!rd && !ed) return {MappingKind::linear};
  return {};
}

namespace {

bool finite(const Vec3& v) { return v.allFinite(); }

class Checker {
 public:
  void error(const char* code, std::string message) {
    violations_.push_back({code, std::move(message), Severity::error});
  }
  void warning(const char* code, std::string message) {
    violations_.push_back({code, std::move(message), Severity::warning});
  }
  std::vector<Violation> take() { return std::move(violations_); }

 private:
  std::vector<Violation> violations_;
};

std::string vec_text(const Vec3& v) {
  return "(" + format_real(v.x()) + ", " + format_real(v.y()) + ", " + format_real(v.z()) + ")";
}

void check_joint(Checker& c, Part& part) {
  JointSpec& j = part.joint;
  const std::string where = "part '" + part.id + "' joint";
  const double norm = j.axis.norm();
  if (!finite(j.axis) || norm == 0.0) {
    c.error(codes::kAxisInvalid, where + " axis " + vec_text(j.axis) + " is not a finite nonzero vector");
  } else if (std::abs(norm - 1.0) > 1e-9) {
    c.warning(codes::kAxisNormalized, where + " axis " + vec_text(j.axis) + " normalized to unit length");
    j.axis /= norm;
  }
  if (!finite(j.origin)) c.error(codes::kOriginNotFinite, where + " origin is not finite");
  if (!j.is_fixed()) {
    if (!std::isfinite(j.range_min) || !std::isfinite(j.range_max))
      c.error(codes::kRangeInvalid, where + " range is not finite");
    else if (j.range_min > j.range_max)
      c.error(codes::kRangeInvalid, where + " range min " + format_real(j.range_min) + " exceeds max " +
                                        format_real(j.range_max));
  }
}

void check_space(Checker& c, const StateSpace& s, const std::string& name) {
  if (s.is_continuous()) {
    if (!std::isfinite(s.min) || !std::isfinite(s.max) || !(s.min < s.max))
      c.error(codes::kStateSpaceInvalid,
              name + " continuous range [" + format_real(s.min) + ", " + format_real(s.max) + "] needs finite min < max");
  } else {
    std::set<std::string> distinct(s.labels.begin(), s.labels.end());
    if (s.labels.size() < 2 || distinct.size() != s.labels.size())
      c.error(codes::kStateSpaceInvalid, name + " needs at least two distinct labels");
  }
}

void check_range(Checker& c, const ValueRange& r, const std::string& name) {
  if (!std::isfinite(r.min) || !std::isfinite(r.max) || r.min > r.max)
    c.error(codes::kEffectRangeInvalid, name + " [" + format_real(r.min) + ", " + format_real(r.max) + "] needs finite min <= max");
}

void check_position(Checker& c, const std::optional<Vec3>& p, const std::string& name) {
  if (p && !finite(*p)) c.error(codes::kEffectPositionNotFinite, name + " is not finite");
}

void check_mapping(Checker& c, const FunctionTemplate& t) {
  const MappingKind kind = t.mapping.kind();
  const std::string kind_name(to_string(kind));
  const auto admissible = classify_mapping(t.receptor_space, t.effector_space, is_stateful(kind));
  if (!admissible.contains(kind)) {
    c.error(codes::kMappingIncompatible,
            kind_name + " mapping is not admissible for a " + std::string(to_string(t.receptor_space.kind)) +
                " receptor and " + std::string(to_string(t.effector_space.kind)) + " effector");
    return;
  }

  auto need_finite = [&](double v, const char* field) {
    if (!std::isfinite(v)) {
      c.error(codes::kMappingParamNotFinite, kind_name + " mapping " + field + " is not finite");
      return false;
    }
    return true;
  };

  switch (kind) {
    case MappingKind::binary: {
      const auto& p = std::get<BinaryParams>(t.mapping.params);
      need_finite(p.on_value, "on_value");
      need_finite(p.off_value, "off_value");
      if (t.receptor_space.labels.size() != 2 || t.effector_space.labels.size() != 2)
        c.error(codes::kBinaryLabelCount, "binary mapping needs exactly two labels on each side");
      break;
    }
    case MappingKind::step: {
      const auto& p = std::get<StepParams>(t.mapping.params);
      need_finite(p.low_value, "low_value");
      need_finite(p.high_value, "high_value");
      const double threshold = p.threshold ? *p.threshold : derive_step_threshold(t.receptor_space);
      if (need_finite(threshold, "threshold") &&
          !(threshold > t.receptor_space.min && threshold < t.receptor_space.max))
        c.error(codes::kStepThresholdOutOfRange, "step threshold " + format_real(threshold) +
                                                     " is not strictly inside the receptor range [" +
                                                     format_real(t.receptor_space.min) + ", " +
                                                     format_real(t.receptor_space.max) + "]");
      break;
    }
    case MappingKind::linear: {
      const auto& p = std::get<LinearParams>(t.mapping.params);
      if (p.offset) need_finite(*p.offset, "offset");
      double slope = 0.0;
      if (p.slope) {
        slope = *p.slope;
      } else if (t.receptor_space.max > t.receptor_space.min) {
        slope = derive_linear_slope(t.receptor_space, t.effector_space).slope;
      }
      if (!std::isfinite(slope) || slope == 0.0)
        c.error(codes::kLinearSlopeInvalid, "linear slope " + format_real(slope) + " must be finite and nonzero");
      break;
    }
    case MappingKind::cumulative: {
      const auto& p = std::get<CumulativeParams>(t.mapping.params);
      bool ok = need_finite(p.delta, "delta");
      ok = need_finite(p.initial, "initial") && ok;
      ok = need_finite(p.clamp_min, "clamp_min") && ok;
      ok = need_finite(p.clamp_max, "clamp_max") && ok;
      if (ok && !(p.clamp_min <= p.initial && p.initial <= p.clamp_max))
        c.error(codes::kCumulativeInitialOutOfRange, "cumulative initial " + format_real(p.initial) +
                                                         " is outside [" + format_real(p.clamp_min) + ", " +
                                                         format_real(p.clamp_max) + "]");
      if (p.delta == 0.0) c.error(codes::kCumulativeDeltaZero, "cumulative delta must be nonzero");
      break;
    }
  }
}

void check_effect(Checker& c, const InteractiveObjectAsset& asset) {
  const PhysicalEffectSpec& effect = asset.function_template.effect;
  std::visit(
      [&](const auto& e) {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, GeometryEffect>) {
          const Part* target = asset.find_part(e.target_joint);
          if (target == nullptr)
            c.error(codes::kEffectTargetJoint, "geometry effect target_joint '" + e.target_joint + "' is not a part");
          else if (target->joint.is_fixed())
            c.error(codes::kEffectTargetJoint, "geometry effect target_joint '" + e.target_joint + "' has a fixed joint");
        } else if constexpr (std::is_same_v<E, IlluminationEffect>) {
          check_position(c, e.source_position, "illumination source_position");
          check_range(c, e.intensity_range, "illumination intensity_range");
        } else if constexpr (std::is_same_v<E, TemperatureEffect>) {
          check_position(c, e.heat_source_position, "temperature heat_source_position");
          check_range(c, e.temp_range, "temperature temp_range");
        } else {
          check_position(c, e.emitter_position, "fluid emitter_position");
          check_range(c, e.droplet_size_range, "fluid droplet_size_range");
        }
      },
      effect.params);
}

}  // namespace

ValidationReport validate_asset(const InteractiveObjectAsset& asset) {
  ValidationReport report;
  report.canonical = asset;
  InteractiveObjectAsset& canon = report.canonical;
  Checker c;

  if (asset.object_id.empty()) c.error(codes::kMissingObjectId, "object_id is empty");

  std::set<std::string> ids;
  int receptors = 0;
  int effectors = 0;
  for (Part& part : canon.parts) {
    if (part.id.empty()) c.error(codes::kEmptyPartId, "a part has an empty id");
    if (!ids.insert(part.id).second) c.error(codes::kDuplicatePartId, "part id '" + part.id + "' is used twice");
    if (part.role == PartRole::receptor && ++receptors == 2)
      c.error(codes::kDuplicateReceptor, "more than one part has role receptor");
    if (part.role == PartRole::effector && ++effectors == 2)
      c.error(codes::kDuplicateEffector, "more than one part has role effector");
    check_joint(c, part);
  }
  if (receptors == 0) c.error(codes::kMissingReceptor, "no part has role receptor");
  if (effectors == 0) c.error(codes::kMissingEffector, "no part has role effector");

  const FunctionTemplate& t = canon.function_template;
  auto check_ref = [&](const std::string& id, PartRole role, const char* field) {
    const Part* part = canon.find_part(id);
    if (part == nullptr)
      c.error(codes::kTemplatePartUnresolved, std::string("function_template ") + field + " '" + id + "' is not a part");
    else if (part->role != role)
      c.error(codes::kTemplateRoleMismatch, std::string("function_template ") + field + " '" + id + "' has role " +
                                                std::string(to_string(part->role)));
  };
  check_ref(t.receptor_id, PartRole::receptor, "receptor");
  check_ref(t.effector_id, PartRole::effector, "effector");
  if (t.receptor_id == t.effector_id)
    c.error(codes::kTemplateSamePart, "function_template receptor and effector are the same part");

  check_space(c, t.receptor_space, "receptor_space");
  check_space(c, t.effector_space, "effector_space");
  check_mapping(c, t);
  check_effect(c, canon);

  report.violations = c.take();
  return report;
}

std::vector<Violation> validate_geometry(const PartGeometry& geometry) {
  std::vector<Violation> out;
  if (geometry.points.empty()) out.push_back({codes::kGeometryEmpty, "geometry has no points", Severity::error});
  for (std::size_t i = 0; i < geometry.points.size(); ++i) {
    if (!geometry.points[i].allFinite()) {
      out.push_back({codes::kGeometryNotFinite, "point " + std::to_string(i) + " is not finite", Severity::error});
      break;
    }
  }
  for (std::size_t f = 0; f < geometry.faces.size(); ++f) {
    for (std::size_t idx : geometry.faces[f]) {
      if (idx >= geometry.points.size()) {
        out.push_back({codes::kGeometryFaceOutOfBounds,
                       "face " + std::to_string(f) + " references vertex " + std::to_string(idx) + " of " +
                           std::to_string(geometry.points.size()),
                       Severity::error});
        break;
      }
    }
  }
  return out;
}

}  // namespace iotk
