#include "iotk/runtime.hpp"

#include <algorithm>
#include <cmath>

#include "iotk/errors.hpp"
#include "iotk/kinematics.hpp"
#include "iotk/validate.hpp"

namespace iotk {

double derive_step_threshold(const StateSpace& receptor) {
  if (!receptor.is_continuous())
    throw InvalidArgument("step threshold needs a continuous receptor space");
  return 0.7 * receptor.max;
}

LinearCoefficients derive_linear_slope(const StateSpace& receptor, const StateSpace& effector) {
  if (!receptor.is_continuous() || !effector.is_continuous())
    throw InvalidArgument("linear slope needs continuous receptor and effector spaces");
  const double receptor_span = receptor.max - receptor.min;
  if (receptor_span == 0.0 || !std::isfinite(receptor_span))
    throw InvalidArgument("linear slope needs a nondegenerate receptor range");
  LinearCoefficients c;
  c.slope = (effector.max - effector.min) / receptor_span;
  c.offset = effector.min - c.slope * receptor.min;
  return c;
}

MappingSpec resolve_mapping(const FunctionTemplate& tmpl) {
  MappingSpec out = tmpl.mapping;
  if (auto* step = std::get_if<StepParams>(&out.params)) {
    if (!step->threshold) step->threshold = derive_step_threshold(tmpl.receptor_space);
  } else if (auto* linear = std::get_if<LinearParams>(&out.params)) {
    if (!linear->slope || !linear->offset) {
      const LinearCoefficients c = derive_linear_slope(tmpl.receptor_space, tmpl.effector_space);
      if (!linear->slope) linear->slope = c.slope;
      // An explicit slope with an omitted offset still anchors receptor-min
      // to effector-min.
      if (!linear->offset) linear->offset = tmpl.effector_space.min - *linear->slope * tmpl.receptor_space.min;
    }
  }
  return out;
}

double eval_mapping(const MappingSpec& mapping, double receptor_state, std::optional<double> effector_prev) {
  switch (mapping.kind()) {
    case MappingKind::binary: {
      const auto& p = std::get<BinaryParams>(mapping.params);
      return receptor_state != 0.0 ? p.on_value : p.off_value;
    }
    case MappingKind::step: {
      const auto& p = std::get<StepParams>(mapping.params);
      if (!p.threshold) throw InvalidArgument("step mapping has no threshold; resolve it first");
      return receptor_state > *p.threshold ? p.high_value : p.low_value;
    }
    case MappingKind::linear: {
      const auto& p = std::get<LinearParams>(mapping.params);
      if (!p.slope || !p.offset) throw InvalidArgument("linear mapping is unresolved");
      return *p.slope * receptor_state + *p.offset;
    }
    case MappingKind::cumulative: {
      const auto& p = std::get<CumulativeParams>(mapping.params);
      if (!effector_prev) throw InvalidArgument("cumulative mapping needs the previous effector state");
      if (receptor_state == 0.0) return *effector_prev;
      return std::clamp(*effector_prev + p.delta, p.clamp_min, p.clamp_max);
    }
  }
  throw InvalidArgument("unknown mapping kind");
}

double clamp_receptor_state(const InteractiveObjectAsset& asset, double receptor_state) {
  const StateSpace& space = asset.function_template.receptor_space;
  if (space.is_discrete()) {
    const double top = space.labels.empty() ? 0.0 : static_cast<double>(space.labels.size() - 1);
    return std::clamp(receptor_state, 0.0, top);
  }
  const Part* receptor = asset.receptor();
  if (receptor != nullptr && !receptor->joint.is_fixed()) return clamp_state(receptor->joint, receptor_state);
  return std::clamp(receptor_state, space.min, space.max);
}

StateTrace run_trace(const InteractiveObjectAsset& asset, const ActuationTrace& trace) {
  const ValidationReport report = validate_asset(asset);
  if (report.has_errors())
    throw InvalidArgument("asset '" + asset.object_id + "' does not validate: " + report.errors().front().message);
  for (std::size_t i = 1; i < trace.samples.size(); ++i)
    if (!(trace.samples[i].t > trace.samples[i - 1].t))
      throw InvalidArgument("trace times must be strictly increasing (sample " + std::to_string(i) + ")");

  const InteractiveObjectAsset& canonical = report.canonical;
  const MappingSpec mapping = resolve_mapping(canonical.function_template);
  const bool cumulative = mapping.kind() == MappingKind::cumulative;

  std::optional<double> effector;
  if (cumulative) effector = std::get<CumulativeParams>(mapping.params).initial;
  double previous_receptor = 0.0;

  StateTrace out;
  out.samples.reserve(trace.samples.size());
  for (const ActuationSample& sample : trace.samples) {
    const double receptor = clamp_receptor_state(canonical, sample.receptor_state);
    double value;
    if (cumulative) {
      const bool rising = previous_receptor == 0.0 && receptor != 0.0;
      value = eval_mapping(mapping, rising ? 1.0 : 0.0, effector);
      effector = value;
    } else {
      value = eval_mapping(mapping, receptor);
    }
    previous_receptor = receptor;
    out.samples.push_back({sample.t, receptor, value});
  }
  return out;
}

}  // namespace iotk
