#pragma once

#include <optional>
#include <vector>

#include "iotk/types.hpp"

namespace iotk {

struct ActuationSample {
  double t = 0.0;  // seconds
  double receptor_state = 0.0;
  friend bool operator==(const ActuationSample&, const ActuationSample&) = default;
};

/// Receptor states sampled at strictly increasing times. Discrete receptor
/// states are label indices.
struct ActuationTrace {
  std::vector<ActuationSample> samples;
  friend bool operator==(const ActuationTrace&, const ActuationTrace&) = default;
};

struct StateSample {
  double t = 0.0;
  double receptor_state = 0.0;
  double effector_state = 0.0;
  friend bool operator==(const StateSample&, const StateSample&) = default;
};

/// Output of run_trace, aligned sample-for-sample with its ActuationTrace.
struct StateTrace {
  std::vector<StateSample> samples;
  friend bool operator==(const StateTrace&, const StateTrace&) = default;
};

struct LinearCoefficients {
  double slope = 0.0;
  double offset = 0.0;
};

/// Default step threshold: 0.7 of the receptor's maximum state.
/// Throws InvalidArgument for a discrete receptor space.
double derive_step_threshold(const StateSpace& receptor);

/// Default linear coefficients. The slope is the ratio of effector span to
/// receptor span; the offset sends the receptor minimum to the effector
/// minimum. Throws InvalidArgument unless both spaces are continuous and the
/// receptor span is nonzero.
LinearCoefficients derive_linear_slope(const StateSpace& receptor, const StateSpace& effector);

/// Copy of the template's mapping with every omitted parameter filled in by
/// the derivations above. Explicit values are kept as-is.
MappingSpec resolve_mapping(const FunctionTemplate& tmpl);

/// Evaluates one mapping step.
///
///   binary:     s_R != 0 ? on_value : off_value
///   step:       s_R > threshold ? high_value : low_value   (strict)
///   linear:     slope * s_R + offset
///   cumulative: s_R != 0 ? clamp(s_E_prev + delta) : s_E_prev
///
/// The mapping must be resolved. Throws InvalidArgument when a cumulative
/// mapping is evaluated without `effector_prev`, or on an unresolved mapping.
double eval_mapping(const MappingSpec& mapping, double receptor_state,
                    std::optional<double> effector_prev = std::nullopt);

/// Clamps a receptor sample into its admissible range. Continuous receptors
/// use the receptor joint range (or the state-space bounds for a fixed
/// joint); discrete receptors use the label index range [0, n-1].
double clamp_receptor_state(const InteractiveObjectAsset& asset, double receptor_state);

/// Runs an actuation trace through the asset's function template.
///
/// Samples are clamped, then mapped. Cumulative mappings fire on rising
/// edges only: a sample triggers when the receptor goes from zero (the state
/// before the first sample counts as zero) to nonzero. Holding a button
/// down therefore adds `delta` once.
///
/// Throws InvalidArgument if the asset does not validate or the trace times
/// are not strictly increasing.
StateTrace run_trace(const InteractiveObjectAsset& asset, const ActuationTrace& trace);

}  // namespace iotk
