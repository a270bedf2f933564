#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iotk/kinematics.hpp"
#include "iotk/mask.hpp"
#include "iotk/types.hpp"

namespace iotk {

// Percentages are in [0, 100]; IoU values are fractions in [0, 1].

// ---------------------------------------------------------------------------
// Segmentation
// ---------------------------------------------------------------------------

/// |a ∩ b| / |a ∪ b| over foreground pixels; 1 when both are empty.
/// Throws InvalidArgument on a size mismatch.
double iou_2d(const MaskImage& a, const MaskImage& b);

/// Set IoU of two point-index masks; duplicates are ignored. 1 when both
/// are empty. Throws InvalidArgument if an index is >= n_points.
double iou_3d(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b, std::size_t n_points);

struct MaskPair {
  MaskImage predicted;
  MaskImage ground_truth;
};

/// One part of one video: the part's masks across all frames.
struct SegRecord {
  PartRole role = PartRole::receptor;
  std::vector<MaskPair> frames;
};

/// Mean per-frame IoU of one record. Throws InvalidArgument with no frames.
double record_iou(const SegRecord& record);

/// A record succeeds when its mean IoU is strictly greater than this.
inline constexpr double kSegmentationSuccessIou = 0.5;

struct RoleSegmentation {
  std::size_t records = 0;
  double mean_iou = 0.0;
  double success_pct = 0.0;
};

struct SegmentationSummary {
  std::map<PartRole, RoleSegmentation> roles;  // only roles that occur
  /// Mean of the per-role mean IoUs.
  double average_iou = 0.0;
};

SegmentationSummary segmentation_summary(const std::vector<SegRecord>& records);

// ---------------------------------------------------------------------------
// Reconstruction
// ---------------------------------------------------------------------------

/// Squared chamfer distance (m²): mean squared nearest-neighbor distance from
/// a to b plus the same from b to a. Brute force. Throws InvalidArgument if
/// either set is empty.
double chamfer_sq(const std::vector<Vec3>& a, const std::vector<Vec3>& b);

/// Middle value; the mean of the two middle values for even sizes.
/// Throws InvalidArgument if empty.
double median(std::vector<double> values);

struct ChamferRecord {
  PartRole role = PartRole::receptor;
  std::optional<double> chamfer;  // absent when no prediction was made
};

struct ReconstructionSummary {
  std::optional<double> receptor_median;
  std::optional<double> effector_median;
  std::optional<double> total_median;  // over both roles together
  std::size_t records = 0;
  std::size_t missing = 0;
  double failure_pct = 0.0;
};

ReconstructionSummary reconstruction_summary(const std::vector<ChamferRecord>& records);

// ---------------------------------------------------------------------------
// Articulation
// ---------------------------------------------------------------------------

/// Undirected angle between the axes, in [0, π/2]. Throws InvalidArgument
/// if either joint is fixed.
double joint_axis_error(const JointSpec& predicted, const JointSpec& ground_truth);

/// Distance from the predicted origin to the ground-truth axis line.
/// Throws InvalidArgument unless both joints are revolute.
double joint_origin_error(const JointSpec& predicted, const JointSpec& ground_truth);

struct JointPrediction {
  std::optional<JointSpec> predicted;  // absent: the estimator produced nothing
  JointSpec ground_truth;
};

/// Axis error averages records where both joints are non-fixed; origin error
/// averages records where both are revolute; type accuracy counts only
/// records with a prediction. Unset fields had no contributing records.
struct ArticulationSummary {
  std::size_t records = 0;
  std::size_t failures = 0;
  std::size_t type_correct = 0;
  std::optional<double> axis_error_mean;
  std::optional<double> origin_error_mean;
  std::optional<double> type_accuracy_pct;
  double failure_pct = 0.0;
};

ArticulationSummary articulation_summary(const std::vector<JointPrediction>& records);

// ---------------------------------------------------------------------------
// Camera
// ---------------------------------------------------------------------------

/// World-from-camera poses, one per frame.
struct CameraTrajectoryPair {
  std::vector<RigidTransform> predicted;
  std::vector<RigidTransform> ground_truth;
};

struct CameraPoseError {
  double rotation_mean = 0.0;     // radians
  double translation_mean = 0.0;  // meters
};

/// Aligns predicted camera centers to ground truth with a least-squares
/// similarity (rotation, translation, uniform scale), then averages per-frame
/// geodesic rotation error and center distance. With collinear centers the
/// roll about their common line is not observable from centers alone.
/// Throws InvalidArgument on a length mismatch, fewer than 2 frames, or
/// coincident centers.
CameraPoseError camera_pose_error(const CameraTrajectoryPair& pair);

// ---------------------------------------------------------------------------
// Function templates
// ---------------------------------------------------------------------------

struct TemplateLabel {
  EffectKind effect = EffectKind::geometry;
  MappingKind mapping = MappingKind::binary;
  friend bool operator==(const TemplateLabel&, const TemplateLabel&) = default;
};

struct TemplatePrediction {
  std::optional<TemplateLabel> predicted;  // absent counts as wrong
  TemplateLabel ground_truth;
};

struct TemplateAccuracy {
  std::size_t records = 0;
  std::size_t effect_correct = 0;
  std::size_t mapping_correct = 0;
  std::size_t both_correct = 0;
  double effect_pct = 0.0;
  double mapping_pct = 0.0;
  double overall_pct = 0.0;
};

/// Throws InvalidArgument if `records` is empty.
TemplateAccuracy template_accuracy(const std::vector<TemplatePrediction>& records);

// ---------------------------------------------------------------------------
// Evaluation bundles
//
// gt_dir and pred_dir hold one subdirectory per video. Inside a video:
//
//   masks/receptor/<frame>.pgm | <frame>.rle.json    (same for effector)
//   receptor.xyz | .ply | .obj                       (same for effector)
//   receptor_joint.json, effector_joint.json         (joint documents)
//   template.json                                    {"effect", "mapping"}
//   camera.csv                                       frame,qw,qx,qy,qz,tx,ty,tz
//
// Ground truth defines what is evaluated. A missing prediction counts as
// an empty mask, a failed joint or a wrong template; missing geometry
// counts toward the reconstruction failure rate; a missing trajectory is
// skipped with a notice.
// ---------------------------------------------------------------------------

struct EvaluationOptions {
  /// Evaluate downstream modalities of a part only if its segmentation
  /// succeeded; templates need both parts to succeed.
  bool iou_gate = false;
};

struct EvaluationReport {
  std::vector<std::string> videos;
  std::optional<SegmentationSummary> segmentation;
  std::optional<ReconstructionSummary> reconstruction;
  std::optional<CameraPoseError> camera;  // mean over videos
  std::size_t camera_videos = 0;
  std::optional<ArticulationSummary> articulation;
  std::optional<TemplateAccuracy> templates;
  std::vector<std::string> notices;
};

/// Throws IoError if gt_dir is not a directory, and the parse errors of the
/// file readers for malformed files.
EvaluationReport evaluate_bundle(const std::filesystem::path& gt_dir, const std::filesystem::path& pred_dir,
                                 const EvaluationOptions& options = {});

/// Camera trajectory CSV. Throws SyntaxError.
std::vector<RigidTransform> parse_camera_csv(std::string_view text);
std::string write_camera_csv(const std::vector<RigidTransform>& poses);

/// {"effect": ..., "mapping": ...}. Throws SyntaxError or SchemaError.
TemplateLabel parse_template_document(std::string_view text);
std::string serialize_template_document(const TemplateLabel& label);

/// Plain-text tables, one per evaluated table group.
std::string format_report_text(const EvaluationReport& report);

/// One JSON document; absent values are null.
std::string format_report_machine(const EvaluationReport& report);

}  // namespace iotk
