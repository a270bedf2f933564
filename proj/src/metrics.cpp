#include "iotk/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include <Eigen/Geometry>

#include "iotk/asset_io.hpp"
#include "iotk/errors.hpp"
#include "iotk/numfmt.hpp"
#include "json_text.hpp"

namespace iotk {

namespace fs = std::filesystem;

double iou_2d(const MaskImage& a, const MaskImage& b) {
  if (a.width != b.width || a.height != b.height)
    throw InvalidArgument("mask sizes differ: " + std::to_string(a.width) + "x" + std::to_string(a.height) + " vs " +
                          std::to_string(b.width) + "x" + std::to_string(b.height));
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    const bool pa = a.pixels[i] != 0;
    const bool pb = b.pixels[i] != 0;
    inter += pa && pb;
    uni += pa || pb;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double iou_3d(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b, std::size_t n_points) {
  std::vector<char> in_a(n_points, 0);
  std::vector<char> in_b(n_points, 0);
  auto mark = [&](const std::vector<std::size_t>& idx, std::vector<char>& in) {
    for (std::size_t i : idx) {
      if (i >= n_points)
        throw InvalidArgument("point index " + std::to_string(i) + " out of range for " + std::to_string(n_points) +
                              " points");
      in[i] = 1;
    }
  };
  mark(a, in_a);
  mark(b, in_b);
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < n_points; ++i) {
    inter += in_a[i] && in_b[i];
    uni += in_a[i] || in_b[i];
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double record_iou(const SegRecord& record) {
  if (record.frames.empty()) throw InvalidArgument("segmentation record has no frames");
  double sum = 0.0;
  for (const MaskPair& f : record.frames) sum += iou_2d(f.predicted, f.ground_truth);
  return sum / static_cast<double>(record.frames.size());
}

SegmentationSummary segmentation_summary(const std::vector<SegRecord>& records) {
  if (records.empty()) throw InvalidArgument("segmentation summary needs at least one record");
  struct Acc {
    std::size_t n = 0;
    std::size_t success = 0;
    double sum = 0.0;
  };
  std::map<PartRole, Acc> acc;
  for (const SegRecord& r : records) {
    const double iou = record_iou(r);
    Acc& a = acc[r.role];
    ++a.n;
    a.sum += iou;
    a.success += iou > kSegmentationSuccessIou;
  }
  SegmentationSummary s;
  double role_sum = 0.0;
  for (const auto& [role, a] : acc) {
    RoleSegmentation rs;
    rs.records = a.n;
    rs.mean_iou = a.sum / static_cast<double>(a.n);
    rs.success_pct = 100.0 * static_cast<double>(a.success) / static_cast<double>(a.n);
    s.roles[role] = rs;
    role_sum += rs.mean_iou;
  }
  s.average_iou = role_sum / static_cast<double>(acc.size());
  return s;
}

double chamfer_sq(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  if (a.empty() || b.empty()) throw InvalidArgument("chamfer distance needs two nonempty point sets");
  auto directed = [](const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
    double sum = 0.0;
    for (const Vec3& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const Vec3& q : to) best = std::min(best, (p - q).squaredNorm());
      sum += best;
    }
    return sum / static_cast<double>(from.size());
  };
  return directed(a, b) + directed(b, a);
}

double median(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("median of an empty list");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

ReconstructionSummary reconstruction_summary(const std::vector<ChamferRecord>& records) {
  if (records.empty()) throw InvalidArgument("reconstruction summary needs at least one record");
  std::vector<double> receptor;
  std::vector<double> effector;
  std::vector<double> total;
  ReconstructionSummary s;
  s.records = records.size();
  for (const ChamferRecord& r : records) {
    if (!r.chamfer) {
      ++s.missing;
      continue;
    }
    (r.role == PartRole::effector ? effector : receptor).push_back(*r.chamfer);
    total.push_back(*r.chamfer);
  }
  if (!receptor.empty()) s.receptor_median = median(receptor);
  if (!effector.empty()) s.effector_median = median(effector);
  if (!total.empty()) s.total_median = median(total);
  s.failure_pct = 100.0 * static_cast<double>(s.missing) / static_cast<double>(s.records);
  return s;
}

double joint_axis_error(const JointSpec& predicted, const JointSpec& ground_truth) {
  if (predicted.is_fixed() || ground_truth.is_fixed()) throw InvalidArgument("axis error is undefined for a fixed joint");
  // atan2 form of arccos(|a·b|); stays accurate for nearly parallel axes.
  const Vec3 a = predicted.axis.normalized();
  const Vec3 b = ground_truth.axis.normalized();
  return std::atan2(a.cross(b).norm(), std::abs(a.dot(b)));
}

double joint_origin_error(const JointSpec& predicted, const JointSpec& ground_truth) {
  if (predicted.type != JointType::revolute || ground_truth.type != JointType::revolute)
    throw InvalidArgument("origin error needs two revolute joints");
  const Vec3 axis = ground_truth.axis.normalized();
  const Vec3 d = predicted.origin - ground_truth.origin;
  return (d - d.dot(axis) * axis).norm();
}

ArticulationSummary articulation_summary(const std::vector<JointPrediction>& records) {
  if (records.empty()) throw InvalidArgument("articulation summary needs at least one record");
  ArticulationSummary s;
  s.records = records.size();
  double axis_sum = 0.0;
  double origin_sum = 0.0;
  std::size_t axis_n = 0;
  std::size_t origin_n = 0;
  for (const JointPrediction& r : records) {
    if (!r.predicted) {
      ++s.failures;
      continue;
    }
    const JointSpec& p = *r.predicted;
    const JointSpec& g = r.ground_truth;
    s.type_correct += p.type == g.type;
    if (!p.is_fixed() && !g.is_fixed()) {
      axis_sum += joint_axis_error(p, g);
      ++axis_n;
    }
    if (p.type == JointType::revolute && g.type == JointType::revolute) {
      origin_sum += joint_origin_error(p, g);
      ++origin_n;
    }
  }
  const std::size_t predicted = s.records - s.failures;
  if (axis_n > 0) s.axis_error_mean = axis_sum / static_cast<double>(axis_n);
  if (origin_n > 0) s.origin_error_mean = origin_sum / static_cast<double>(origin_n);
  if (predicted > 0) s.type_accuracy_pct = 100.0 * static_cast<double>(s.type_correct) / static_cast<double>(predicted);
  s.failure_pct = 100.0 * static_cast<double>(s.failures) / static_cast<double>(s.records);
  return s;
}

CameraPoseError camera_pose_error(const CameraTrajectoryPair& pair) {
  const std::size_t n = pair.ground_truth.size();
  if (pair.predicted.size() != n)
    throw InvalidArgument("trajectory lengths differ: " + std::to_string(pair.predicted.size()) + " vs " +
                          std::to_string(n));
  if (n < 2) throw InvalidArgument("camera pose error needs at least 2 frames");

  Eigen::Matrix3Xd src(3, n);
  Eigen::Matrix3Xd dst(3, n);
  for (std::size_t i = 0; i < n; ++i) {
    src.col(static_cast<Eigen::Index>(i)) = pair.predicted[i].translation;
    dst.col(static_cast<Eigen::Index>(i)) = pair.ground_truth[i].translation;
  }
  auto spread = [](const Eigen::Matrix3Xd& m) { return (m.colwise() - m.rowwise().mean()).norm(); };
  if (spread(src) == 0.0 || spread(dst) == 0.0) throw InvalidArgument("camera centers are all coincident");

  const Eigen::Matrix4d sim = Eigen::umeyama(src, dst, true);
  const Eigen::Matrix3d sR = sim.topLeftCorner<3, 3>();
  const double scale = std::cbrt(sR.determinant());
  const Eigen::Matrix3d align = sR / scale;
  const Vec3 shift = sim.topRightCorner<3, 1>();

  CameraPoseError err;
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Matrix3d r_pred = align * pair.predicted[i].rotation;
    const Eigen::Matrix3d delta = pair.ground_truth[i].rotation * r_pred.transpose();
    err.rotation_mean += Eigen::AngleAxisd(delta).angle();
    const Vec3 c_pred = sR * pair.predicted[i].translation + shift;
    err.translation_mean += (pair.ground_truth[i].translation - c_pred).norm();
  }
  err.rotation_mean /= static_cast<double>(n);
  err.translation_mean /= static_cast<double>(n);
  return err;
}

TemplateAccuracy template_accuracy(const std::vector<TemplatePrediction>& records) {
  if (records.empty()) throw InvalidArgument("template accuracy needs at least one record");
  TemplateAccuracy a;
  a.records = records.size();
  for (const TemplatePrediction& r : records) {
    if (!r.predicted) continue;
    const bool effect = r.predicted->effect == r.ground_truth.effect;
    const bool mapping = r.predicted->mapping == r.ground_truth.mapping;
    a.effect_correct += effect;
    a.mapping_correct += mapping;
    a.both_correct += effect && mapping;
  }
  const double n = static_cast<double>(a.records);
  a.effect_pct = 100.0 * static_cast<double>(a.effect_correct) / n;
  a.mapping_pct = 100.0 * static_cast<double>(a.mapping_correct) / n;
  a.overall_pct = 100.0 * static_cast<double>(a.both_correct) / n;
  return a;
}

// ---------------------------------------------------------------------------
// Document formats
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string_view> csv_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

}  // namespace

std::vector<RigidTransform> parse_camera_csv(std::string_view text) {
  std::vector<RigidTransform> poses;
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool header = false;
  std::optional<long long> last_frame;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header) {
      if (line != "frame,qw,qx,qy,qz,tx,ty,tz")
        throw SyntaxError("expected header \"frame,qw,qx,qy,qz,tx,ty,tz\"", line_no);
      header = true;
      continue;
    }
    if (line.empty()) continue;
    const auto fields = csv_fields(line);
    if (fields.size() != 8) throw SyntaxError("expected 8 fields", line_no);
    double v[8];
    for (std::size_t i = 0; i < 8; ++i) {
      auto parsed = parse_real(fields[i]);
      if (!parsed || !std::isfinite(*parsed))
        throw SyntaxError("field " + std::to_string(i + 1) + " is not a finite number", line_no);
      v[i] = *parsed;
    }
    const long long frame = static_cast<long long>(v[0]);
    if (static_cast<double>(frame) != v[0]) throw SyntaxError("frame must be an integer", line_no);
    if (last_frame && frame <= *last_frame) throw SyntaxError("frames must be strictly increasing", line_no);
    last_frame = frame;
    Eigen::Quaterniond q(v[1], v[2], v[3], v[4]);
    if (q.norm() == 0.0) throw SyntaxError("zero quaternion", line_no);
    RigidTransform pose;
    pose.rotation = q.normalized().toRotationMatrix();
    pose.translation = Vec3(v[5], v[6], v[7]);
    poses.push_back(pose);
  }
  if (!header) throw SyntaxError("expected header \"frame,qw,qx,qy,qz,tx,ty,tz\"", 1);
  return poses;
}

std::string write_camera_csv(const std::vector<RigidTransform>& poses) {
  std::string out = "frame,qw,qx,qy,qz,tx,ty,tz\n";
  for (std::size_t i = 0; i < poses.size(); ++i) {
    const Eigen::Quaterniond q(poses[i].rotation);
    const Vec3& t = poses[i].translation;
    out += std::to_string(i);
    for (double v : {q.w(), q.x(), q.y(), q.z(), t.x(), t.y(), t.z()}) out += "," + format_real(v);
    out += "\n";
  }
  return out;
}

TemplateLabel parse_template_document(std::string_view text) {
  const detail::Json doc = detail::parse_json(text);
  detail::ObjectReader r(doc, "");
  TemplateLabel label;
  const std::string effect = detail::as_string(r.require("effect"), "effect");
  const std::string mapping = detail::as_string(r.require("mapping"), "mapping");
  r.finish();
  auto e = effect_kind_from_string(effect);
  if (!e) throw SchemaError("effect", "unknown physical effect '" + effect + "'");
  auto m = mapping_kind_from_string(mapping);
  if (!m) throw SchemaError("mapping", "unknown mapping '" + mapping + "'");
  label.effect = *e;
  label.mapping = *m;
  return label;
}

std::string serialize_template_document(const TemplateLabel& label) {
  detail::Json doc = detail::Json::object();
  doc["effect"] = std::string(to_string(label.effect));
  doc["mapping"] = std::string(to_string(label.mapping));
  return detail::dump_canonical(doc) + "\n";
}

// ---------------------------------------------------------------------------
// Bundles
// ---------------------------------------------------------------------------

namespace {

constexpr PartRole kRoles[] = {PartRole::receptor, PartRole::effector};

std::optional<fs::path> find_geometry(const fs::path& video, PartRole role, GeometryFormat& format) {
  const std::string stem(to_string(role));
  for (const auto& [ext, fmt] : {std::pair{".xyz", GeometryFormat::xyz}, std::pair{".ply", GeometryFormat::ply_ascii},
                                 std::pair{".obj", GeometryFormat::obj}}) {
    fs::path p = video / (stem + ext);
    if (fs::is_regular_file(p)) {
      format = fmt;
      return p;
    }
  }
  return std::nullopt;
}

/// frame name -> mask path, for one role of one video.
std::map<std::string, std::pair<fs::path, MaskFormat>> mask_files(const fs::path& video, PartRole role) {
  std::map<std::string, std::pair<fs::path, MaskFormat>> out;
  const fs::path dir = video / "masks" / std::string(to_string(role));
  if (!fs::is_directory(dir)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    const std::string rle = ".rle.json";
    if (name.size() > rle.size() && name.compare(name.size() - rle.size(), rle.size(), rle) == 0)
      out[name.substr(0, name.size() - rle.size())] = {entry.path(), MaskFormat::rle_json};
    else if (entry.path().extension() == ".pgm")
      out[entry.path().stem().string()] = {entry.path(), MaskFormat::pgm};
  }
  return out;
}

std::vector<std::string> list_videos(const fs::path& root) {
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory()) out.push_back(entry.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

EvaluationReport evaluate_bundle(const fs::path& gt_dir, const fs::path& pred_dir, const EvaluationOptions& options) {
  if (!fs::is_directory(gt_dir)) throw IoError("ground-truth directory not found: " + gt_dir.string());
  EvaluationReport report;
  if (!fs::is_directory(pred_dir)) report.notices.push_back("prediction directory not found; every prediction is missing");
  report.videos = list_videos(gt_dir);

  std::vector<SegRecord> seg;
  std::vector<ChamferRecord> chamfer;
  std::vector<JointPrediction> joints;
  std::vector<TemplatePrediction> templates;
  double cam_rot = 0.0;
  double cam_trans = 0.0;

  for (const std::string& video : report.videos) {
    const fs::path gt = gt_dir / video;
    const fs::path pred = pred_dir / video;
    std::map<PartRole, bool> passed;  // segmentation gate per role

    for (PartRole role : kRoles) {
      const auto gt_masks = mask_files(gt, role);
      if (gt_masks.empty()) continue;
      const auto pred_masks = mask_files(pred, role);
      SegRecord record;
      record.role = role;
      for (const auto& [frame, file] : gt_masks) {
        MaskPair pair;
        pair.ground_truth = load_mask(file.first, file.second);
        auto it = pred_masks.find(frame);
        pair.predicted = it == pred_masks.end() ? MaskImage(pair.ground_truth.width, pair.ground_truth.height)
                                                : load_mask(it->second.first, it->second.second);
        record.frames.push_back(std::move(pair));
      }
      passed[role] = record_iou(record) > kSegmentationSuccessIou;
      seg.push_back(std::move(record));
    }

    auto gated = [&](PartRole role) {
      if (!options.iou_gate) return false;
      auto it = passed.find(role);
      return it != passed.end() && !it->second;
    };
    if (options.iou_gate && passed.size() < 2)
      report.notices.push_back(video + ": segmentation incomplete; IoU gate not applied to missing roles");

    for (PartRole role : kRoles) {
      GeometryFormat gt_format{};
      auto gt_geom = find_geometry(gt, role, gt_format);
      if (!gt_geom || gated(role)) continue;
      ChamferRecord record;
      record.role = role;
      GeometryFormat pred_format{};
      if (auto pred_geom = find_geometry(pred, role, pred_format)) {
        const PartGeometry a = load_pointcloud(*pred_geom, pred_format);
        const PartGeometry b = load_pointcloud(*gt_geom, gt_format);
        if (!a.points.empty() && !b.points.empty()) record.chamfer = chamfer_sq(a.points, b.points);
      }
      chamfer.push_back(record);
    }

    for (PartRole role : kRoles) {
      const fs::path name = std::string(to_string(role)) + "_joint.json";
      if (!fs::is_regular_file(gt / name) || gated(role)) continue;
      JointPrediction record;
      record.ground_truth = parse_joint_document(read_file(gt / name));
      if (fs::is_regular_file(pred / name)) record.predicted = parse_joint_document(read_file(pred / name));
      joints.push_back(record);
    }

    if (fs::is_regular_file(gt / "template.json") && !gated(PartRole::receptor) && !gated(PartRole::effector)) {
      TemplatePrediction record;
      record.ground_truth = parse_template_document(read_file(gt / "template.json"));
      if (fs::is_regular_file(pred / "template.json"))
        record.predicted = parse_template_document(read_file(pred / "template.json"));
      templates.push_back(record);
    }

    if (fs::is_regular_file(gt / "camera.csv")) {
      if (!fs::is_regular_file(pred / "camera.csv")) {
        report.notices.push_back(video + ": no predicted camera trajectory; skipped");
      } else {
        CameraTrajectoryPair pair;
        pair.ground_truth = parse_camera_csv(read_file(gt / "camera.csv"));
        pair.predicted = parse_camera_csv(read_file(pred / "camera.csv"));
        const CameraPoseError e = camera_pose_error(pair);
        cam_rot += e.rotation_mean;
        cam_trans += e.translation_mean;
        ++report.camera_videos;
      }
    }
  }

  if (!seg.empty()) report.segmentation = segmentation_summary(seg);
  else report.notices.push_back("no ground-truth masks; segmentation skipped");
  if (!chamfer.empty()) report.reconstruction = reconstruction_summary(chamfer);
  else report.notices.push_back("no ground-truth geometry; reconstruction skipped");
  if (!joints.empty()) report.articulation = articulation_summary(joints);
  else report.notices.push_back("no ground-truth joints; articulation skipped");
  if (!templates.empty()) report.templates = template_accuracy(templates);
  else report.notices.push_back("no ground-truth templates; template accuracy skipped");
  if (report.camera_videos > 0) {
    const double n = static_cast<double>(report.camera_videos);
    report.camera = CameraPoseError{cam_rot / n, cam_trans / n};
  }
  return report;
}

// ---------------------------------------------------------------------------
// Report rendering
// ---------------------------------------------------------------------------

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string cell(const std::optional<double>& v, int digits) { return v ? fixed(*v, digits) : "n/a"; }

std::string table(const std::string& title, const std::vector<std::string>& header,
                  const std::vector<std::string>& row) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = std::max(header[i].size(), row[i].size());
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += "  ";
      out += std::string(width[i] - cells[i].size(), ' ') + cells[i];
    }
    return out + "\n";
  };
  return title + "\n" + line(header) + line(row) + "\n";
}

std::optional<double> role_value(const SegmentationSummary& s, PartRole role, bool success) {
  auto it = s.roles.find(role);
  if (it == s.roles.end()) return std::nullopt;
  return success ? it->second.success_pct : 100.0 * it->second.mean_iou;
}

detail::Json opt_json(const std::optional<double>& v) { return v ? detail::Json(*v) : detail::Json(nullptr); }

}  // namespace

std::string format_report_text(const EvaluationReport& r) {
  std::string out = "videos: " + std::to_string(r.videos.size()) + "\n\n";
  if (r.segmentation) {
    const auto& s = *r.segmentation;
    out += table("Segmentation",
                 {"IoU receptor (%)", "IoU effector (%)", "IoU avg (%)", "Success receptor (%)", "Success effector (%)"},
                 {cell(role_value(s, PartRole::receptor, false), 1), cell(role_value(s, PartRole::effector, false), 1),
                  fixed(100.0 * s.average_iou, 1), cell(role_value(s, PartRole::receptor, true), 1),
                  cell(role_value(s, PartRole::effector, true), 1)});
  }
  if (r.reconstruction || r.camera) {
    std::optional<double> rot;
    std::optional<double> trans;
    if (r.camera) {
      rot = r.camera->rotation_mean;
      trans = r.camera->translation_mean;
    }
    const ReconstructionSummary rec = r.reconstruction.value_or(ReconstructionSummary{});
    out += table("Reconstruction",
                 {"Receptor CD (m^2)", "Effector CD (m^2)", "Total CD (m^2)", "Camera Rot. Err. (rad)",
                  "Camera Tr. Err. (m)", "Failure Rate (%)"},
                 {cell(rec.receptor_median, 3), cell(rec.effector_median, 3), cell(rec.total_median, 3), cell(rot, 3),
                  cell(trans, 3), r.reconstruction ? fixed(rec.failure_pct, 1) : "n/a"});
  }
  if (r.articulation) {
    const auto& a = *r.articulation;
    out += table("Articulation",
                 {"Joint Axis Err. (rad)", "Joint Origin Err. (m)", "Joint Type Acc. (%)", "Failure Rate (%)"},
                 {cell(a.axis_error_mean, 3), cell(a.origin_error_mean, 3), cell(a.type_accuracy_pct, 1),
                  fixed(a.failure_pct, 1)});
  }
  if (r.templates) {
    const auto& t = *r.templates;
    out += table("Function template", {"Physical Effect Acc. (%)", "Mapping Acc. (%)", "Overall Acc. (%)"},
                 {fixed(t.effect_pct, 1), fixed(t.mapping_pct, 1), fixed(t.overall_pct, 1)});
  }
  for (const std::string& n : r.notices) out += "notice: " + n + "\n";
  return out;
}

std::string format_report_machine(const EvaluationReport& r) {
  using detail::Json;
  Json doc = Json::object();
  doc["videos"] = r.videos;
  Json seg(nullptr);
  if (r.segmentation) {
    seg = Json::object();
    for (PartRole role : kRoles) {
      auto it = r.segmentation->roles.find(role);
      if (it == r.segmentation->roles.end()) {
        seg[std::string(to_string(role))] = nullptr;
        continue;
      }
      Json j = Json::object();
      j["records"] = it->second.records;
      j["mean_iou"] = it->second.mean_iou;
      j["success_pct"] = it->second.success_pct;
      seg[std::string(to_string(role))] = j;
    }
    seg["average_iou"] = r.segmentation->average_iou;
  }
  doc["segmentation"] = seg;
  Json rec(nullptr);
  if (r.reconstruction) {
    rec = Json::object();
    rec["records"] = r.reconstruction->records;
    rec["missing"] = r.reconstruction->missing;
    rec["receptor_cd_median"] = opt_json(r.reconstruction->receptor_median);
    rec["effector_cd_median"] = opt_json(r.reconstruction->effector_median);
    rec["total_cd_median"] = opt_json(r.reconstruction->total_median);
    rec["failure_pct"] = r.reconstruction->failure_pct;
  }
  doc["reconstruction"] = rec;
  Json cam(nullptr);
  if (r.camera) {
    cam = Json::object();
    cam["videos"] = r.camera_videos;
    cam["rotation_error_mean"] = r.camera->rotation_mean;
    cam["translation_error_mean"] = r.camera->translation_mean;
  }
  doc["camera"] = cam;
  Json art(nullptr);
  if (r.articulation) {
    const auto& a = *r.articulation;
    art = Json::object();
    art["records"] = a.records;
    art["failures"] = a.failures;
    art["axis_error_mean"] = opt_json(a.axis_error_mean);
    art["origin_error_mean"] = opt_json(a.origin_error_mean);
    art["type_accuracy_pct"] = opt_json(a.type_accuracy_pct);
    art["failure_pct"] = a.failure_pct;
  }
  doc["articulation"] = art;
  Json tmpl(nullptr);
  if (r.templates) {
    const auto& t = *r.templates;
    tmpl = Json::object();
    tmpl["records"] = t.records;
    tmpl["effect_pct"] = t.effect_pct;
    tmpl["mapping_pct"] = t.mapping_pct;
    tmpl["overall_pct"] = t.overall_pct;
  }
  doc["templates"] = tmpl;
  doc["notices"] = r.notices;
  return detail::dump_canonical(doc) + "\n";
}

}  // namespace iotk
