#pragma once

// Random evaluation bundles: built in memory, written to disk in the bundle
// layout, and recounted by the brute-force oracles.

#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <unistd.h>

#include "generators.hpp"
#include "iotk/asset_io.hpp"
#include "iotk/metrics.hpp"
#include "iotk/numfmt.hpp"
#include "oracles.hpp"

namespace iotk::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("iotk_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

struct PartData {
  std::vector<std::pair<std::string, MaskImage>> gt_masks;
  std::map<std::string, MaskImage> pred_masks;  // may lack frames
  std::vector<Vec3> gt_points;
  std::optional<std::vector<Vec3>> pred_points;
  JointSpec gt_joint;
  std::optional<JointSpec> pred_joint;
};

struct VideoData {
  std::string name;
  std::map<PartRole, PartData> parts;  // receptor and effector
  TemplateLabel gt_template;
  std::optional<TemplateLabel> pred_template;
};

inline MaskImage random_mask(Rng& rng, std::size_t w, std::size_t h, double fill) {
  MaskImage m(w, h);
  for (auto& p : m.pixels) p = uniform(rng, 0.0, 1.0) < fill ? 1 : 0;
  return m;
}

/// Mask that mostly agrees with `base`, flipping a random share of pixels.
inline MaskImage perturb_mask(Rng& rng, const MaskImage& base, double flip) {
  MaskImage m = base;
  for (auto& p : m.pixels)
    if (uniform(rng, 0.0, 1.0) < flip) p = p ? 0 : 1;
  return m;
}

inline JointSpec perturb_joint(Rng& rng, const JointSpec& gt) {
  JointSpec p = gt;
  switch (pick(rng, 4)) {
    case 0:
      return p;  // exact
    case 1:
      p = random_joint(rng, random_joint_type(rng));  // unrelated guess
      return p;
    default:
      p.axis = (gt.axis + 0.3 * random_point(rng)).normalized();
      if (pick(rng, 2)) p.axis = -p.axis;
      p.origin = gt.origin + 0.2 * random_point(rng);
      return p;
  }
}

/// 1 to 5 videos, so each modality has at most 10 part records.
inline std::vector<VideoData> random_bundle(Rng& rng) {
  std::vector<VideoData> videos;
  const int n = 1 + pick(rng, 5);
  for (int v = 0; v < n; ++v) {
    VideoData video;
    video.name = "video_" + std::to_string(v);
    for (PartRole role : {PartRole::receptor, PartRole::effector}) {
      PartData d;
      const std::size_t w = 3 + static_cast<std::size_t>(pick(rng, 6));
      const std::size_t h = 2 + static_cast<std::size_t>(pick(rng, 6));
      const int frames = 1 + pick(rng, 3);
      const double quality = uniform(rng, 0.0, 0.6);
      for (int f = 0; f < frames; ++f) {
        const std::string frame = "f" + std::to_string(100 + f);
        MaskImage gt = random_mask(rng, w, h, uniform(rng, 0.0, 0.7));
        d.gt_masks.emplace_back(frame, gt);
        if (pick(rng, 6) != 0) d.pred_masks[frame] = perturb_mask(rng, gt, quality);
      }
      d.gt_points = random_points(rng, 1 + static_cast<std::size_t>(pick(rng, 12)), 0.5);
      if (pick(rng, 5) != 0) {
        std::vector<Vec3> pred = d.gt_points;
        for (Vec3& p : pred) p += 0.05 * random_point(rng);
        for (int extra = pick(rng, 4); extra > 0; --extra) pred.push_back(random_point(rng, 0.5));
        d.pred_points = pred;
      }
      d.gt_joint = random_joint(rng, random_joint_type(rng));
      if (pick(rng, 4) != 0) d.pred_joint = perturb_joint(rng, d.gt_joint);
      video.parts[role] = d;
    }
    video.gt_template = {kAllEffectKinds[static_cast<std::size_t>(pick(rng, 4))],
                         kAllMappingKinds[static_cast<std::size_t>(pick(rng, 4))]};
    if (pick(rng, 5) != 0) {
      TemplateLabel p = video.gt_template;
      if (pick(rng, 3) == 0) p.effect = kAllEffectKinds[static_cast<std::size_t>(pick(rng, 4))];
      if (pick(rng, 3) == 0) p.mapping = kAllMappingKinds[static_cast<std::size_t>(pick(rng, 4))];
      video.pred_template = p;
    }
    videos.push_back(std::move(video));
  }
  return videos;
}

inline void write_points(Rng& rng, const std::filesystem::path& dir, const std::string& stem,
                         const std::vector<Vec3>& points) {
  auto coords = [](const Vec3& p) { return format_real(p.x()) + " " + format_real(p.y()) + " " + format_real(p.z()); };
  std::string text;
  switch (pick(rng, 3)) {
    case 0: {
      PartGeometry g;
      g.points = points;
      write_file_atomic(dir / (stem + ".xyz"), write_xyz(g));
      return;
    }
    case 1:
      text = "ply\nformat ascii 1.0\nelement vertex " + std::to_string(points.size()) +
             "\nproperty float x\nproperty float y\nproperty float z\nend_header\n";
      for (const Vec3& p : points) text += coords(p) + "\n";
      write_file_atomic(dir / (stem + ".ply"), text);
      return;
    default:
      for (const Vec3& p : points) text += "v " + coords(p) + "\n";
      write_file_atomic(dir / (stem + ".obj"), text);
      return;
  }
}

inline void write_mask(Rng& rng, const std::filesystem::path& dir, const std::string& frame, const MaskImage& m) {
  std::filesystem::create_directories(dir);
  if (pick(rng, 2))
    write_file_atomic(dir / (frame + ".pgm"), write_pgm(m));
  else
    write_file_atomic(dir / (frame + ".rle.json"), write_rle(m));
}

/// Writes the ground-truth and prediction trees.
inline void write_bundle(Rng& rng, const std::vector<VideoData>& videos, const std::filesystem::path& gt_root,
                         const std::filesystem::path& pred_root) {
  for (const VideoData& v : videos) {
    const auto gt = gt_root / v.name;
    const auto pred = pred_root / v.name;
    std::filesystem::create_directories(gt);
    std::filesystem::create_directories(pred);
    for (const auto& [role, d] : v.parts) {
      const std::string r(to_string(role));
      for (const auto& [frame, m] : d.gt_masks) write_mask(rng, gt / "masks" / r, frame, m);
      for (const auto& [frame, m] : d.pred_masks) write_mask(rng, pred / "masks" / r, frame, m);
      write_points(rng, gt, r, d.gt_points);
      if (d.pred_points) write_points(rng, pred, r, *d.pred_points);
      write_file_atomic(gt / (r + "_joint.json"), serialize_joint_document(d.gt_joint));
      if (d.pred_joint) write_file_atomic(pred / (r + "_joint.json"), serialize_joint_document(*d.pred_joint));
    }
    write_file_atomic(gt / "template.json", serialize_template_document(v.gt_template));
    if (v.pred_template) write_file_atomic(pred / "template.json", serialize_template_document(*v.pred_template));
  }
}

/// Oracle expectations for an ungated evaluation of the bundle.
struct BundleExpectation {
  std::map<PartRole, oracle::SegCounts> segmentation;
  double average_iou = 0.0;
  std::optional<double> receptor_cd;
  std::optional<double> effector_cd;
  std::optional<double> total_cd;
  int cd_missing = 0;
  oracle::JointCounts joints;
  oracle::TemplateCounts templates;
};

inline BundleExpectation recount(const std::vector<VideoData>& videos) {
  BundleExpectation e;
  std::vector<std::pair<PartRole, std::vector<std::pair<MaskImage, MaskImage>>>> seg;
  std::map<PartRole, std::vector<double>> cd;
  std::vector<double> all_cd;
  std::vector<std::pair<std::optional<JointSpec>, JointSpec>> joints;
  std::vector<std::pair<std::optional<std::pair<EffectKind, MappingKind>>, std::pair<EffectKind, MappingKind>>> tmpl;
  for (const VideoData& v : videos) {
    for (const auto& [role, d] : v.parts) {
      std::vector<std::pair<MaskImage, MaskImage>> frames;
      for (const auto& [frame, gt] : d.gt_masks) {
        auto it = d.pred_masks.find(frame);
        frames.emplace_back(it == d.pred_masks.end() ? MaskImage(gt.width, gt.height) : it->second, gt);
      }
      seg.emplace_back(role, frames);
      if (d.pred_points) {
        const double c = oracle::chamfer(*d.pred_points, d.gt_points);
        cd[role].push_back(c);
        all_cd.push_back(c);
      } else {
        ++e.cd_missing;
      }
      joints.emplace_back(d.pred_joint, d.gt_joint);
    }
    std::optional<std::pair<EffectKind, MappingKind>> p;
    if (v.pred_template) p = std::pair{v.pred_template->effect, v.pred_template->mapping};
    tmpl.emplace_back(p, std::pair{v.gt_template.effect, v.gt_template.mapping});
  }
  e.segmentation = oracle::segmentation(seg);
  double sum = 0.0;
  for (const auto& [role, s] : e.segmentation) sum += s.mean_iou;
  e.average_iou = sum / static_cast<double>(e.segmentation.size());
  if (!cd[PartRole::receptor].empty()) e.receptor_cd = oracle::median(cd[PartRole::receptor]);
  if (!cd[PartRole::effector].empty()) e.effector_cd = oracle::median(cd[PartRole::effector]);
  if (!all_cd.empty()) e.total_cd = oracle::median(all_cd);
  e.joints = oracle::joints(joints);
  e.templates = oracle::templates(tmpl);
  return e;
}

/// Differences between an ungated evaluation report and the oracle recount;
/// empty when they agree (counts exactly, reals within 1e-9).
inline std::vector<std::string> compare_report(const EvaluationReport& r, const BundleExpectation& e) {
  std::vector<std::string> diffs;
  auto real = [&](const std::string& what, std::optional<double> got, std::optional<double> want) {
    if (got.has_value() != want.has_value() || (got && std::abs(*got - *want) > 1e-9))
      diffs.push_back(what + ": got " + (got ? format_real(*got) : "none") + ", want " +
                      (want ? format_real(*want) : "none"));
  };
  auto count = [&](const std::string& what, std::size_t got, int want) {
    if (got != static_cast<std::size_t>(want))
      diffs.push_back(what + ": got " + std::to_string(got) + ", want " + std::to_string(want));
  };
  if (!r.segmentation || !r.reconstruction || !r.articulation || !r.templates) {
    diffs.push_back("report is missing a modality");
    return diffs;
  }
  for (const auto& [role, want] : e.segmentation) {
    const std::string name(to_string(role));
    const auto it = r.segmentation->roles.find(role);
    if (it == r.segmentation->roles.end()) {
      diffs.push_back(name + " segmentation missing");
      continue;
    }
    count(name + " seg records", it->second.records, want.records);
    real(name + " mean IoU", it->second.mean_iou, want.mean_iou);
    real(name + " success %", it->second.success_pct, want.success_pct);
  }
  real("average IoU", r.segmentation->average_iou, e.average_iou);
  real("receptor CD median", r.reconstruction->receptor_median, e.receptor_cd);
  real("effector CD median", r.reconstruction->effector_median, e.effector_cd);
  real("total CD median", r.reconstruction->total_median, e.total_cd);
  count("CD missing", r.reconstruction->missing, e.cd_missing);
  const int cd_records = static_cast<int>(r.reconstruction->records);
  real("CD failure %", r.reconstruction->failure_pct, 100.0 * e.cd_missing / cd_records);
  const ArticulationSummary& a = *r.articulation;
  count("joint records", a.records, e.joints.records);
  count("joint failures", a.failures, e.joints.failures);
  count("joint type correct", a.type_correct, e.joints.type_correct);
  real("axis error", a.axis_error_mean, e.joints.axis_mean);
  real("origin error", a.origin_error_mean, e.joints.origin_mean);
  real("type accuracy", a.type_accuracy_pct, e.joints.type_pct);
  real("joint failure %", a.failure_pct, e.joints.failure_pct);
  const TemplateAccuracy& t = *r.templates;
  count("template records", t.records, e.templates.records);
  count("effect correct", t.effect_correct, e.templates.effect);
  count("mapping correct", t.mapping_correct, e.templates.mapping);
  count("both correct", t.both_correct, e.templates.both);
  const double n = e.templates.records;
  real("effect %", t.effect_pct, 100.0 * e.templates.effect / n);
  real("mapping %", t.mapping_pct, 100.0 * e.templates.mapping / n);
  real("overall %", t.overall_pct, 100.0 * e.templates.both / n);
  return diffs;
}

}  // namespace iotk::testing
