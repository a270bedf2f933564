#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

#include "support/bundle.hpp"
#include "iotk/metrics.hpp"

using namespace iotk;
using std::numbers::pi;

namespace {

JointSpec revolute(Vec3 axis, Vec3 origin) {
  JointSpec j;
  j.type = JointType::revolute;
  j.axis = axis.normalized();
  j.origin = origin;
  j.range_max = 1;
  return j;
}

RigidTransform random_pose(testing::Rng& rng) {
  RigidTransform t;
  t.rotation = Eigen::AngleAxisd(testing::uniform(rng, 0, pi), testing::random_unit(rng)).toRotationMatrix();
  t.translation = testing::random_point(rng, 2.0);
  return t;
}

}  // namespace

TEST_CASE("2d IoU") {
  MaskImage a(2, 2);
  MaskImage b(2, 2);
  CHECK(iou_2d(a, b) == 1.0);
  a.at(0, 0) = a.at(0, 1) = 1;
  b.at(0, 1) = b.at(1, 1) = 1;
  CHECK(iou_2d(a, b) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(iou_2d(a, MaskImage(3, 2)), InvalidArgument);
  testing::Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const MaskImage x = testing::random_mask(rng, 5, 4, 0.5);
    const MaskImage y = testing::random_mask(rng, 5, 4, 0.5);
    CHECK(iou_2d(x, y) == oracle::mask_iou(x, y));
  }
}

TEST_CASE("3d IoU over point indices") {
  CHECK(iou_3d({}, {}, 4) == 1.0);
  CHECK(iou_3d({0, 1, 1}, {1, 2}, 4) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(iou_3d({5}, {}, 4), InvalidArgument);
}

TEST_CASE("segmentation summary") {
  MaskImage full(2, 1);
  full.at(0, 0) = full.at(0, 1) = 1;
  MaskImage half(2, 1);
  half.at(0, 0) = 1;
  const std::vector<SegRecord> recs = {
      {PartRole::receptor, {{full, full}}},
      {PartRole::receptor, {{half, full}}},  // exactly 0.5: not a success
      {PartRole::effector, {{full, full}, {MaskImage(2, 1), full}}},
  };
  const SegmentationSummary s = segmentation_summary(recs);
  CHECK(s.roles.at(PartRole::receptor).mean_iou == 0.75);
  CHECK(s.roles.at(PartRole::receptor).success_pct == 50.0);
  CHECK(s.roles.at(PartRole::effector).mean_iou == 0.5);
  CHECK(s.roles.at(PartRole::effector).success_pct == 0.0);
  CHECK(s.average_iou == 0.625);
  CHECK_THROWS_AS(record_iou({PartRole::receptor, {}}), InvalidArgument);
}

TEST_CASE("chamfer and median") {
  CHECK(chamfer_sq({Vec3(0, 0, 0)}, {Vec3(1, 0, 0)}) == 2.0);
  CHECK(chamfer_sq({Vec3(0, 0, 0), Vec3(2, 0, 0)}, {Vec3(0, 0, 0)}) == 2.0);
  CHECK_THROWS_AS(chamfer_sq({}, {Vec3::Zero()}), InvalidArgument);
  CHECK(median({3, 1, 2}) == 2);
  CHECK(median({4, 1, 3, 2}) == 2.5);
  CHECK_THROWS_AS(median({}), InvalidArgument);
  const auto r = reconstruction_summary({{PartRole::receptor, 1.0}, {PartRole::effector, 3.0},
                                         {PartRole::effector, std::nullopt}, {PartRole::receptor, 5.0}});
  CHECK(*r.receptor_median == 3.0);
  CHECK(*r.effector_median == 3.0);
  CHECK(*r.total_median == 3.0);
  CHECK(r.missing == 1);
  CHECK(r.failure_pct == 25.0);
}

TEST_CASE("axis and origin errors") {
  const auto z = revolute(Vec3::UnitZ(), Vec3::Zero());
  CHECK(joint_axis_error(revolute(Vec3::UnitX(), Vec3::Zero()), z) == doctest::Approx(pi / 2).epsilon(1e-15));
  CHECK(joint_axis_error(revolute(-Vec3::UnitZ(), Vec3::Zero()), z) == 0.0);
  CHECK(joint_axis_error(z, z) == 0.0);
  CHECK(joint_origin_error(revolute(Vec3::UnitX(), Vec3(0, 0, 7)), z) == 0.0);
  CHECK(joint_origin_error(revolute(Vec3::UnitX(), Vec3(3, 4, 7)), z) == doctest::Approx(5.0));
  CHECK_THROWS_AS(joint_axis_error(JointSpec{}, z), InvalidArgument);
  JointSpec slide = z;
  slide.type = JointType::prismatic;
  CHECK_THROWS_AS(joint_origin_error(slide, z), InvalidArgument);
  testing::Rng rng(2);
  for (int i = 0; i < 500; ++i) {
    const auto a = testing::random_joint(rng, JointType::revolute);
    const auto b = testing::random_joint(rng, JointType::revolute);
    CHECK(std::abs(joint_axis_error(a, b) - oracle::axis_angle(a.axis, b.axis)) < 1e-12);
    CHECK(std::abs(joint_origin_error(a, b) - oracle::point_line_distance(a.origin, b.origin, b.axis)) < 1e-12);
  }
}

TEST_CASE("articulation summary") {
  const auto z = revolute(Vec3::UnitZ(), Vec3::Zero());
  JointSpec slide = z;
  slide.type = JointType::prismatic;
  const auto s = articulation_summary({{z, z}, {slide, z}, {std::nullopt, z}, {JointSpec{}, JointSpec{}}});
  CHECK(s.records == 4);
  CHECK(s.failures == 1);
  CHECK(s.type_correct == 2);
  CHECK(*s.type_accuracy_pct == doctest::Approx(200.0 / 3.0));
  CHECK(*s.axis_error_mean == 0.0);
  CHECK(*s.origin_error_mean == 0.0);
  CHECK(s.failure_pct == 25.0);
  const auto none = articulation_summary({{std::nullopt, z}});
  CHECK_FALSE(none.type_accuracy_pct);
  CHECK_FALSE(none.axis_error_mean);
}

TEST_CASE("camera error is invariant to a global similarity") {
  testing::Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    CameraTrajectoryPair pair;
    RigidTransform g = random_pose(rng);
    const double scale = testing::uniform(rng, 0.2, 5.0);
    // Three or more frames: with two, the centers are collinear and roll is free.
    const int frames = 3 + testing::pick(rng, 7);
    for (int i = 0; i < frames; ++i) {
      const RigidTransform gt = random_pose(rng);
      RigidTransform pred;
      pred.rotation = g.rotation * gt.rotation;
      pred.translation = scale * (g.rotation * gt.translation) + g.translation;
      pair.ground_truth.push_back(gt);
      pair.predicted.push_back(pred);
    }
    const CameraPoseError e = camera_pose_error(pair);
    CHECK(e.rotation_mean < 1e-9);
    CHECK(e.translation_mean < 1e-9);
  }
}

TEST_CASE("two-frame trajectories leave roll about the baseline free") {
  CameraTrajectoryPair pair;
  RigidTransform a;
  RigidTransform b;
  b.translation = Vec3(1, 0, 0);
  pair.ground_truth = {a, b};
  const Eigen::Matrix3d roll = Eigen::AngleAxisd(0.7, Vec3::UnitX()).toRotationMatrix();
  for (const RigidTransform& g : pair.ground_truth) pair.predicted.push_back({roll * g.rotation, roll * g.translation});
  const CameraPoseError e = camera_pose_error(pair);
  CHECK(e.translation_mean < 1e-12);
  CHECK(e.rotation_mean == doctest::Approx(0.7));
}

TEST_CASE("camera error measures per-frame deviation") {
  CameraTrajectoryPair pair;
  for (int i = 0; i < 3; ++i) {
    RigidTransform t;
    t.translation = Vec3(i, i * i, 0);
    pair.ground_truth.push_back(t);
  }
  pair.predicted = pair.ground_truth;
  pair.predicted[1].rotation = Eigen::AngleAxisd(0.3, Vec3::UnitZ()).toRotationMatrix();
  const CameraPoseError e = camera_pose_error(pair);
  CHECK(e.rotation_mean == doctest::Approx(0.1));
  CHECK(e.translation_mean < 1e-12);
  pair.predicted.pop_back();
  CHECK_THROWS_AS(camera_pose_error(pair), InvalidArgument);
  CameraTrajectoryPair still;
  still.ground_truth = still.predicted = {RigidTransform{}, RigidTransform{}};
  CHECK_THROWS_AS(camera_pose_error(still), InvalidArgument);
}

TEST_CASE("camera csv round-trip") {
  testing::Rng rng(4);
  std::vector<RigidTransform> poses;
  for (int i = 0; i < 5; ++i) poses.push_back(random_pose(rng));
  const auto back = parse_camera_csv(write_camera_csv(poses));
  REQUIRE(back.size() == poses.size());
  for (std::size_t i = 0; i < poses.size(); ++i) {
    CHECK(back[i].rotation.isApprox(poses[i].rotation, 1e-12));
    CHECK(back[i].translation == poses[i].translation);
  }
  CHECK_THROWS_AS(parse_camera_csv("frame,qw\n"), SyntaxError);
}

TEST_CASE("template accuracy") {
  const TemplateLabel gt{EffectKind::fluid, MappingKind::linear};
  const auto acc = template_accuracy({{gt, gt},
                                      {TemplateLabel{EffectKind::fluid, MappingKind::step}, gt},
                                      {std::nullopt, gt},
                                      {TemplateLabel{EffectKind::geometry, MappingKind::linear}, gt}});
  CHECK(acc.effect_correct == 2);
  CHECK(acc.mapping_correct == 2);
  CHECK(acc.both_correct == 1);
  CHECK(acc.overall_pct == 25.0);
  CHECK_THROWS_AS(template_accuracy({}), InvalidArgument);
  CHECK(parse_template_document(serialize_template_document(gt)) == gt);
  CHECK_THROWS_AS(parse_template_document(R"({"effect": "sound", "mapping": "linear"})"), SchemaError);
}

TEST_CASE("random bundles match the brute-force recount") {
  testing::Rng rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    testing::TempDir dir("bundle");
    const auto videos = testing::random_bundle(rng);
    testing::write_bundle(rng, videos, dir.path() / "gt", dir.path() / "pred");
    const EvaluationReport r = evaluate_bundle(dir.path() / "gt", dir.path() / "pred");
    CHECK(r.videos.size() == videos.size());
    const auto diffs = testing::compare_report(r, testing::recount(videos));
    for (const std::string& d : diffs) FAIL_CHECK(d);
  }
}

TEST_CASE("bundle with cameras, reports and the IoU gate") {
  testing::Rng rng(78);
  testing::TempDir dir("camera");
  auto videos = testing::random_bundle(rng);
  testing::write_bundle(rng, videos, dir.path() / "gt", dir.path() / "pred");
  std::vector<RigidTransform> traj;
  for (int i = 0; i < 4; ++i) traj.push_back(random_pose(rng));
  write_file_atomic(dir.path() / "gt" / videos[0].name / "camera.csv", write_camera_csv(traj));
  write_file_atomic(dir.path() / "pred" / videos[0].name / "camera.csv", write_camera_csv(traj));
  const EvaluationReport r = evaluate_bundle(dir.path() / "gt", dir.path() / "pred");
  REQUIRE(r.camera);
  CHECK(r.camera_videos == 1);
  CHECK(r.camera->translation_mean < 1e-9);
  const std::string text = format_report_text(r);
  CHECK(text.find("IoU") != std::string::npos);
  const std::string machine = format_report_machine(r);
  CHECK(machine.find("\"camera\"") != std::string::npos);
  const EvaluationReport gated = evaluate_bundle(dir.path() / "gt", dir.path() / "pred", {true});
  REQUIRE(gated.articulation);
  CHECK(gated.articulation->records <= r.articulation->records);
  CHECK_THROWS_AS(evaluate_bundle(dir.path() / "nope", dir.path() / "pred"), IoError);
}

TEST_CASE("perfect predictions score perfectly") {
  testing::Rng rng(79);
  testing::TempDir dir("perfect");
  auto videos = testing::random_bundle(rng);
  for (auto& v : videos) {
    for (auto& [role, d] : v.parts) {
      d.pred_masks.clear();
      for (const auto& [frame, m] : d.gt_masks) d.pred_masks[frame] = m;
      d.pred_points = d.gt_points;
      d.pred_joint = d.gt_joint;
    }
    v.pred_template = v.gt_template;
  }
  testing::write_bundle(rng, videos, dir.path() / "gt", dir.path() / "pred");
  const EvaluationReport r = evaluate_bundle(dir.path() / "gt", dir.path() / "pred");
  for (const auto& [role, s] : r.segmentation->roles) {
    CHECK(s.mean_iou == 1.0);
    CHECK(s.success_pct == 100.0);
  }
  CHECK(*r.reconstruction->total_median == 0.0);
  CHECK(r.reconstruction->failure_pct == 0.0);
  CHECK(r.articulation->failure_pct == 0.0);
  CHECK(*r.articulation->type_accuracy_pct == 100.0);
  if (r.articulation->axis_error_mean) CHECK(*r.articulation->axis_error_mean == 0.0);
  if (r.articulation->origin_error_mean) CHECK(*r.articulation->origin_error_mean == 0.0);
  CHECK(r.templates->overall_pct == 100.0);
}

TEST_CASE("an empty prediction directory fails everything") {
  testing::Rng rng(80);
  testing::TempDir dir("empty");
  const auto videos = testing::random_bundle(rng);
  testing::write_bundle(rng, videos, dir.path() / "gt", dir.path() / "other");
  std::filesystem::create_directories(dir.path() / "pred");
  const EvaluationReport r = evaluate_bundle(dir.path() / "gt", dir.path() / "pred");
  CHECK(r.reconstruction->failure_pct == 100.0);
  CHECK(r.articulation->failure_pct == 100.0);
  CHECK_FALSE(r.articulation->type_accuracy_pct);
  CHECK(r.templates->overall_pct == 0.0);
  CHECK(r.segmentation->average_iou <= 1.0);
}
