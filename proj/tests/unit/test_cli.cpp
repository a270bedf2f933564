#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "support/bundle.hpp"
#include "iotk/artfit.hpp"
#include "iotk/cli.hpp"

using namespace iotk;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = IOTK_FIXTURES_DIR;

struct Run {
  ExitStatus status;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const ExitStatus s = run_cli(args, out, err);
  return {s, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return kFixtures + "/" + name + "/asset.json"; }

}  // namespace

TEST_CASE("version and usage") {
  CHECK(run({"--version"}).out.find(kVersion) != std::string::npos);
  CHECK(run({"--version"}).status == ExitStatus::success);
  CHECK(run({}).status == ExitStatus::usage);
  CHECK(run({"frobnicate"}).status == ExitStatus::usage);
  CHECK(run({"--format", "yaml", "validate", fixture("light")}).status == ExitStatus::usage);
  CHECK(run({"--help"}).status == ExitStatus::success);
}

TEST_CASE("validate") {
  for (const char* name : {"microwave", "light", "faucet", "stove"}) {
    const Run r = run({"validate", fixture(name)});
    CHECK(r.status == ExitStatus::success);
    CHECK(r.out.empty());
  }
  testing::TempDir dir("cli_validate");
  const fs::path bad = dir.path() / "bad.json";
  std::string text = read_file(fixture("microwave"));
  text.replace(text.find("\"threshold\": 0.015"), 18, "\"threshold\": 0.5");
  write_file_atomic(bad, text);
  Run r = run({"validate", bad.string()});
  CHECK(r.status == ExitStatus::failure);
  CHECK(r.out.rfind("step-threshold-out-of-range: ", 0) == 0);

  write_file_atomic(bad, "{");
  r = run({"validate", bad.string()});
  CHECK(r.status == ExitStatus::failure);
  CHECK(r.out.rfind("syntax-error: ", 0) == 0);

  r = run({"--format", "machine", "validate", bad.string()});
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["valid"] == false);
  CHECK(doc["status"] == 1);

  CHECK(run({"validate", (dir.path() / "missing.json").string()}).status == ExitStatus::io);
}

TEST_CASE("simulate") {
  testing::TempDir dir("cli_sim");
  const fs::path out = dir.path() / "states.csv";
  const Run r = run({"-q", "simulate", fixture("stove"), kFixtures + "/stove/trace.csv", out.string()});
  CHECK(r.status == ExitStatus::success);
  CHECK(r.out.empty());
  const std::string csv = read_file(out);
  CHECK(csv.rfind("t,receptor_state,effector_state\n0,0,20\n1,1,30\n", 0) == 0);
  CHECK(csv.find("\n8,1,40\n") != std::string::npos);
}

TEST_CASE("compile") {
  testing::TempDir dir("cli_compile");
  Run r = run({"compile", fixture("light"), dir.path().string(), "-t", "behavior", "-t", "genesis"});
  CHECK(r.status == ExitStatus::success);
  CHECK(read_file(dir.path() / "light.behavior.script") ==
        read_file(std::string(IOTK_GOLDEN_DIR) + "/light.behavior.script"));
  CHECK(fs::exists(dir.path() / "light.genesis.script"));
  CHECK(run({"compile", fixture("light"), dir.path().string(), "-t", "unity"}).status == ExitStatus::usage);
  CHECK(run({"compile", fixture("light"), dir.path().string()}).status == ExitStatus::usage);

  // A failing target leaves no output behind. Joint-state targets cannot
  // read a fixed receptor.
  std::string text = read_file(fixture("light"));
  const std::string hinge = R"({"type": "revolute", "axis": [1, 0, 0], "origin": [0, 0, 1.2], "range": [0, 0.3]})";
  text.replace(text.find(hinge), hinge.size(), R"({"type": "fixed"})");
  write_file_atomic(dir.path() / "asset.json", text);
  fs::copy_file(kFixtures + "/light/light_bulb.xyz", dir.path() / "light_bulb.xyz");
  const fs::path out2 = dir.path() / "fixed";
  r = run({"compile", (dir.path() / "asset.json").string(), out2.string(), "-t", "behavior", "-t", "isaacsim"});
  CHECK(r.status == ExitStatus::failure);
  CHECK(r.err.find("unsupported-template") != std::string::npos);
  CHECK_FALSE(fs::exists(out2 / "light.behavior.script"));
}

TEST_CASE("evaluate") {
  testing::Rng rng(9);
  testing::TempDir dir("cli_eval");
  const auto videos = testing::random_bundle(rng);
  testing::write_bundle(rng, videos, dir.path() / "gt", dir.path() / "pred");
  Run r = run({"evaluate", (dir.path() / "gt").string(), (dir.path() / "pred").string()});
  CHECK(r.status == ExitStatus::success);
  CHECK_FALSE(r.out.empty());
  r = run({"--format", "machine", "evaluate", (dir.path() / "gt").string(), (dir.path() / "pred").string()});
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["status"] == 0);
  CHECK(doc["templates"]["records"] == videos.size());
  const fs::path report = dir.path() / "report.json";
  r = run({"--format", "machine", "evaluate", (dir.path() / "gt").string(), (dir.path() / "pred").string(),
           "--report", report.string(), "--iou-gate"});
  CHECK(r.status == ExitStatus::success);
  CHECK(nlohmann::json::parse(read_file(report)).contains("segmentation"));
  CHECK(run({"evaluate", (dir.path() / "none").string(), (dir.path() / "pred").string()}).status ==
        ExitStatus::io);
}

TEST_CASE("fit-joint") {
  testing::TempDir dir("cli_fit");
  JointSpec hinge;
  hinge.type = JointType::revolute;
  hinge.axis = Vec3::UnitY();
  hinge.origin = Vec3(0.5, 0, 0);
  const std::vector<Vec3> pts = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
  std::vector<PoseObservation> obs;
  for (double q : {0.0, 0.5, 1.0}) {
    PoseObservation o;
    for (const Vec3& p : pts) o.push_back(joint_transform(hinge, q).apply(p));
    obs.push_back(o);
  }
  write_file_atomic(dir.path() / "obs.txt", write_observations(obs));
  const fs::path out = dir.path() / "joint.json";
  Run r = run({"fit-joint", (dir.path() / "obs.txt").string(), out.string()});
  CHECK(r.status == ExitStatus::success);
  const JointSpec fit = parse_joint_document(read_file(out));
  CHECK(fit.type == JointType::revolute);
  CHECK(fit.axis.isApprox(Vec3::UnitY(), 1e-9));

  write_file_atomic(dir.path() / "line.txt", "0 0 0\n1 0 0\n2 0 0\n---\n0 0 1\n1 0 1\n2 0 1\n");
  r = run({"fit-joint", (dir.path() / "line.txt").string(), out.string()});
  CHECK(r.status == ExitStatus::failure);
  CHECK(r.err.find("degenerate-fit") != std::string::npos);
}
