#include "iotk/cli.hpp"

#include <filesystem>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "iotk/artfit.hpp"
#include "iotk/asset_io.hpp"
#include "iotk/codegen.hpp"
#include "iotk/metrics.hpp"
#include "iotk/runtime.hpp"
#include "iotk/validate.hpp"
#include "json_text.hpp"

namespace iotk {

namespace {

namespace fs = std::filesystem;
using detail::Json;

enum class Format { text, machine };

struct Globals {
  bool quiet = false;
  Format format = Format::text;
};

/// Output of one command: a text report and the machine document.
struct Outcome {
  ExitStatus status = ExitStatus::success;
  std::string text;
  Json doc = Json::object();
};

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const SyntaxError*>(&e)) return "syntax-error";
  if (dynamic_cast<const SchemaError*>(&e)) return "schema-error";
  if (dynamic_cast<const SemanticError*>(&e)) return "semantic-error";
  if (dynamic_cast<const IoError*>(&e)) return "io-error";
  if (dynamic_cast<const UnsupportedTemplate*>(&e)) return "unsupported-template";
  if (dynamic_cast<const DegenerateFit*>(&e)) return "degenerate-fit";
  return "invalid-argument";
}

std::string error_message(const std::exception& e) { return e.what(); }

Json violation_json(const Violation& v) {
  Json j = Json::object();
  j["code"] = v.code;
  j["severity"] = v.severity == Severity::error ? "error" : "warning";
  j["message"] = v.message;
  return j;
}

Outcome cmd_validate(const std::string& asset_path) {
  Outcome o;
  o.doc["command"] = "validate";
  Json violations = Json::array();
  const std::string text = read_file(asset_path);
  try {
    const ValidationReport report = validate_asset(read_asset_document(text));
    for (const Violation& v : report.violations) {
      o.text += v.code + ": " + v.message + "\n";
      violations.push_back(violation_json(v));
    }
    if (report.has_errors()) o.status = ExitStatus::failure;
  } catch (const SyntaxError& e) {
    o.text += "syntax-error: " + error_message(e) + "\n";
    violations.push_back(violation_json({"syntax-error", error_message(e), Severity::error}));
    o.status = ExitStatus::failure;
  } catch (const SchemaError& e) {
    o.text += "schema-error: " + error_message(e) + "\n";
    violations.push_back(violation_json({"schema-error", error_message(e), Severity::error}));
    o.status = ExitStatus::failure;
  }
  o.doc["valid"] = o.status == ExitStatus::success;
  o.doc["violations"] = violations;
  return o;
}

Outcome cmd_simulate(const std::string& asset_path, const std::string& trace_path, const std::string& out_path) {
  const InteractiveObjectAsset asset = load_asset(asset_path);
  const ActuationTrace trace = parse_trace(read_file(trace_path));
  const StateTrace states = run_trace(asset, trace);
  write_file_atomic(out_path, write_state_trace(states));
  Outcome o;
  o.text = "wrote " + out_path + " (" + std::to_string(states.samples.size()) + " samples)\n";
  o.doc["command"] = "simulate";
  o.doc["output"] = out_path;
  o.doc["samples"] = states.samples.size();
  return o;
}

Outcome cmd_compile(const std::string& asset_path, const std::vector<std::string>& targets,
                    const std::string& out_dir) {
  const InteractiveObjectAsset asset = load_asset(asset_path);
  std::optional<PartGeometry> geometry;
  if (needs_effector_geometry(asset))
    geometry = load_part_geometry(*asset.effector(), fs::path(asset_path).parent_path());

  // Emit everything before writing anything, so a failing target leaves no files.
  std::vector<std::pair<fs::path, std::string>> files;
  for (const std::string& id : targets) {
    const Target* target = find_target(id);
    const EmittedScript script = emit_script(asset, *target, geometry ? &*geometry : nullptr);
    files.emplace_back(fs::path(out_dir) / script_file_name(asset, *target), script.source_text);
  }
  fs::create_directories(out_dir);
  Outcome o;
  o.doc["command"] = "compile";
  Json outputs = Json::array();
  for (const auto& [path, text] : files) {
    write_file_atomic(path, text);
    o.text += "wrote " + path.string() + "\n";
    outputs.push_back(path.string());
  }
  o.doc["outputs"] = outputs;
  return o;
}

Outcome cmd_evaluate(const std::string& gt_dir, const std::string& pred_dir, const std::string& report_path,
                     bool iou_gate, Format format) {
  const EvaluationReport report = evaluate_bundle(gt_dir, pred_dir, EvaluationOptions{iou_gate});
  Outcome o;
  o.text = format_report_text(report);
  o.doc = detail::parse_json(format_report_machine(report));
  if (!report_path.empty()) {
    write_file_atomic(report_path, format == Format::machine ? format_report_machine(report) : o.text);
    o.text = "wrote " + report_path + "\n";
    o.doc = Json::object({{"command", "evaluate"}, {"report", report_path}});
  }
  return o;
}

Outcome cmd_fit_joint(const std::string& obs_path, const std::string& out_path, const FitOptions& options) {
  const auto observations = parse_observations(read_file(obs_path));
  const JointSpec joint = fit_joint(observations, options);
  write_file_atomic(out_path, serialize_joint_document(joint));
  Outcome o;
  o.text = "wrote " + out_path + " (" + std::string(to_string(joint.type)) + ")\n";
  o.doc["command"] = "fit-joint";
  o.doc["output"] = out_path;
  o.doc["type"] = std::string(to_string(joint.type));
  return o;
}

}  // namespace

ExitStatus run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interactive object toolkit: validate assets, run function templates, compile simulator scripts, "
               "evaluate predictions and fit joints.",
               "iotk"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Globals g;
  app.add_flag("-q,--quiet", g.quiet, "Suppress informational output");
  std::string format_name = "text";
  app.add_option("--format", format_name, "Output format: text or machine (one JSON document)")
      ->check(CLI::IsMember({"text", "machine"}))
      ->capture_default_str();

  std::function<Outcome()> action;

  std::string asset_path;
  auto* validate = app.add_subcommand("validate", "Check an asset document; prints CODE: message per violation");
  validate->add_option("asset", asset_path, "Asset document")->required();
  validate->callback([&] { action = [&] { return cmd_validate(asset_path); }; });

  std::string trace_path;
  std::string out_path;
  auto* simulate = app.add_subcommand("simulate", "Run an actuation trace through the asset's function template");
  simulate->add_option("asset", asset_path, "Asset document")->required();
  simulate->add_option("trace", trace_path, "Trace CSV (t,receptor_state)")->required();
  simulate->add_option("out", out_path, "Output CSV (t,receptor_state,effector_state)")->required();
  simulate->callback([&] { action = [&] { return cmd_simulate(asset_path, trace_path, out_path); }; });

  std::vector<std::string> targets;
  std::string out_dir;
  std::vector<std::string> target_ids;
  for (const Target& t : list_targets()) target_ids.push_back(t.id);
  auto* compile = app.add_subcommand("compile", "Emit simulator scripts for the asset's function template");
  compile->add_option("asset", asset_path, "Asset document")->required();
  compile->add_option("out_dir", out_dir, "Output directory")->required();
  compile->add_option("-t,--target", targets, "Target simulator (repeatable)")
      ->required()
      ->check(CLI::IsMember(target_ids));
  compile->callback([&] { action = [&] { return cmd_compile(asset_path, targets, out_dir); }; });

  std::string gt_dir;
  std::string pred_dir;
  std::string report_path;
  bool iou_gate = false;
  auto* evaluate = app.add_subcommand("evaluate", "Score a prediction bundle against ground truth");
  evaluate->add_option("gt_dir", gt_dir, "Ground-truth bundle")->required();
  evaluate->add_option("pred_dir", pred_dir, "Prediction bundle")->required();
  evaluate->add_option("--report", report_path, "Write the report here instead of standard output");
  evaluate->add_flag("--iou-gate", iou_gate, "Score downstream modalities only for parts with mean IoU > 0.5");
  evaluate->callback([&] { action = [&] { return cmd_evaluate(gt_dir, pred_dir, report_path, iou_gate, g.format); }; });

  std::string obs_path;
  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit-joint", "Fit a joint to corresponded point-set frames");
  fit_cmd->add_option("observations", obs_path, "Multi-frame XYZ, frames separated by ---")->required();
  fit_cmd->add_option("out", out_path, "Output joint document")->required();
  fit_cmd->add_option("--tol-rot", fit.tol.rot, "Rotation tolerance (rad)")->capture_default_str();
  fit_cmd->add_option("--tol-trans", fit.tol.trans, "Translation tolerance (m)")->capture_default_str();
  fit_cmd->add_flag("--require-unanimous", fit.require_unanimous, "Fail when observations disagree on joint kind");
  fit_cmd->callback([&] { action = [&] { return cmd_fit_joint(obs_path, out_path, fit); }; });

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ExitStatus::success : ExitStatus::usage;
  }
  g.format = format_name == "machine" ? Format::machine : Format::text;

  Outcome o;
  try {
    o = action();
  } catch (const IoError& e) {
    o.status = ExitStatus::io;
    o.doc = Json::object({{"error", error_kind(e)}, {"message", error_message(e)}});
    err << "iotk: " << error_message(e) << "\n";
  } catch (const fs::filesystem_error& e) {
    o.status = ExitStatus::io;
    o.doc = Json::object({{"error", "io-error"}, {"message", e.what()}});
    err << "iotk: " << e.what() << "\n";
  } catch (const Error& e) {
    o.status = ExitStatus::failure;
    o.doc = Json::object({{"error", error_kind(e)}, {"message", error_message(e)}});
    err << "iotk: " << error_kind(e) << ": " << error_message(e) << "\n";
  }
  o.doc["status"] = static_cast<int>(o.status);

  if (g.format == Format::machine) {
    out << detail::dump_canonical(o.doc) << "\n";
  } else if (!o.text.empty()) {
    // validate and evaluate print reports; the others only progress notes.
    const bool report = validate->parsed() || (evaluate->parsed() && report_path.empty());
    if (report || !g.quiet) out << o.text;
  }
  return o.status;
}

}  // namespace iotk
