#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "iotk/errors.hpp"
#include "iotk/mask.hpp"
#include "iotk/runtime.hpp"
#include "iotk/types.hpp"
#include "iotk/validate.hpp"

namespace iotk {

/// Thrown by parse_asset when a schema-correct document violates asset
/// invariants. Carries the full report.
class SemanticError : public Error {
 public:
  explicit SemanticError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

// ---------------------------------------------------------------------------
// Interactive Object Asset (IOA) documents
//
// An IOA document is a JSON object with exactly these keys, in this order
// when serialized:
//
//   format_version       "1.0"
//   object_id            string
//   parts                [ {id, role, geometry: {file, format},
//                           joint: {type, axis, origin, range}} ]
//   function_template    {receptor, effector, receptor_space, effector_space,
//                         mapping: {type, params}, effect: {type, params}}
//   metadata             {string: string}   (optional on input)
//
// Unknown keys anywhere are schema errors. All numbers are read as doubles.
// ---------------------------------------------------------------------------

/// Syntax and schema only; does not run validate_asset.
InteractiveObjectAsset read_asset_document(std::string_view text);

/// read_asset_document + validate_asset. Returns the canonical copy (unit
/// axes). Throws SyntaxError, SchemaError or SemanticError.
InteractiveObjectAsset parse_asset(std::string_view text);

/// Deterministic canonical text: fixed key order, two-space indent, numeric
/// arrays on one line, shortest round-trip reals, trailing newline.
/// Throws InvalidArgument if the asset has validation errors.
std::string serialize_asset(const InteractiveObjectAsset& asset);

InteractiveObjectAsset load_asset(const std::filesystem::path& path);

/// Joint sub-document: {"type", "axis", "origin", "range"}.
JointSpec parse_joint_document(std::string_view text);
std::string serialize_joint_document(const JointSpec& joint);

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

/// xyz: one "x y z" per line ('#' comments and blank lines allowed).
/// ply-ascii: vertex x/y/z properties and optional face vertex_indices.
/// obj: v/f records; polygons are fan-triangulated.
/// Throws SyntaxError with the offending line number.
PartGeometry parse_pointcloud(std::string_view text, GeometryFormat format);
PartGeometry load_pointcloud(const std::filesystem::path& path, GeometryFormat format);
std::string write_xyz(const PartGeometry& geometry);

/// Loads the geometry referenced by a part, resolving relative paths
/// against `base_dir`.
PartGeometry load_part_geometry(const Part& part, const std::filesystem::path& base_dir);

// ---------------------------------------------------------------------------
// Masks
// ---------------------------------------------------------------------------

enum class MaskFormat { pgm, rle_json };

/// Binary PGM (P5, maxval 255); nonzero pixels are foreground.
MaskImage parse_pgm(std::string_view bytes);
std::string write_pgm(const MaskImage& mask);

/// {"size": [h, w], "counts": [...]}: column-major runs, first run is
/// background.
MaskImage parse_rle(std::string_view text);
std::string write_rle(const MaskImage& mask);

MaskImage load_mask(const std::filesystem::path& path, MaskFormat format);

/// 3D part masks on a point set: {"part_id": [point indices], ...}.
std::map<std::string, std::vector<std::size_t>> parse_index_masks(std::string_view text);

// ---------------------------------------------------------------------------
// Traces
// ---------------------------------------------------------------------------

/// CSV with header "t,receptor_state" and strictly increasing t.
ActuationTrace parse_trace(std::string_view text);
std::string write_trace(const ActuationTrace& trace);

/// CSV with header "t,receptor_state,effector_state".
std::string write_state_trace(const StateTrace& trace);

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

/// Throws IoError.
std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file, then renames over `path`, so a
/// failed write never leaves a partial file behind. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace iotk
