#pragma once

#include <vector>

#include "iotk/errors.hpp"
#include "iotk/kinematics.hpp"
#include "iotk/types.hpp"

namespace iotk {

/// Point set of the moving part at one joint state. Observations of the same
/// part are corresponded index by index.
using PoseObservation = std::vector<Vec3>;

/// Rank-deficient point configuration (too few or collinear points), or a
/// motion outside the {fixed, prismatic, revolute} vocabulary.
class DegenerateFit : public Error {
 public:
  using Error::Error;
};

/// Least-squares proper rigid transform T minimizing Σ‖T(p_i) − q_i‖²
/// (Kabsch with reflection correction). Throws InvalidArgument on size
/// mismatch or fewer than 3 points, DegenerateFit on collinear points.
RigidTransform fit_rigid(const std::vector<Vec3>& p, const std::vector<Vec3>& q);

struct ScrewTolerances {
  double rot = 1e-3;     // radians
  double trans = 1e-4;   // meters
};

struct ScrewMotion {
  JointType kind = JointType::fixed;
  Vec3 axis = Vec3::UnitZ();
  Vec3 origin = Vec3::Zero();  // revolute: point on the axis closest to (0,0,0)
  double magnitude = 0.0;      // radians or meters; >= 0
};

/// Classifies a rigid transform as fixed, prismatic or revolute and returns
/// its screw parameters. Throws DegenerateFit for helical motion (rotation
/// plus an axial translation of at least tol.trans).
ScrewMotion screw_decompose(const RigidTransform& t, const ScrewTolerances& tol = {});

struct FitOptions {
  ScrewTolerances tol;
  /// Reject observation sets whose pairwise kinds disagree instead of
  /// taking the majority.
  bool require_unanimous = false;
};

/// Fits a joint to observations of the moving part, the first one taken as
/// the reference state q = 0.
///
/// Each later observation is aligned to the first and screw-decomposed. The
/// joint kind is the majority kind among non-fixed motions (ties go to
/// revolute; all fixed gives a fixed joint); axes are sign-aligned and
/// averaged, origins projected onto the plane through the first origin
/// perpendicular to the axis and averaged. The range spans the signed
/// magnitudes together with 0. A single observation yields a fixed joint.
///
/// Throws InvalidArgument with no observations or mismatched sizes, and
/// DegenerateFit on degenerate point sets, helical motion, or (with
/// require_unanimous) disagreeing kinds.
JointSpec fit_joint(const std::vector<PoseObservation>& observations, const FitOptions& options = {});

/// Multi-frame XYZ: frames of "x y z" lines separated by lines holding
/// exactly "---". Throws SyntaxError.
std::vector<PoseObservation> parse_observations(std::string_view text);
std::string write_observations(const std::vector<PoseObservation>& observations);

}  // namespace iotk
