#pragma once

#include <Eigen/Core>

#include "iotk/types.hpp"

namespace iotk {

/// Proper rigid motion p -> rotation * p + translation.
struct RigidTransform {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  RigidTransform inverse() const;

  /// (a * b).apply(p) == a.apply(b.apply(p))
  friend RigidTransform operator*(const RigidTransform& a, const RigidTransform& b);
};

/// Transform of a part whose joint is at state `q` (relative to q = 0).
/// Revolute joints rotate by `q` radians about the line through `origin`
/// along `axis`, right-handed; prismatic joints translate by q * axis and
/// ignore the origin; fixed joints are the identity.
RigidTransform joint_transform(const JointSpec& joint, double q);

/// Maps every point through joint_transform(joint, q). Faces are copied
/// unchanged.
PartGeometry apply_joint(const JointSpec& joint, double q, const PartGeometry& geometry);

/// Clips q to [range_min, range_max]. Throws InvalidArgument for a fixed
/// joint, which has no state.
double clamp_state(const JointSpec& joint, double q);

}  // namespace iotk
