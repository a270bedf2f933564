#include "iotk/kinematics.hpp"

#include <algorithm>

#include <Eigen/Geometry>

#include "iotk/errors.hpp"

namespace iotk {

RigidTransform RigidTransform::inverse() const {
  RigidTransform inv;
  inv.rotation = rotation.transpose();
  inv.translation = -(inv.rotation * translation);
  return inv;
}

RigidTransform operator*(const RigidTransform& a, const RigidTransform& b) {
  RigidTransform out;
  out.rotation = a.rotation * b.rotation;
  out.translation = a.rotation * b.translation + a.translation;
  return out;
}

RigidTransform joint_transform(const JointSpec& joint, double q) {
  RigidTransform t;
  switch (joint.type) {
    case JointType::fixed:
      break;
    case JointType::prismatic:
      t.translation = q * joint.axis;
      break;
    case JointType::revolute:
      t.rotation = Eigen::AngleAxisd(q, joint.axis).toRotationMatrix();
      // p -> R (p - o) + o
      t.translation = joint.origin - t.rotation * joint.origin;
      break;
  }
  return t;
}

PartGeometry apply_joint(const JointSpec& joint, double q, const PartGeometry& geometry) {
  const RigidTransform t = joint_transform(joint, q);
  PartGeometry out;
  out.points.reserve(geometry.points.size());
  for (const Vec3& p : geometry.points) out.points.push_back(t.apply(p));
  out.faces = geometry.faces;
  return out;
}

double clamp_state(const JointSpec& joint, double q) {
  if (joint.is_fixed()) throw InvalidArgument("a fixed joint has no state to clamp");
  if (!(joint.range_min <= joint.range_max)) throw InvalidArgument("joint range is inverted");
  return std::clamp(q, joint.range_min, joint.range_max);
}

}  // namespace iotk
