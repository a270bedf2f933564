#include "iotk/artfit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Geometry>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "iotk/numfmt.hpp"

namespace iotk {

RigidTransform fit_rigid(const std::vector<Vec3>& p, const std::vector<Vec3>& q) {
  if (p.size() != q.size())
    throw InvalidArgument("point sets differ in size: " + std::to_string(p.size()) + " vs " + std::to_string(q.size()));
  if (p.size() < 3) throw InvalidArgument("rigid fit needs at least 3 points");

  Vec3 pc = Vec3::Zero();
  Vec3 qc = Vec3::Zero();
  for (std::size_t i = 0; i < p.size(); ++i) {
    pc += p[i];
    qc += q[i];
  }
  pc /= static_cast<double>(p.size());
  qc /= static_cast<double>(q.size());

  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < p.size(); ++i) h += (p[i] - pc) * (q[i] - qc).transpose();

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3 s = svd.singularValues();
  if (!(s(0) > 0.0) || s(1) < 1e-12 * s(0)) throw DegenerateFit("point set is degenerate (coincident or collinear)");

  const Eigen::Matrix3d& u = svd.matrixU();
  const Eigen::Matrix3d& v = svd.matrixV();
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  d(2, 2) = (v * u.transpose()).determinant() < 0.0 ? -1.0 : 1.0;

  RigidTransform t;
  t.rotation = v * d * u.transpose();
  t.translation = qc - t.rotation * pc;
  return t;
}

ScrewMotion screw_decompose(const RigidTransform& t, const ScrewTolerances& tol) {
  const Eigen::Matrix3d& r = t.rotation;
  const double cos_theta = std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0);
  const double theta = std::acos(cos_theta);

  ScrewMotion m;
  if (theta < tol.rot) {
    const double len = t.translation.norm();
    if (len < tol.trans) return m;
    m.kind = JointType::prismatic;
    m.axis = t.translation / len;
    m.magnitude = len;
    return m;
  }

  const Vec3 skew(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));  // 2 sinθ · axis
  Vec3 axis;
  if (theta < std::numbers::pi / 2) {
    axis = skew.normalized();
  } else {
    // sinθ vanishes near π; read the axis off (R + Rᵀ)/2 − cosθ·I = (1 − cosθ)·a·aᵀ.
    const Eigen::Matrix3d sym = (r + r.transpose()) / 2.0 - cos_theta * Eigen::Matrix3d::Identity();
    Eigen::Index k = 0;
    sym.diagonal().maxCoeff(&k);
    axis = sym.col(k).normalized();
    if (axis.dot(skew) < 0.0) axis = -axis;
  }

  const double axial = axis.dot(t.translation);
  if (std::abs(axial) >= tol.trans)
    throw DegenerateFit("helical motion: rotation of " + format_real(theta) + " rad with axial translation " +
                        format_real(axial) + " m");
  const Vec3 perp = t.translation - axial * axis;
  m.kind = JointType::revolute;
  m.axis = axis;
  m.origin = 0.5 * (perp + axis.cross(perp) / std::tan(theta / 2.0));
  m.magnitude = theta;
  return m;
}

JointSpec fit_joint(const std::vector<PoseObservation>& observations, const FitOptions& options) {
  if (observations.empty()) throw InvalidArgument("fit_joint needs at least one observation");
  const PoseObservation& ref = observations.front();
  for (std::size_t i = 1; i < observations.size(); ++i)
    if (observations[i].size() != ref.size())
      throw InvalidArgument("observation " + std::to_string(i) + " has " + std::to_string(observations[i].size()) +
                            " points, observation 0 has " + std::to_string(ref.size()));

  std::vector<ScrewMotion> motions;
  for (std::size_t i = 1; i < observations.size(); ++i)
    motions.push_back(screw_decompose(fit_rigid(ref, observations[i]), options.tol));

  std::size_t prismatic = 0;
  std::size_t revolute = 0;
  for (const ScrewMotion& m : motions) {
    prismatic += m.kind == JointType::prismatic;
    revolute += m.kind == JointType::revolute;
  }
  JointSpec joint;
  if (prismatic + revolute == 0) return joint;
  if (options.require_unanimous && prismatic > 0 && revolute > 0)
    throw DegenerateFit("observations disagree: " + std::to_string(prismatic) + " prismatic and " +
                        std::to_string(revolute) + " revolute motions");
  joint.type = revolute >= prismatic ? JointType::revolute : JointType::prismatic;

  std::vector<const ScrewMotion*> used;
  for (const ScrewMotion& m : motions)
    if (m.kind == joint.type) used.push_back(&m);

  const Vec3 lead = used.front()->axis;
  Vec3 axis_sum = Vec3::Zero();
  std::vector<double> signed_magnitudes{0.0};
  for (const ScrewMotion* m : used) {
    const double sign = m->axis.dot(lead) < 0.0 ? -1.0 : 1.0;
    axis_sum += sign * m->axis;
    signed_magnitudes.push_back(sign * m->magnitude);
  }
  joint.axis = axis_sum.normalized();

  if (joint.type == JointType::revolute) {
    Vec3 origin_sum = Vec3::Zero();
    for (const ScrewMotion* m : used) origin_sum += m->origin - m->origin.dot(joint.axis) * joint.axis;
    joint.origin = origin_sum / static_cast<double>(used.size());
  }
  const auto [lo, hi] = std::minmax_element(signed_magnitudes.begin(), signed_magnitudes.end());
  joint.range_min = *lo;
  joint.range_max = *hi;
  return joint;
}

std::vector<PoseObservation> parse_observations(std::string_view text) {
  std::vector<PoseObservation> frames(1);
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line == "---") {
      if (frames.back().empty()) throw SyntaxError("empty frame before separator", line_no);
      frames.emplace_back();
      continue;
    }
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
      const std::size_t tok = pos;
      while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
      if (pos > tok) tokens.push_back(line.substr(tok, pos - tok));
    }
    if (tokens.empty()) continue;
    if (tokens.size() != 3) throw SyntaxError("expected \"x y z\"", line_no);
    Vec3 p;
    for (int i = 0; i < 3; ++i) {
      auto v = parse_real(tokens[static_cast<std::size_t>(i)]);
      if (!v || !std::isfinite(*v)) throw SyntaxError("coordinate is not a finite number", line_no);
      p(i) = *v;
    }
    frames.back().push_back(p);
  }
  if (frames.back().empty()) {
    if (frames.size() > 1) throw SyntaxError("empty frame after separator", line_no);
    frames.clear();
  }
  return frames;
}

std::string write_observations(const std::vector<PoseObservation>& observations) {
  std::string out;
  for (std::size_t f = 0; f < observations.size(); ++f) {
    if (f) out += "---\n";
    for (const Vec3& p : observations[f])
      out += format_real(p.x()) + " " + format_real(p.y()) + " " + format_real(p.z()) + "\n";
  }
  return out;
}

}  // namespace iotk
