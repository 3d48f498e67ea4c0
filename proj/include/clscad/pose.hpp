#pragma once

#include <array>

#include <json.hpp>

namespace clscad {

using Vec3 = std::array<double, 3>;

struct Quaternion {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

  double norm() const;
  Quaternion conjugate() const { return {w, -x, -y, -z}; }
  Quaternion normalized() const;
  // Same rotation with w >= 0.
  Quaternion canonical() const;

  static Quaternion axis_angle(const Vec3& axis, double angle);

  bool operator==(const Quaternion&) const = default;
};

Quaternion operator*(const Quaternion& a, const Quaternion& b);
Vec3 rotate(const Quaternion& q, const Vec3& v);
std::array<std::array<double, 3>, 3> rotation_matrix(const Quaternion& q);

// Tolerance on |q| - 1 accepted by every pose operation.
inline constexpr double kUnitTolerance = 1e-9;

/// Rigid transform: rotate, then translate. Millimeters, unit quaternion.
struct Pose {
  Vec3 translation{0.0, 0.0, 0.0};
  Quaternion rotation;

  static Pose identity() { return {}; }
  static Pose translate(double x, double y, double z) { return {{x, y, z}, {}}; }
  static Pose rotate_about(const Vec3& axis, double angle) { return {{0, 0, 0}, Quaternion::axis_angle(axis, angle)}; }

  Vec3 apply(const Vec3& p) const;

  bool operator==(const Pose&) const = default;
};

// Throws NonUnitQuaternion when |q| is off by more than kUnitTolerance.
void check_unit(const Quaternion& q);

Pose compose(const Pose& a, const Pose& b);
Pose invert(const Pose& a);

// Largest component difference of the homogeneous matrices of a and b.
double pose_distance(const Pose& a, const Pose& b);

// Rotation by pi about x: mated frames share origin and x axis, z axes oppose.
Pose flip_pose();

/// World pose of a child part mated to a parent part. The child's joint
/// origin lands on the parent's with z anti-parallel, then the child turns by
/// theta about the mated axis.
Pose mate_child_pose(const Pose& parent_world, const Pose& parent_jo_local, const Pose& child_jo_local,
                     double theta);

nlohmann::json pose_to_json(const Pose& p);  // {"origin": [...], "quaternion": [w, x, y, z]}
// Quaternions within 1e-6 of unit length are normalized (unless normalize is
// false, which keeps the stored bits); anything further off is rejected with
// NonUnitQuaternion.
Pose pose_from_json(const nlohmann::json& doc, bool normalize = true);

}  // namespace clscad
