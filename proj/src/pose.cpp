#include "clscad/pose.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "clscad/error.hpp"
#include "json_util.hpp"

namespace clscad {

double Quaternion::norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

Quaternion Quaternion::normalized() const {
  double n = norm();
  return {w / n, x / n, y / n, z / n};
}

Quaternion Quaternion::canonical() const {
  if (w < 0.0 || (w == 0.0 && (x < 0.0 || (x == 0.0 && (y < 0.0 || (y == 0.0 && z < 0.0))))))
    return {-w, -x, -y, -z};
  return *this;
}

Quaternion Quaternion::axis_angle(const Vec3& axis, double angle) {
  double n = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  double s = std::sin(angle / 2.0) / n;
  return {std::cos(angle / 2.0), axis[0] * s, axis[1] * s, axis[2] * s};
}

Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

Vec3 rotate(const Quaternion& q, const Vec3& v) {
  // v + 2w(u × v) + 2u × (u × v), u = vector part
  const double ux = q.x, uy = q.y, uz = q.z;
  double cx = uy * v[2] - uz * v[1];
  double cy = uz * v[0] - ux * v[2];
  double cz = ux * v[1] - uy * v[0];
  double ccx = uy * cz - uz * cy;
  double ccy = uz * cx - ux * cz;
  double ccz = ux * cy - uy * cx;
  return {v[0] + 2.0 * (q.w * cx + ccx), v[1] + 2.0 * (q.w * cy + ccy), v[2] + 2.0 * (q.w * cz + ccz)};
}

std::array<std::array<double, 3>, 3> rotation_matrix(const Quaternion& q) {
  const double w = q.w, x = q.x, y = q.y, z = q.z;
  return {{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
           {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
           {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
}

Vec3 Pose::apply(const Vec3& p) const {
  Vec3 r = clscad::rotate(rotation, p);
  return {r[0] + translation[0], r[1] + translation[1], r[2] + translation[2]};
}

void check_unit(const Quaternion& q) {
  double n = q.norm();
  if (!(std::abs(n - 1.0) <= kUnitTolerance))
    throw Error(ErrorCode::NonUnitQuaternion, "quaternion norm " + std::to_string(n));
}

Pose compose(const Pose& a, const Pose& b) {
  check_unit(a.rotation);
  check_unit(b.rotation);
  return {a.apply(b.translation), (a.rotation * b.rotation).normalized()};
}

Pose invert(const Pose& a) {
  check_unit(a.rotation);
  Quaternion inv = a.rotation.conjugate();
  Vec3 t = rotate(inv, a.translation);
  return {{-t[0], -t[1], -t[2]}, inv};
}

double pose_distance(const Pose& a, const Pose& b) {
  auto ra = rotation_matrix(a.rotation);
  auto rb = rotation_matrix(b.rotation);
  double d = 0.0;
  for (int i = 0; i < 3; ++i) {
    d = std::max(d, std::abs(a.translation[i] - b.translation[i]));
    for (int j = 0; j < 3; ++j) d = std::max(d, std::abs(ra[i][j] - rb[i][j]));
  }
  return d;
}

Pose flip_pose() { return {{0, 0, 0}, {0.0, 1.0, 0.0, 0.0}}; }

Pose mate_child_pose(const Pose& parent_world, const Pose& parent_jo_local, const Pose& child_jo_local,
                     double theta) {
  Pose joint = compose(compose(parent_world, parent_jo_local), flip_pose());
  Pose turned = compose(joint, Pose::rotate_about({0, 0, 1}, theta));
  return compose(turned, invert(child_jo_local));
}

nlohmann::json pose_to_json(const Pose& p) {
  Quaternion q = p.rotation.canonical();
  return {{"origin", {p.translation[0], p.translation[1], p.translation[2]}},
          {"quaternion", {q.w, q.x, q.y, q.z}}};
}

namespace {

double number(const nlohmann::json& v, const char* what) {
  if (!v.is_number()) throw Error(ErrorCode::SchemaViolation, std::string(what) + " must be numeric");
  double d = v.get<double>();
  if (!std::isfinite(d)) throw Error(ErrorCode::SchemaViolation, std::string(what) + " must be finite");
  return d;
}

}  // namespace

Pose pose_from_json(const nlohmann::json& doc, bool normalize) {
  const auto& o = detail::array_field(doc, "origin", "frame");
  const auto& q = detail::array_field(doc, "quaternion", "frame");
  if (o.size() != 3) throw Error(ErrorCode::SchemaViolation, "frame.origin needs 3 components");
  if (q.size() != 4) throw Error(ErrorCode::SchemaViolation, "frame.quaternion needs 4 components");
  Pose p;
  for (int i = 0; i < 3; ++i) p.translation[i] = number(o[i], "frame.origin");
  p.rotation = {number(q[0], "frame.quaternion"), number(q[1], "frame.quaternion"),
                number(q[2], "frame.quaternion"), number(q[3], "frame.quaternion")};
  double n = p.rotation.norm();
  if (!(std::abs(n - 1.0) <= 1e-6))
    throw Error(ErrorCode::NonUnitQuaternion, "frame quaternion norm " + std::to_string(n));
  // Values that are unit up to rounding keep their bits so files round-trip.
  if (normalize && std::abs(n - 1.0) > 1e-12) p.rotation = p.rotation.normalized();
  return p;
}

}  // namespace clscad
