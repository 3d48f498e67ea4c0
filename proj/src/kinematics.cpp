#include "clscad/kinematics.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "clscad/error.hpp"
#include "json_util.hpp"

namespace clscad {

int dof(const OccurrenceTree& tree) {
  int n = 0;
  for (const auto& e : tree.edges) n += e.kind == JointKind::Revolute;
  return n;
}

PosedAssembly forward_kinematics(const Catalog& catalog, const OccurrenceTree& tree, const AssemblyProgram& program,
                                 std::span<const double> angles) {
  const int expected = dof(tree);
  if (static_cast<int>(angles.size()) != expected)
    throw Error(ErrorCode::AngleCountMismatch,
                "expected " + std::to_string(expected) + " angles, got " + std::to_string(angles.size()));

  PosedAssembly out;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    index[tree.nodes[i].id] = i;
    out.occurrences.push_back(tree.nodes[i].id);
    out.part_ids.push_back(tree.nodes[i].part_id);
  }
  out.world.assign(tree.nodes.size(), Pose::identity());
  std::vector<char> placed(tree.nodes.size(), 0);
  if (!tree.nodes.empty()) placed[0] = 1;

  std::size_t next_angle = 0;
  for (const auto& j : program.joints) {
    auto pi = index.find(j.parent), ci = index.find(j.child);
    if (pi == index.end() || ci == index.end() || !placed[pi->second] || placed[ci->second])
      throw Error(ErrorCode::InvalidProgram, "joint " + j.parent + "-" + j.child + " out of order");
    const Part& parent = catalog.at(tree.nodes[pi->second].part_id);
    const Part& child = catalog.at(tree.nodes[ci->second].part_id);
    const JointOrigin* pjo = parent.find_joint_origin(j.parent_jo);
    const JointOrigin* cjo = child.find_joint_origin(j.child_jo);
    if (!pjo || !cjo) throw Error(ErrorCode::InvalidProgram, "joint " + j.parent + "-" + j.child + " names unknown joint origins");

    double theta = j.kind == JointKind::Revolute ? angles[next_angle++] : 0.0;
    const Pose& parent_world = out.world[pi->second];
    Pose frame = compose(compose(parent_world, pjo->frame), flip_pose());
    out.world[ci->second] = mate_child_pose(parent_world, pjo->frame, cjo->frame, theta);
    placed[ci->second] = 1;

    PosedJoint pj;
    pj.kind = j.kind;
    pj.parent = j.parent;
    pj.child = j.child;
    pj.frame = frame;
    pj.axis = rotate(frame.rotation, {0, 0, 1});
    pj.pivot = frame.translation;
    pj.angle = theta;
    out.joints.push_back(std::move(pj));
  }
  for (std::size_t i = 0; i < placed.size(); ++i)
    if (!placed[i]) throw Error(ErrorCode::InvalidProgram, "occurrence " + tree.nodes[i].id + " is never joined");
  return out;
}

namespace {

std::string num(double v) {
  if (std::abs(v) < 5e-13) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

std::string xyz_rpy(const Pose& p) {
  auto r = rotation_matrix(p.rotation);
  double roll, pitch, yaw;
  if (std::abs(r[2][0]) < 1.0 - 1e-12) {
    pitch = std::asin(-r[2][0]);
    roll = std::atan2(r[2][1], r[2][2]);
    yaw = std::atan2(r[1][0], r[0][0]);
  } else {
    pitch = r[2][0] < 0 ? M_PI / 2 : -M_PI / 2;
    roll = 0.0;
    yaw = std::atan2(-r[0][1], r[1][1]);
  }
  const auto& t = p.translation;
  return "xyz=\"" + num(t[0] / 1000.0) + " " + num(t[1] / 1000.0) + " " + num(t[2] / 1000.0) + "\" rpy=\"" +
         num(roll) + " " + num(pitch) + " " + num(yaw) + "\"";
}

}  // namespace

std::string export_urdf(const PosedAssembly& posed, const LinkPartition& partition, std::string_view robot_name) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < posed.occurrences.size(); ++i) index[posed.occurrences[i]] = i;

  // Link frames: the root occurrence for the first link, the turned joint
  // frame for every link hanging off a revolute joint.
  std::map<std::string, Pose> link_frame;
  if (!posed.occurrences.empty()) link_frame[partition.link_of[0]] = posed.world[0];
  for (const auto& j : posed.joints) {
    if (j.kind != JointKind::Revolute) continue;
    link_frame[partition.link_of[index.at(j.child)]] = compose(j.frame, Pose::rotate_about({0, 0, 1}, j.angle));
  }

  std::ostringstream out;
  out << "<?xml version=\"1.0\"?>\n";
  out << "<robot name=\"" << robot_name << "\">\n";
  for (const auto& link : partition.links) {
    out << "  <link name=\"" << link << "\">\n";
    const Pose inv = invert(link_frame.at(link));
    for (std::size_t i = 0; i < posed.occurrences.size(); ++i) {
      if (partition.link_of[i] != link) continue;
      out << "    <visual name=\"" << posed.occurrences[i] << "\">\n";
      out << "      <origin " << xyz_rpy(compose(inv, posed.world[i])) << "/>\n";
      out << "      <geometry>\n";
      out << "        <mesh filename=\"package://parts/" << posed.part_ids[i] << ".stl\" scale=\"0.001 0.001 0.001\"/>\n";
      out << "      </geometry>\n";
      out << "    </visual>\n";
    }
    out << "  </link>\n";
  }
  int n = 0;
  for (const auto& j : posed.joints) {
    if (j.kind != JointKind::Revolute) continue;
    const std::string& parent_link = partition.link_of[index.at(j.parent)];
    const std::string& child_link = partition.link_of[index.at(j.child)];
    out << "  <joint name=\"J" << n++ << "\" type=\"revolute\">\n";
    out << "    <parent link=\"" << parent_link << "\"/>\n";
    out << "    <child link=\"" << child_link << "\"/>\n";
    out << "    <origin " << xyz_rpy(compose(invert(link_frame.at(parent_link)), j.frame)) << "/>\n";
    out << "    <axis xyz=\"0 0 1\"/>\n";
    out << "    <limit lower=\"" << num(-M_PI) << "\" upper=\"" << num(M_PI) << "\" effort=\"0\" velocity=\"0\"/>\n";
    out << "  </joint>\n";
  }
  out << "</robot>\n";
  return out.str();
}

nlohmann::json export_scene(const PosedAssembly& posed) {
  auto out = nlohmann::json::array();
  for (std::size_t i = 0; i < posed.occurrences.size(); ++i) {
    auto pose = pose_to_json(posed.world[i]);
    out.push_back({{"occ", posed.occurrences[i]},
                   {"partId", posed.part_ids[i]},
                   {"origin", pose["origin"]},
                   {"quaternion", pose["quaternion"]}});
  }
  return out;
}

PosedAssembly scene_from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) throw Error(ErrorCode::SchemaViolation, "scene must be an array");
  PosedAssembly out;
  for (const auto& e : doc) {
    out.occurrences.push_back(detail::string_field(e, "occ", "scene entry"));
    out.part_ids.push_back(detail::string_field(e, "partId", "scene entry"));
    out.world.push_back(pose_from_json(e, false));
  }
  return out;
}

std::vector<double> parse_angles(std::string_view csv) {
  std::vector<double> out;
  if (csv.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    auto comma = csv.find(',', pos);
    std::string item(csv.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(v))
      throw Error(ErrorCode::InvalidRequest, "bad angle \"" + item + "\"");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace clscad
