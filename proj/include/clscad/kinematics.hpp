#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "clscad/assembly.hpp"
#include "clscad/catalog.hpp"
#include "clscad/pose.hpp"

namespace clscad {

struct PosedJoint {
  JointKind kind = JointKind::Rigid;
  std::string parent;
  std::string child;
  Pose frame;        // world frame the joint turns in, before its angle is applied
  Vec3 axis{0, 0, 1};  // world direction of frame z
  Vec3 pivot{0, 0, 0};
  double angle = 0.0;
};

struct PosedAssembly {
  std::vector<std::string> occurrences;  // pre-order
  std::vector<std::string> part_ids;
  std::vector<Pose> world;
  std::vector<PosedJoint> joints;  // program order
};

// Number of revolute edges.
int dof(const OccurrenceTree& tree);

/// Places every occurrence: root at identity, each child mated to its parent.
/// Revolute joints consume angles (radians) in program joint order.
/// Throws AngleCountMismatch when angles.size() != dof(tree).
PosedAssembly forward_kinematics(const Catalog& catalog, const OccurrenceTree& tree, const AssemblyProgram& program,
                                 std::span<const double> angles);

// URDF 1.0: one <link> per partition link with one visual per occurrence,
// one revolute <joint> per revolute edge. Lengths are written in meters.
std::string export_urdf(const PosedAssembly& posed, const LinkPartition& partition,
                        std::string_view robot_name = "assembly");

nlohmann::json export_scene(const PosedAssembly& posed);
// Occurrence placements only; joints are not part of the scene format.
PosedAssembly scene_from_json(const nlohmann::json& doc);

// "0.1,-0.5" -> {0.1, -0.5}; empty string -> {}. Throws InvalidRequest.
std::vector<double> parse_angles(std::string_view csv);

}  // namespace clscad
