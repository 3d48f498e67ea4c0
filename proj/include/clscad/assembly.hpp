#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "clscad/catalog.hpp"
#include "clscad/synthesis.hpp"

namespace clscad {

struct Occurrence {
  std::string id;  // dotted pre-order path, "0" is the root
  std::string part_id;
  std::string config_id;

  bool operator==(const Occurrence&) const = default;
};

// Parent (requiring) side first.
struct OccurrenceEdge {
  std::string parent;
  std::string parent_jo;
  std::string child;
  std::string child_jo;
  JointKind kind = JointKind::Rigid;

  bool operator==(const OccurrenceEdge&) const = default;
};

struct OccurrenceTree {
  std::vector<Occurrence> nodes;      // pre-order
  std::vector<OccurrenceEdge> edges;  // pre-order of the child

  std::optional<std::size_t> index_of(const std::string& id) const;

  bool operator==(const OccurrenceTree&) const = default;
};

// Grouped arguments are deep-copied once per member joint origin.
OccurrenceTree expand_term(const Repository& repo, const Term& term);
OccurrenceTree expand_term(const Catalog& catalog, const Term& term);

struct LinkPartition {
  std::vector<std::string> links;    // "L0", "L1", ...
  std::vector<std::string> link_of;  // parallel to OccurrenceTree::nodes

  bool operator==(const LinkPartition&) const = default;
};

// Rigid-connected components, ordered by their first occurrence in pre-order.
LinkPartition partition_links(const OccurrenceTree& tree);

struct ProgramJoint {
  JointKind kind = JointKind::Rigid;
  std::string parent;
  std::string parent_jo;
  std::string child;
  std::string child_jo;

  bool operator==(const ProgramJoint&) const = default;
};

struct AssemblyProgram {
  std::vector<std::pair<std::string, int>> insertions;  // partId, quantity
  std::vector<std::string> links;
  std::vector<std::pair<std::string, std::string>> moves;  // occurrence, link
  std::vector<ProgramJoint> joints;
  std::vector<Occurrence> occurrences;  // which inserted part each occurrence id denotes

  bool operator==(const AssemblyProgram&) const = default;
};

AssemblyProgram compile_program(const OccurrenceTree& tree, const LinkPartition& partition);

nlohmann::json program_to_json(const AssemblyProgram& program);
AssemblyProgram program_from_json(const nlohmann::json& doc);

struct ReplayedAssembly {
  OccurrenceTree tree;
  LinkPartition partition;
};

/// Executes a program against a virtual occurrence store: parts are drawn
/// from the inserted pools, moved into links and joined. Throws
/// InvalidProgram on any inconsistency (wrong quantities, double moves,
/// foreign joint origins, rigid joints across links, ...).
ReplayedAssembly interpret_program(const Catalog& catalog, const AssemblyProgram& program);

struct BomRow {
  std::string part_id;
  std::string name;
  int quantity = 0;
  std::optional<double> unit_cost;
  std::optional<double> row_total;
};

struct Bom {
  std::vector<BomRow> rows;  // sorted by partId
  double total_known_cost = 0.0;
  bool cost_complete = true;
  int total_parts = 0;
};

Bom bom_and_cost(const Catalog& catalog, const OccurrenceTree& tree);
nlohmann::json bom_to_json(const Bom& bom);

}  // namespace clscad
