#include "clscad/assembly.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "clscad/error.hpp"
#include "json_util.hpp"

namespace clscad {

std::optional<std::size_t> OccurrenceTree::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].id == id) return i;
  return std::nullopt;
}

namespace {

void expand_into(const Repository& repo, const Term& term, const std::string& id, OccurrenceTree& out) {
  const Combinator* c = repo.find(std::string_view(term.variant).substr(0, term.variant.rfind('/')));
  out.nodes.push_back({id, c->part_id, c->config_id});
  int next = 0;
  for (std::size_t i = 0; i < c->args.size(); ++i) {
    const auto& arg = c->args[i];
    const Term& sub = term.children[i];
    const Combinator* child = repo.find(std::string_view(sub.variant).substr(0, sub.variant.rfind('/')));
    for (const auto& member : arg.member_uuids) {
      std::string child_id = id + "." + std::to_string(next++);
      out.edges.push_back({id, member, child_id, child->root_uuid, arg.joint_kind});
      expand_into(repo, sub, child_id, out);
    }
  }
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

OccurrenceTree expand_term(const Repository& repo, const Term& term) {
  check_term(repo, term);
  OccurrenceTree out;
  expand_into(repo, term, "0", out);
  return out;
}

OccurrenceTree expand_term(const Catalog& catalog, const Term& term) {
  return expand_term(Repository(catalog), term);
}

LinkPartition partition_links(const OccurrenceTree& tree) {
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) pos[tree.nodes[i].id] = i;
  UnionFind uf(tree.nodes.size());
  for (const auto& e : tree.edges)
    if (e.kind == JointKind::Rigid) uf.unite(pos.at(e.parent), pos.at(e.child));

  // Representatives are the smallest pre-order index, so numbering in
  // pre-order orders links by their first occurrence.
  LinkPartition out;
  std::map<std::size_t, std::string> name;
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    std::size_t r = uf.find(i);
    auto it = name.find(r);
    if (it == name.end()) {
      it = name.emplace(r, "L" + std::to_string(out.links.size())).first;
      out.links.push_back(it->second);
    }
    out.link_of.push_back(it->second);
  }
  return out;
}

AssemblyProgram compile_program(const OccurrenceTree& tree, const LinkPartition& partition) {
  AssemblyProgram p;
  std::map<std::string, std::size_t> slot;
  for (const auto& n : tree.nodes) {
    auto [it, fresh] = slot.emplace(n.part_id, p.insertions.size());
    if (fresh) p.insertions.emplace_back(n.part_id, 0);
    ++p.insertions[it->second].second;
  }
  p.links = partition.links;
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) p.moves.emplace_back(tree.nodes[i].id, partition.link_of[i]);
  for (const auto& e : tree.edges) p.joints.push_back({e.kind, e.parent, e.parent_jo, e.child, e.child_jo});
  p.occurrences = tree.nodes;
  return p;
}

nlohmann::json program_to_json(const AssemblyProgram& program) {
  auto ins = nlohmann::json::array();
  for (const auto& [id, q] : program.insertions) ins.push_back({id, q});
  auto moves = nlohmann::json::array();
  for (const auto& [occ, link] : program.moves) moves.push_back({occ, link});
  auto joints = nlohmann::json::array();
  for (const auto& j : program.joints)
    joints.push_back({to_string(j.kind), j.parent, j.parent_jo, j.child, j.child_jo});
  auto occs = nlohmann::json::array();
  for (const auto& o : program.occurrences) occs.push_back({o.id, o.part_id, o.config_id});
  return {{"insertions", ins}, {"links", program.links}, {"moves", moves}, {"joints", joints}, {"occurrences", occs}};
}

namespace {

const nlohmann::json& tuple(const nlohmann::json& v, std::size_t n, const char* what) {
  if (!v.is_array() || v.size() != n)
    throw Error(ErrorCode::SchemaViolation, std::string(what) + " entries must have " + std::to_string(n) + " elements");
  return v;
}

}  // namespace

AssemblyProgram program_from_json(const nlohmann::json& doc) {
  const char* what = "program";
  AssemblyProgram p;
  for (const auto& e : detail::array_field(doc, "insertions", what)) {
    tuple(e, 2, "insertions");
    if (!e[1].is_number_integer()) throw Error(ErrorCode::SchemaViolation, "insertion quantity must be an integer");
    p.insertions.emplace_back(detail::as_string(e[0], "insertion partId"), e[1].get<int>());
  }
  for (const auto& e : detail::array_field(doc, "links", what)) p.links.push_back(detail::as_string(e, "link"));
  for (const auto& e : detail::array_field(doc, "moves", what)) {
    tuple(e, 2, "moves");
    p.moves.emplace_back(detail::as_string(e[0], "move occurrence"), detail::as_string(e[1], "move link"));
  }
  for (const auto& e : detail::array_field(doc, "joints", what)) {
    tuple(e, 5, "joints");
    p.joints.push_back({joint_kind_from_string(detail::as_string(e[0], "joint kind")), detail::as_string(e[1], "joint"),
                        detail::as_string(e[2], "joint"), detail::as_string(e[3], "joint"),
                        detail::as_string(e[4], "joint")});
  }
  for (const auto& e : detail::array_field(doc, "occurrences", what)) {
    tuple(e, 3, "occurrences");
    p.occurrences.push_back({detail::as_string(e[0], "occurrence"), detail::as_string(e[1], "occurrence"),
                             detail::as_string(e[2], "occurrence")});
  }
  return p;
}

// ---------------------------------------------------------------------------

ReplayedAssembly interpret_program(const Catalog& catalog, const AssemblyProgram& program) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidProgram, msg); };

  // Insert: one pool per part.
  std::map<std::string, int> pool;
  for (const auto& [part_id, qty] : program.insertions) {
    if (!catalog.find(part_id)) fail("insertion of unknown part \"" + part_id + "\"");
    if (qty < 1) fail("insertion of \"" + part_id + "\" with quantity " + std::to_string(qty));
    if (!pool.emplace(part_id, qty).second) fail("part \"" + part_id + "\" inserted twice");
  }

  // Materialize occurrences from the pools.
  ReplayedAssembly out;
  std::map<std::string, std::size_t> occ_index;
  for (const auto& o : program.occurrences) {
    auto it = pool.find(o.part_id);
    if (it == pool.end() || it->second == 0) fail("no inserted copy of \"" + o.part_id + "\" left for " + o.id);
    --it->second;
    const JointOrigin* root = catalog.at(o.part_id).find_joint_origin(o.config_id);
    if (!root || !root->provides) fail(o.id + ": \"" + o.config_id + "\" is not a configuration of " + o.part_id);
    if (!occ_index.emplace(o.id, out.tree.nodes.size()).second) fail("occurrence " + o.id + " declared twice");
    out.tree.nodes.push_back(o);
  }
  for (const auto& [part_id, left] : pool)
    if (left != 0) fail(std::to_string(left) + " inserted copies of \"" + part_id + "\" never used");

  // Create links, then move every occurrence exactly once.
  std::set<std::string> links;
  for (const auto& l : program.links)
    if (!links.insert(l).second) fail("link " + l + " created twice");
  out.partition.links = program.links;
  out.partition.link_of.assign(out.tree.nodes.size(), "");
  for (const auto& [occ, link] : program.moves) {
    auto it = occ_index.find(occ);
    if (it == occ_index.end()) fail("move of unknown occurrence " + occ);
    if (!links.count(link)) fail("move into unknown link " + link);
    auto& slot = out.partition.link_of[it->second];
    if (!slot.empty()) fail("occurrence " + occ + " moved twice");
    slot = link;
  }
  for (std::size_t i = 0; i < out.tree.nodes.size(); ++i)
    if (out.partition.link_of[i].empty()) fail("occurrence " + out.tree.nodes[i].id + " never moved");

  // Joints.
  std::vector<int> incoming(out.tree.nodes.size(), 0);
  std::set<std::pair<std::string, std::string>> used_slots;
  UnionFind whole(out.tree.nodes.size()), rigid(out.tree.nodes.size());
  for (const auto& j : program.joints) {
    auto pi = occ_index.find(j.parent), ci = occ_index.find(j.child);
    if (pi == occ_index.end() || ci == occ_index.end()) fail("joint between unknown occurrences");
    const auto& parent = out.tree.nodes[pi->second];
    const auto& child = out.tree.nodes[ci->second];
    const JointOrigin* pjo = catalog.at(parent.part_id).find_joint_origin(j.parent_jo);
    if (!pjo || !pjo->requires_) fail(j.parent_jo + " is not a requiring joint origin of " + parent.id);
    if (pjo->joint_kind != j.kind) fail("joint kind at " + j.parent_jo + " does not match its annotation");
    if (j.parent_jo == parent.config_id) fail(parent.id + " joins through its own root joint origin");
    if (j.child_jo != child.config_id) fail(child.id + " must be joined at its root " + child.config_id);
    if (++incoming[ci->second] > 1) fail(child.id + " has two parents");
    if (!used_slots.emplace(parent.id, j.parent_jo).second) fail(j.parent_jo + " of " + parent.id + " used twice");
    if (whole.find(pi->second) == whole.find(ci->second)) fail("joint " + parent.id + "-" + child.id + " closes a loop");
    whole.unite(pi->second, ci->second);
    const bool same_link = out.partition.link_of[pi->second] == out.partition.link_of[ci->second];
    if (j.kind == JointKind::Rigid && !same_link) fail("rigid joint crosses links at " + child.id);
    if (j.kind == JointKind::Revolute && same_link) fail("revolute joint inside a link at " + child.id);
    if (j.kind == JointKind::Rigid) rigid.unite(pi->second, ci->second);
    out.tree.edges.push_back({j.parent, j.parent_jo, j.child, j.child_jo, j.kind});
  }
  if (!out.tree.nodes.empty() && program.joints.size() != out.tree.nodes.size() - 1)
    fail("joints do not connect all occurrences");

  // A link must be exactly one rigid component.
  std::map<std::string, std::size_t> component_of_link;
  for (std::size_t i = 0; i < out.tree.nodes.size(); ++i) {
    auto [it, fresh] = component_of_link.emplace(out.partition.link_of[i], rigid.find(i));
    if (!fresh && it->second != rigid.find(i)) fail("link " + it->first + " is not rigidly connected");
  }
  for (const auto& l : program.links)
    if (!component_of_link.count(l)) fail("link " + l + " stays empty");
  return out;
}

// ---------------------------------------------------------------------------

Bom bom_and_cost(const Catalog& catalog, const OccurrenceTree& tree) {
  std::map<std::string, int> qty;
  for (const auto& n : tree.nodes) ++qty[n.part_id];
  Bom bom;
  for (const auto& [id, q] : qty) {
    const Part& part = catalog.at(id);
    BomRow row{id, part.name, q, part.unit_cost, std::nullopt};
    if (part.unit_cost) {
      row.row_total = *part.unit_cost * q;
      bom.total_known_cost += *row.row_total;
    } else {
      bom.cost_complete = false;
    }
    bom.total_parts += q;
    bom.rows.push_back(std::move(row));
  }
  return bom;
}

nlohmann::json bom_to_json(const Bom& bom) {
  auto rows = nlohmann::json::array();
  for (const auto& r : bom.rows) {
    rows.push_back({{"partId", r.part_id},
                    {"name", r.name},
                    {"quantity", r.quantity},
                    {"unitCost", r.unit_cost ? nlohmann::json(*r.unit_cost) : nlohmann::json(nullptr)},
                    {"rowTotal", r.row_total ? nlohmann::json(*r.row_total) : nlohmann::json(nullptr)},
                    {"costMissing", !r.unit_cost.has_value()}});
  }
  return {{"rows", rows},
          {"totalParts", bom.total_parts},
          {"totalKnownCost", bom.total_known_cost},
          {"costComplete", bom.cost_complete}};
}

}  // namespace clscad
