#include "clscad/taxonomy.hpp"

#include <algorithm>

#include "clscad/error.hpp"
#include "json_util.hpp"

namespace clscad {

namespace {

const std::set<std::string> kEmpty;

void check_name(const std::string& name) {
  if (!is_valid_name(name)) throw Error(ErrorCode::SchemaViolation, "invalid atom name \"" + name + "\"");
}

}  // namespace

std::string_view to_string(Hierarchy h) {
  switch (h) {
    case Hierarchy::Formats: return "formats";
    case Hierarchy::Parts: return "parts";
    case Hierarchy::Attributes: return "attributes";
  }
  return "?";
}

Hierarchy hierarchy_from_string(std::string_view s) {
  for (Hierarchy h : kAllHierarchies)
    if (to_string(h) == s) return h;
  throw Error(ErrorCode::SchemaViolation, "unknown hierarchy \"" + std::string(s) + "\"");
}

std::string to_string(const Atom& a) {
  return std::string(to_string(a.hierarchy)) + ":" + a.name;
}

bool is_valid_name(std::string_view name) {
  if (name.empty()) return false;
  return std::none_of(name.begin(), name.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return u < 0x20 || u == 0x7f;
  });
}

// ---------------------------------------------------------------------------

Taxonomy::Taxonomy(Hierarchy h, const std::vector<std::string>& nodes,
                   const std::vector<Edge>& edges)
    : hierarchy_(h) {
  for (const auto& n : nodes) {
    check_name(n);
    if (!parents_.emplace(n, std::set<std::string>{}).second)
      throw Error(ErrorCode::DuplicateName, "\"" + n + "\" appears twice in " + std::string(to_string(h)));
  }
  for (const auto& [child, parent] : edges) {
    if (!contains(child)) throw Error(ErrorCode::UnknownNode, "edge from unknown node \"" + child + "\"");
    if (!contains(parent))
      throw Error(ErrorCode::UnknownParent, "edge to unknown parent \"" + parent + "\"");
    parents_[child].insert(parent);
  }
  rebuild();
}

Taxonomy::Taxonomy(Hierarchy h, Adjacency parents) : hierarchy_(h), parents_(std::move(parents)) {
  rebuild();
}

void Taxonomy::rebuild() {
  children_.clear();
  closure_.clear();
  for (const auto& [n, ps] : parents_) {
    children_[n];
    for (const auto& p : ps) children_[p].insert(n);
  }

  // Iterative DFS with colouring; closure(n) = {n} ∪ ⋃ closure(parent).
  enum class Mark { Fresh, Active, Done };
  std::map<std::string, Mark> mark;
  for (const auto& [n, _] : parents_) mark[n] = Mark::Fresh;

  for (const auto& [start, _] : parents_) {
    if (mark[start] == Mark::Done) continue;
    std::vector<std::pair<const std::string*, std::set<std::string>::const_iterator>> stack;
    mark[start] = Mark::Active;
    stack.emplace_back(&start, parents_.at(start).begin());
    while (!stack.empty()) {
      auto& [node, it] = stack.back();
      const auto& ps = parents_.at(*node);
      if (it != ps.end()) {
        const std::string& p = *it++;
        if (mark[p] == Mark::Active)
          throw Error(ErrorCode::WouldCreateCycle, "cycle through \"" + p + "\" in " +
                                                       std::string(to_string(hierarchy_)));
        if (mark[p] == Mark::Fresh) {
          mark[p] = Mark::Active;
          stack.emplace_back(&parents_.find(p)->first, parents_.at(p).begin());
        }
        continue;
      }
      std::set<std::string> up{*node};
      for (const auto& p : ps) {
        const auto& cp = closure_.at(p);
        up.insert(cp.begin(), cp.end());
      }
      closure_[*node] = std::move(up);
      mark[*node] = Mark::Done;
      stack.pop_back();
    }
  }
}

std::vector<std::string> Taxonomy::nodes() const {
  std::vector<std::string> out;
  out.reserve(parents_.size());
  for (const auto& [n, _] : parents_) out.push_back(n);
  return out;
}

std::vector<Taxonomy::Edge> Taxonomy::edges() const {
  std::vector<Edge> out;
  for (const auto& [n, ps] : parents_)
    for (const auto& p : ps) out.emplace_back(n, p);
  return out;
}

const std::set<std::string>& Taxonomy::parents(const std::string& name) const {
  auto it = parents_.find(name);
  return it == parents_.end() ? kEmpty : it->second;
}

const std::set<std::string>& Taxonomy::children(const std::string& name) const {
  auto it = children_.find(name);
  return it == children_.end() ? kEmpty : it->second;
}

std::set<std::string> Taxonomy::closure(const std::string& name) const {
  auto it = closure_.find(name);
  if (it == closure_.end()) return {name};
  return it->second;
}

bool Taxonomy::is_le(const std::string& sub, const std::string& super) const {
  if (sub == super) return true;
  auto it = closure_.find(sub);
  return it != closure_.end() && it->second.count(super) != 0;
}

Taxonomy Taxonomy::with_node(const std::string& name, const std::vector<std::string>& parents) const {
  check_name(name);
  if (contains(name)) throw Error(ErrorCode::DuplicateName, "\"" + name + "\" already exists");
  Adjacency next = parents_;
  auto& ps = next[name];
  for (const auto& p : parents) {
    // A new node cannot be its own parent: it does not exist yet.
    if (!contains(p)) throw Error(ErrorCode::UnknownParent, "unknown parent \"" + p + "\"");
    ps.insert(p);
  }
  return Taxonomy(hierarchy_, std::move(next));
}

Taxonomy Taxonomy::without_node(const std::string& name) const {
  if (!contains(name)) throw Error(ErrorCode::UnknownNode, "unknown node \"" + name + "\"");
  Adjacency next = parents_;
  const auto grand = next.at(name);
  next.erase(name);
  for (const auto& child : children(name)) {
    auto& ps = next.at(child);
    ps.erase(name);
    ps.insert(grand.begin(), grand.end());
  }
  return Taxonomy(hierarchy_, std::move(next));
}

Taxonomy Taxonomy::renamed(const std::string& old_name, const std::string& new_name) const {
  if (!contains(old_name)) throw Error(ErrorCode::UnknownNode, "unknown node \"" + old_name + "\"");
  check_name(new_name);
  if (contains(new_name)) throw Error(ErrorCode::DuplicateName, "\"" + new_name + "\" already exists");
  Adjacency next;
  for (const auto& [n, ps] : parents_) {
    auto& out = next[n == old_name ? new_name : n];
    for (const auto& p : ps) out.insert(p == old_name ? new_name : p);
  }
  return Taxonomy(hierarchy_, std::move(next));
}

// ---------------------------------------------------------------------------

TaxonomyContext TaxonomyContext::with_taxonomy(Taxonomy t) const {
  TaxonomyContext next = *this;
  next.taxonomies_[static_cast<int>(t.hierarchy())] = std::move(t);
  return next;
}

TaxonomyContext TaxonomyContext::create_node(const Atom& atom,
                                             const std::vector<std::string>& parents) const {
  return with_taxonomy(taxonomy(atom.hierarchy).with_node(atom.name, parents));
}

TaxonomyContext TaxonomyContext::delete_node(const std::string& name, Hierarchy h) const {
  return with_taxonomy(taxonomy(h).without_node(name));
}

TaxonomyContext TaxonomyContext::rename_node(const std::string& old_name, const std::string& new_name,
                                             Hierarchy h) const {
  return with_taxonomy(taxonomy(h).renamed(old_name, new_name));
}

bool TaxonomyContext::is_subatom(const Atom& a, const Atom& b) const {
  if (a.hierarchy != b.hierarchy) return false;
  return taxonomy(a.hierarchy).is_le(a.name, b.name);
}

// ---------------------------------------------------------------------------

nlohmann::json save_taxonomy(const Taxonomy& t) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [c, p] : t.edges()) edges.push_back({c, p});
  return {{"hierarchy", to_string(t.hierarchy())}, {"nodes", t.nodes()}, {"edges", edges}};
}

Taxonomy load_taxonomy(const nlohmann::json& doc) {
  const char* what = "taxonomy";
  Hierarchy h = hierarchy_from_string(detail::string_field(doc, "hierarchy", what));
  std::vector<std::string> nodes;
  for (const auto& n : detail::array_field(doc, "nodes", what)) nodes.push_back(detail::as_string(n, "node"));
  std::vector<Taxonomy::Edge> edges;
  if (doc.contains("edges")) {
    for (const auto& e : detail::array_field(doc, "edges", what)) {
      if (!e.is_array() || e.size() != 2)
        throw Error(ErrorCode::SchemaViolation, "taxonomy edge must be [child, parent]");
      edges.emplace_back(detail::as_string(e[0], "edge child"), detail::as_string(e[1], "edge parent"));
    }
  }
  return Taxonomy(h, nodes, edges);
}

TaxonomyContext load_taxonomies(const nlohmann::json& doc) {
  TaxonomyContext ctx;
  if (doc.is_object()) return ctx.with_taxonomy(load_taxonomy(doc));
  if (!doc.is_array()) throw Error(ErrorCode::SchemaViolation, "taxonomy document must be an object or array");
  std::set<Hierarchy> seen;
  for (const auto& entry : doc) {
    Taxonomy t = load_taxonomy(entry);
    if (!seen.insert(t.hierarchy()).second)
      throw Error(ErrorCode::SchemaViolation,
                  "hierarchy \"" + std::string(to_string(t.hierarchy())) + "\" given twice");
    ctx = ctx.with_taxonomy(std::move(t));
  }
  return ctx;
}

nlohmann::json save_taxonomies(const TaxonomyContext& ctx) {
  nlohmann::json out = nlohmann::json::array();
  for (Hierarchy h : kAllHierarchies) out.push_back(save_taxonomy(ctx.taxonomy(h)));
  return out;
}

}  // namespace clscad
