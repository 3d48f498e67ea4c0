#pragma once

#include <array>
#include <compare>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace clscad {

enum class Hierarchy { Formats = 0, Parts = 1, Attributes = 2 };

inline constexpr std::array<Hierarchy, 3> kAllHierarchies{Hierarchy::Formats, Hierarchy::Parts,
                                                          Hierarchy::Attributes};

std::string_view to_string(Hierarchy h);
// Throws SchemaViolation on anything but "formats", "parts", "attributes".
Hierarchy hierarchy_from_string(std::string_view s);

struct Atom {
  Hierarchy hierarchy = Hierarchy::Parts;
  std::string name;

  auto operator<=>(const Atom&) const = default;
};

std::string to_string(const Atom& a);  // "parts:Screw"

// Names must be non-empty and free of control characters.
bool is_valid_name(std::string_view name);

/// One subtype hierarchy: a DAG of names where an edge (child, parent) means
/// child <= parent. The reflexive-transitive ancestor closure is computed on
/// construction, so a Taxonomy is cheap to query and never mutated in place.
class Taxonomy {
 public:
  using Edge = std::pair<std::string, std::string>;  // (child, parent)

  explicit Taxonomy(Hierarchy h) : hierarchy_(h) {}

  // Throws DuplicateName, UnknownParent, WouldCreateCycle, SchemaViolation.
  Taxonomy(Hierarchy h, const std::vector<std::string>& nodes, const std::vector<Edge>& edges);

  Hierarchy hierarchy() const { return hierarchy_; }
  bool contains(const std::string& name) const { return parents_.count(name) != 0; }
  std::size_t size() const { return parents_.size(); }

  std::vector<std::string> nodes() const;  // sorted
  std::vector<Edge> edges() const;         // sorted
  const std::set<std::string>& parents(const std::string& name) const;
  const std::set<std::string>& children(const std::string& name) const;

  // Reflexive ancestors. Unknown names map to a closure of just themselves.
  std::set<std::string> closure(const std::string& name) const;
  bool is_le(const std::string& sub, const std::string& super) const;

  Taxonomy with_node(const std::string& name, const std::vector<std::string>& parents) const;
  Taxonomy without_node(const std::string& name) const;
  Taxonomy renamed(const std::string& old_name, const std::string& new_name) const;

  bool operator==(const Taxonomy& other) const {
    return hierarchy_ == other.hierarchy_ && parents_ == other.parents_;
  }

 private:
  using Adjacency = std::map<std::string, std::set<std::string>>;
  Taxonomy(Hierarchy h, Adjacency parents);
  void rebuild();

  Hierarchy hierarchy_;
  Adjacency parents_;
  Adjacency children_;
  Adjacency closure_;
};

/// The three hierarchies together. Immutable; every mutation returns a new
/// context.
class TaxonomyContext {
 public:
  TaxonomyContext()
      : taxonomies_{Taxonomy(Hierarchy::Formats), Taxonomy(Hierarchy::Parts),
                    Taxonomy(Hierarchy::Attributes)} {}

  const Taxonomy& taxonomy(Hierarchy h) const { return taxonomies_[static_cast<int>(h)]; }
  TaxonomyContext with_taxonomy(Taxonomy t) const;

  bool contains(const Atom& a) const { return taxonomy(a.hierarchy).contains(a.name); }

  TaxonomyContext create_node(const Atom& atom, const std::vector<std::string>& parents) const;
  TaxonomyContext delete_node(const std::string& name, Hierarchy h) const;
  TaxonomyContext rename_node(const std::string& old_name, const std::string& new_name,
                              Hierarchy h) const;

  // a <= b: same hierarchy and b is a reflexive ancestor of a.
  bool is_subatom(const Atom& a, const Atom& b) const;

  bool operator==(const TaxonomyContext&) const = default;

 private:
  std::array<Taxonomy, 3> taxonomies_;
};

nlohmann::json save_taxonomy(const Taxonomy& t);
Taxonomy load_taxonomy(const nlohmann::json& doc);

// Accepts a single hierarchy object or an array of them; hierarchies that
// are not mentioned stay empty. Saving always writes all three, in order.
TaxonomyContext load_taxonomies(const nlohmann::json& doc);
nlohmann::json save_taxonomies(const TaxonomyContext& ctx);

}  // namespace clscad
