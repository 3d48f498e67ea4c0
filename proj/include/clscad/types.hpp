#pragma once

#include <compare>
#include <initializer_list>
#include <set>
#include <string>

#include <json.hpp>

#include "clscad/error.hpp"
#include "clscad/taxonomy.hpp"

namespace clscad {

/// A finite intersection of atoms. The empty set is the top type.
struct TypeExpr {
  std::set<Atom> atoms;

  TypeExpr() = default;
  TypeExpr(std::initializer_list<Atom> init) : atoms(init) {}
  explicit TypeExpr(std::set<Atom> a) : atoms(std::move(a)) {}

  bool empty() const { return atoms.empty(); }
  bool has_hierarchy(Hierarchy h) const;

  auto operator<=>(const TypeExpr&) const = default;
};

/// An intersection with redundant super-atoms removed. Only canonicalize()
/// and meet() produce one, so equal values mean subtype-equivalent types.
class CanonicalType {
 public:
  CanonicalType() = default;

  const TypeExpr& expr() const { return expr_; }
  const std::set<Atom>& atoms() const { return expr_.atoms; }
  bool empty() const { return expr_.empty(); }

  auto operator<=>(const CanonicalType&) const = default;

 private:
  explicit CanonicalType(TypeExpr e) : expr_(std::move(e)) {}
  friend CanonicalType canonicalize(const TaxonomyContext&, const TypeExpr&);

  TypeExpr expr_;
};

// sigma <= tau iff every atom of tau has a sub-atom in sigma.
bool subtype_le(const TaxonomyContext& ctx, const TypeExpr& sigma, const TypeExpr& tau);
inline bool subtype_le(const TaxonomyContext& ctx, const CanonicalType& s, const CanonicalType& t) {
  return subtype_le(ctx, s.expr(), t.expr());
}

// Throws UnknownAtom for atoms absent from ctx.
CanonicalType canonicalize(const TaxonomyContext& ctx, const TypeExpr& sigma);
CanonicalType meet(const TaxonomyContext& ctx, const TypeExpr& sigma, const TypeExpr& tau);
inline CanonicalType meet(const TaxonomyContext& ctx, const CanonicalType& s, const CanonicalType& t) {
  return meet(ctx, s.expr(), t.expr());
}

void check_atoms_known(const TaxonomyContext& ctx, const TypeExpr& sigma, ErrorCode code);

std::string to_string(const TypeExpr& t);
inline std::string to_string(const CanonicalType& t) { return to_string(t.expr()); }

nlohmann::json type_to_json(const TypeExpr& t);
inline nlohmann::json type_to_json(const CanonicalType& t) { return type_to_json(t.expr()); }
TypeExpr type_from_json(const nlohmann::json& doc);

}  // namespace clscad
