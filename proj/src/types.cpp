#include "clscad/types.hpp"

#include <algorithm>

#include "clscad/error.hpp"
#include "json_util.hpp"

namespace clscad {

bool TypeExpr::has_hierarchy(Hierarchy h) const {
  return std::any_of(atoms.begin(), atoms.end(), [h](const Atom& a) { return a.hierarchy == h; });
}

bool subtype_le(const TaxonomyContext& ctx, const TypeExpr& sigma, const TypeExpr& tau) {
  return std::all_of(tau.atoms.begin(), tau.atoms.end(), [&](const Atom& b) {
    return std::any_of(sigma.atoms.begin(), sigma.atoms.end(),
                       [&](const Atom& a) { return ctx.is_subatom(a, b); });
  });
}

void check_atoms_known(const TaxonomyContext& ctx, const TypeExpr& sigma, ErrorCode code) {
  for (const auto& a : sigma.atoms)
    if (!ctx.contains(a)) throw Error(code, "unknown atom " + to_string(a));
}

CanonicalType canonicalize(const TaxonomyContext& ctx, const TypeExpr& sigma) {
  check_atoms_known(ctx, sigma, ErrorCode::UnknownAtom);
  TypeExpr out;
  for (const auto& a : sigma.atoms) {
    bool implied = std::any_of(sigma.atoms.begin(), sigma.atoms.end(), [&](const Atom& b) {
      return b != a && ctx.is_subatom(b, a);
    });
    if (!implied) out.atoms.insert(a);
  }
  return CanonicalType(std::move(out));
}

CanonicalType meet(const TaxonomyContext& ctx, const TypeExpr& sigma, const TypeExpr& tau) {
  TypeExpr u = sigma;
  u.atoms.insert(tau.atoms.begin(), tau.atoms.end());
  return canonicalize(ctx, u);
}

std::string to_string(const TypeExpr& t) {
  std::string out = "{";
  bool first = true;
  for (const auto& a : t.atoms) {
    if (!first) out += ", ";
    first = false;
    out += to_string(a);
  }
  return out + "}";
}

nlohmann::json type_to_json(const TypeExpr& t) {
  nlohmann::json out = nlohmann::json::object();
  for (Hierarchy h : kAllHierarchies) {
    auto arr = nlohmann::json::array();
    for (const auto& a : t.atoms)
      if (a.hierarchy == h) arr.push_back(a.name);
    out[std::string(to_string(h))] = std::move(arr);
  }
  return out;
}

TypeExpr type_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::SchemaViolation, "type must be an object of three arrays");
  TypeExpr t;
  for (const auto& [key, value] : doc.items()) {
    Hierarchy h = hierarchy_from_string(key);
    if (!value.is_array())
      throw Error(ErrorCode::SchemaViolation, "type." + key + " must be an array");
    for (const auto& n : value) {
      auto name = detail::as_string(n, "type atom");
      if (!is_valid_name(name)) throw Error(ErrorCode::SchemaViolation, "invalid atom name \"" + name + "\"");
      t.atoms.insert(Atom{h, name});
    }
  }
  return t;
}

}  // namespace clscad
