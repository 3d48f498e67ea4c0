#include <doctest.h>

#include <random>

#include "clscad/types.hpp"
#include "fixtures.hpp"

using namespace clscad;
using fixtures::attr;
using fixtures::prt;

namespace {

TaxonomyContext screws() {
  return TaxonomyContext{}
      .create_node(prt("Fastener"), {})
      .create_node(prt("Screw"), {"Fastener"})
      .create_node(prt("SteelScrew"), {"Screw"})
      .create_node(prt("Cube"), {})
      .create_node(attr("Wood"), {});
}

// Removes every atom that is a strict super-atom of another member, using
// pairwise is_subatom only.
std::set<Atom> minimal(const TaxonomyContext& ctx, const std::set<Atom>& s) {
  std::set<Atom> out;
  for (const auto& a : s) {
    bool implied = false;
    for (const auto& b : s)
      if (!(a == b) && ctx.is_subatom(b, a) && !ctx.is_subatom(a, b)) implied = true;
    if (!implied) out.insert(a);
  }
  return out;
}

TypeExpr random_expr(std::mt19937_64& rng, const std::vector<Atom>& pool) {
  TypeExpr t;
  for (const auto& a : pool)
    if (rng() % 3 == 0) t.atoms.insert(a);
  return t;
}

}  // namespace

TEST_CASE("subtype_le") {
  auto ctx = screws();
  CHECK(subtype_le(ctx, TypeExpr{prt("SteelScrew")}, TypeExpr{prt("Screw")}));
  CHECK(subtype_le(ctx, TypeExpr{prt("Screw")}, TypeExpr{}));
  CHECK(subtype_le(ctx, TypeExpr{}, TypeExpr{}));
  CHECK_FALSE(subtype_le(ctx, TypeExpr{prt("Screw")}, TypeExpr{prt("SteelScrew")}));
  CHECK_FALSE(subtype_le(ctx, TypeExpr{}, TypeExpr{prt("Screw")}));
  CHECK(subtype_le(ctx, TypeExpr{prt("SteelScrew"), attr("Wood")}, TypeExpr{prt("Fastener"), attr("Wood")}));
  CHECK_FALSE(subtype_le(ctx, TypeExpr{prt("SteelScrew")}, TypeExpr{prt("Fastener"), attr("Wood")}));
}

TEST_CASE("canonicalize") {
  auto ctx = screws();
  CHECK(canonicalize(ctx, TypeExpr{prt("SteelScrew"), prt("Screw"), prt("Fastener")}).expr() ==
        TypeExpr{prt("SteelScrew")});
  CHECK(canonicalize(ctx, TypeExpr{}).empty());
  CHECK(canonicalize(ctx, TypeExpr{attr("Wood"), prt("SteelScrew")}).expr() ==
        TypeExpr{attr("Wood"), prt("SteelScrew")});
  CHECK(fixtures::error_code([&] { canonicalize(ctx, TypeExpr{prt("Nut")}); }) == ErrorCode::UnknownAtom);
}

TEST_CASE("meet") {
  auto ctx = screws();
  CHECK(meet(ctx, TypeExpr{prt("Cube")}, TypeExpr{attr("Wood")}).expr() == TypeExpr{prt("Cube"), attr("Wood")});
  CHECK(meet(ctx, TypeExpr{prt("Screw")}, TypeExpr{}).expr() == TypeExpr{prt("Screw")});
  CHECK(meet(ctx, TypeExpr{prt("Screw")}, TypeExpr{prt("SteelScrew")}).expr() == TypeExpr{prt("SteelScrew")});
}

TEST_CASE("json encoding keys atoms by hierarchy") {
  TypeExpr t{fixtures::fmt("Hole3mm"), prt("Screw")};
  nlohmann::json expected = {{"formats", {"Hole3mm"}}, {"parts", {"Screw"}}, {"attributes", nlohmann::json::array()}};
  CHECK(type_to_json(t) == expected);
  CHECK(type_from_json(expected) == t);
  CHECK(fixtures::error_code([] { type_from_json({{"parts", 3}}); }) == ErrorCode::SchemaViolation);
}

TEST_CASE("property: preorder, canonical equivalence, meet laws") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 40; ++round) {
    fixtures::RandomCatalogOptions none;
    auto ctx = fixtures::random_catalog(rng, none).taxonomy();
    std::vector<Atom> pool;
    for (Hierarchy h : kAllHierarchies)
      for (const auto& n : ctx.taxonomy(h).nodes()) pool.push_back(Atom{h, n});

    for (int k = 0; k < 20; ++k) {
      auto a = random_expr(rng, pool), b = random_expr(rng, pool), c = random_expr(rng, pool);
      REQUIRE(subtype_le(ctx, a, a));
      if (subtype_le(ctx, a, b) && subtype_le(ctx, b, c)) REQUIRE(subtype_le(ctx, a, c));

      auto ca = canonicalize(ctx, a);
      REQUIRE(subtype_le(ctx, a, ca.expr()));
      REQUIRE(subtype_le(ctx, ca.expr(), a));
      REQUIRE(canonicalize(ctx, ca.expr()) == ca);
      REQUIRE(ca.atoms() == minimal(ctx, a.atoms));

      auto cb = canonicalize(ctx, b);
      bool equivalent = subtype_le(ctx, a, b) && subtype_le(ctx, b, a);
      REQUIRE(equivalent == (ca == cb));

      auto ab = meet(ctx, a, b);
      REQUIRE(ab == meet(ctx, b, a));
      REQUIRE(meet(ctx, ab.expr(), c) == meet(ctx, a, meet(ctx, b, c).expr()));
      REQUIRE(meet(ctx, a, a) == ca);
      REQUIRE(subtype_le(ctx, ab.expr(), a));
      REQUIRE(subtype_le(ctx, ab.expr(), b));
      // Greatest lower bound: anything below both is below the meet.
      if (subtype_le(ctx, c, a) && subtype_le(ctx, c, b)) REQUIRE(subtype_le(ctx, c, ab.expr()));

      TypeExpr bigger = a;
      bigger.atoms.insert(b.atoms.begin(), b.atoms.end());
      REQUIRE(subtype_le(ctx, bigger, a));
    }
  }
}
