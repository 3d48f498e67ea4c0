#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "clscad/assembly.hpp"
#include "clscad/catalog.hpp"
#include "clscad/error.hpp"
#include "clscad/synthesis.hpp"
#include "clscad/taxonomy.hpp"
#include "clscad/types.hpp"

namespace fixtures {

using namespace clscad;

std::filesystem::path toy_dir();

// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& tag);

// The code of the clscad::Error thrown by f, if any.
template <class F>
std::optional<ErrorCode> error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline Atom fmt(const std::string& n) { return {Hierarchy::Formats, n}; }
inline Atom prt(const std::string& n) { return {Hierarchy::Parts, n}; }
inline Atom attr(const std::string& n) { return {Hierarchy::Attributes, n}; }

JointOrigin providing(const std::string& uuid, TypeExpr provides, Pose frame = {});
JointOrigin requiring(const std::string& uuid, TypeExpr required, JointKind kind = JointKind::Rigid,
                      Pose frame = {}, std::optional<std::string> group = std::nullopt);

// base: {Link} -> {Arm}; bracket: {Eff} -> {Link}; gripper: () -> {Eff};
// optionally extension: {Link} -> {Link}.
Catalog mini_arm_catalog(bool with_extension);

Term leaf(const std::string& variant);
Term node(const std::string& variant, std::vector<Term> children);

// Drops the propagation key: "part/config/key" -> "part/config".
std::string bare_id(const std::string& variant);

/// A term with its variant keys stripped, for comparisons against oracles
/// that know nothing about propagation.
struct BareTree {
  std::string combinator;  // partId/configId
  std::vector<BareTree> children;
};
bool operator==(const BareTree& a, const BareTree& b);
bool operator<(const BareTree& a, const BareTree& b);
BareTree strip(const Term& t);
std::string to_string(const BareTree& t);

/// Independent brute-force reference for synthesis. It rebuilds configurations
/// straight from the part documents, decides subtyping by breadth-first search
/// over raw taxonomy edges, and enumerates every combinator application up to
/// a part-count bound before filtering by type.
class BruteForce {
 public:
  explicit BruteForce(const Catalog& catalog);

  bool le(const std::set<Atom>& sigma, const std::set<Atom>& tau) const;
  // Well-typed trees of exactly `size` parts whose type is <= target and that
  // contain a provider for each propagated atom.
  std::set<BareTree> inhabitants(const std::set<Atom>& target, const std::set<Atom>& propagated, int size) const;
  int part_count(const BareTree& t) const;
  std::set<Atom> type_of(const BareTree& t) const;

  struct Arg {
    std::set<Atom> required;
    int multiplicity;
  };
  struct Comb {
    std::string id;
    std::set<Atom> result;
    std::vector<Arg> args;
  };
  const std::vector<Comb>& combinators() const { return combs_; }

 private:
  // Internally well-typed trees by exact size.
  const std::vector<BareTree>& trees(int size) const;
  bool provides(const BareTree& t, const Atom& p) const;

  std::map<Atom, std::set<Atom>> ancestors_;
  std::vector<Comb> combs_;
  std::map<std::string, std::size_t> by_id_;
  mutable std::map<int, std::vector<BareTree>> memo_;
};

struct RandomCatalogOptions {
  int max_parts = 6;
  int max_arity = 2;
  bool groups = true;
};

/// Small random catalog over random DAG taxonomies, always valid.
Catalog random_catalog(std::mt19937_64& rng, const RandomCatalogOptions& options = {});
// A target drawn from the part types present in the catalog.
TypeExpr random_target(std::mt19937_64& rng, const Catalog& catalog);

Pose random_pose(std::mt19937_64& rng, double extent = 100.0);

// Every Arm assembly of the toy catalog up to max_parts parts.
std::vector<EnumeratedTerm> toy_arms(const Catalog& toy, int max_parts, const TypeExpr& propagated = {});

// base-plate(servo-small(bracket-alu(servo-small(... gripper)))) with the
// given number of servos, hence that many revolute joints.
Term toy_servo_chain(int servos);

}  // namespace fixtures
