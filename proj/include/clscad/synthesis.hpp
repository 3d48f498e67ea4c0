#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "clscad/catalog.hpp"
#include "clscad/types.hpp"

namespace clscad {

struct CombinatorArg {
  CanonicalType required_type;
  int multiplicity = 1;
  JointKind joint_kind = JointKind::Rigid;
  std::vector<std::string> member_uuids;

  bool operator==(const CombinatorArg&) const = default;
};

/// The typed view of one part configuration.
struct Combinator {
  std::string part_id;
  std::string config_id;
  std::vector<CombinatorArg> args;
  CanonicalType result;
  std::string root_uuid;

  std::string id() const { return part_id + "/" + config_id; }
  std::size_t arity() const { return args.size(); }

  bool operator==(const Combinator&) const = default;
};

// One combinator per configuration, ordered by (partId, configId).
std::vector<Combinator> combinators_from_catalog(const TaxonomyContext& ctx, const Catalog& catalog);

/// A grammar nonterminal: the type a sub-assembly must have, plus the
/// propagated atoms that must be provided somewhere inside it.
struct Nonterminal {
  CanonicalType type;
  std::set<Atom> demand;

  auto operator<=>(const Nonterminal&) const = default;
};

std::string to_string(const Nonterminal& n);

/// A combinator specialised to a propagated demand: each demanded atom the
/// combinator does not provide itself is routed to exactly one argument.
struct CombinatorVariant {
  Combinator combinator;
  std::set<Atom> demand;
  std::map<Atom, int> routing;  // atom -> argument index, -1 when intrinsic
  std::vector<CanonicalType> arg_types;  // meet(arg, routed atoms)
  std::vector<Nonterminal> children;
  CanonicalType result;  // meet(result, demand)
  std::string id;        // "partId/configId/key"
};

std::vector<CombinatorVariant> propagate_variants(const TaxonomyContext& ctx, const Combinator& c,
                                                  const std::set<Atom>& demanded);

inline constexpr int kDefaultLimit = 100;
inline constexpr std::size_t kDefaultPropagatedCap = 4;

struct Request {
  TypeExpr target;
  TypeExpr propagated;
  std::optional<std::vector<int>> sizes;  // part counts
  int limit = kDefaultLimit;
};

// Throws InvalidRequest or UnknownAtomInRequest.
void validate_request(const TaxonomyContext& ctx, const Request& request,
                      std::size_t propagated_cap = kDefaultPropagatedCap);
Request request_from_json(const nlohmann::json& doc);
nlohmann::json request_to_json(const Request& request);

/// Combinators of a catalog, indexed by "partId/configId".
class Repository {
 public:
  explicit Repository(const Catalog& catalog);
  Repository(TaxonomyContext ctx, std::vector<Combinator> combinators);

  const TaxonomyContext& taxonomy() const { return ctx_; }
  const std::vector<Combinator>& combinators() const { return combinators_; }
  const Combinator* find(std::string_view id) const;

 private:
  TaxonomyContext ctx_;
  std::vector<Combinator> combinators_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

struct Production {
  std::string variant;
  std::vector<Nonterminal> children;
  std::vector<int> multiplicities;
};

struct TreeGrammar {
  Nonterminal start;
  std::map<Nonterminal, std::vector<Production>> rules;  // productions sorted by variant id
  std::map<std::string, CombinatorVariant> variants;

  bool empty() const { return rules.empty(); }
  std::size_t production_count() const;
};

// Demand-driven inhabitation followed by pruning of unproductive and
// unreachable nonterminals.
TreeGrammar inhabit(const Repository& repo, const Request& request,
                    std::size_t propagated_cap = kDefaultPropagatedCap);

struct Term {
  std::string variant;
  std::vector<Term> children;
};
bool operator==(const Term& a, const Term& b);
bool operator<(const Term& a, const Term& b);

nlohmann::json term_to_json(const Term& t);
Term term_from_json(const nlohmann::json& doc);
std::string to_string(const Term& t);  // variant(child, ...)

// Type-checks a term against the original combinators; throws IllTypedTerm
// naming the offending node path ("0.1.0"). Returns the root type.
CanonicalType check_term(const Repository& repo, const Term& term);
CanonicalType check_term(const Catalog& catalog, const Term& term);

// Multiplicity-weighted number of parts.
int part_count(const Repository& repo, const Term& term);

// Resolves a variant id against the repository; throws IllTypedTerm when the
// id does not name a derivable variant.
CombinatorVariant resolve_variant(const Repository& repo, const std::string& variant_id);

using Count = boost::multiprecision::cpp_int;

Count count_terms(const TreeGrammar& grammar, int part_count);

struct EnumerateOptions {
  // Largest part count considered; required to exhaust recursive grammars.
  std::optional<int> max_part_count;
};

struct EnumeratedTerm {
  Term term;
  int part_count = 0;
};

/// Terms by ascending part count, ties in lexicographic order of their
/// pre-order variant ids. With request.sizes, the limit is split across the
/// sizes (floor share, remainder to the smallest sizes).
std::vector<EnumeratedTerm> enumerate(const TreeGrammar& grammar, const Request& request,
                                      const EnumerateOptions& options = {});

struct SynthesisResult {
  Term term;
  int part_count = 0;
  CanonicalType type;
};

// validate_request + inhabit + enumerate + check_term on every result.
std::vector<SynthesisResult> synthesize(const Repository& repo, const Request& request,
                                        const EnumerateOptions& options = {});

nlohmann::json results_to_json(const std::vector<SynthesisResult>& results);
std::vector<SynthesisResult> results_from_json(const nlohmann::json& doc);

}  // namespace clscad
