#include "clscad/synthesis.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

#include "clscad/error.hpp"
#include "json_util.hpp"

namespace clscad {

namespace {

// Atom names may contain anything but control characters, so the variant key
// escapes its own separators.
std::string escape_key(std::string_view s) {
  static constexpr std::string_view kHex = "0123456789ABCDEF";
  std::string out;
  for (char ch : s) {
    if (ch == '%' || ch == ',' || ch == '@' || ch == '/') {
      auto u = static_cast<unsigned char>(ch);
      out += '%';
      out += kHex[u >> 4];
      out += kHex[u & 0xF];
    } else {
      out += ch;
    }
  }
  return out;
}

std::string unescape_key(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      out += static_cast<char>(std::stoi(std::string(s.substr(i + 1, 2)), nullptr, 16));
      i += 2;
    } else {
      out += s[i];
    }
  }
  return out;
}

std::string routing_key(const std::map<Atom, int>& routing) {
  if (routing.empty()) return "-";
  std::string key;
  for (const auto& [atom, arg] : routing) {
    if (!key.empty()) key += ',';
    key += escape_key(to_string(atom));
    key += '@';
    key += arg < 0 ? std::string("*") : std::to_string(arg);
  }
  return key;
}

Atom atom_from_key(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw Error(ErrorCode::IllTypedTerm, "malformed atom \"" + s + "\" in variant key");
  return Atom{hierarchy_from_string(s.substr(0, colon)), s.substr(colon + 1)};
}

// Returns the demanded atom set encoded in a variant key.
std::set<Atom> demand_from_key(std::string_view key) {
  std::set<Atom> out;
  if (key == "-") return out;
  std::size_t pos = 0;
  while (pos <= key.size()) {
    auto comma = key.find(',', pos);
    auto entry = key.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    auto at = entry.rfind('@');
    if (at == std::string_view::npos) throw Error(ErrorCode::IllTypedTerm, "malformed variant key");
    try {
      out.insert(atom_from_key(unescape_key(entry.substr(0, at))));
    } catch (const Error&) {
      throw Error(ErrorCode::IllTypedTerm, "malformed variant key \"" + std::string(key) + "\"");
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<Combinator> combinators_from_catalog(const TaxonomyContext& ctx, const Catalog& catalog) {
  std::vector<Combinator> out;
  for (const auto& [id, part] : catalog.parts()) {
    for (const auto& cfg : derive_configurations(ctx, part)) {
      Combinator c;
      c.part_id = cfg.part_id;
      c.config_id = cfg.config_id;
      c.root_uuid = cfg.config_id;
      c.result = cfg.provided_type;
      for (const auto& g : cfg.arg_groups)
        c.args.push_back({canonicalize(ctx, g.required_type), static_cast<int>(g.member_uuids.size()),
                          g.joint_kind, g.member_uuids});
      out.push_back(std::move(c));
    }
  }
  std::sort(out.begin(), out.end(), [](const Combinator& a, const Combinator& b) {
    return std::tie(a.part_id, a.config_id) < std::tie(b.part_id, b.config_id);
  });
  return out;
}

std::string to_string(const Nonterminal& n) {
  std::string out = to_string(n.type);
  if (!n.demand.empty()) out += " | propagate " + to_string(TypeExpr(n.demand));
  return out;
}

std::vector<CombinatorVariant> propagate_variants(const TaxonomyContext& ctx, const Combinator& c,
                                                  const std::set<Atom>& demanded) {
  std::vector<Atom> residual;
  std::map<Atom, int> base_routing;
  for (const auto& p : demanded) {
    if (subtype_le(ctx, c.result.expr(), TypeExpr{p}))
      base_routing[p] = -1;
    else
      residual.push_back(p);
  }
  const int arity = static_cast<int>(c.arity());
  if (!residual.empty() && arity == 0) return {};

  const CanonicalType result = meet(ctx, c.result.expr(), TypeExpr(demanded));
  std::vector<CombinatorVariant> out;
  // Odometer over residual -> argument; first residual atom is most significant.
  std::vector<int> choice(residual.size(), 0);
  while (true) {
    CombinatorVariant v;
    v.combinator = c;
    v.demand = demanded;
    v.routing = base_routing;
    std::vector<std::set<Atom>> routed(c.arity());
    for (std::size_t i = 0; i < residual.size(); ++i) {
      v.routing[residual[i]] = choice[i];
      routed[choice[i]].insert(residual[i]);
    }
    for (std::size_t i = 0; i < c.arity(); ++i) {
      v.arg_types.push_back(meet(ctx, c.args[i].required_type.expr(), TypeExpr(routed[i])));
      v.children.push_back(Nonterminal{c.args[i].required_type, routed[i]});
    }
    v.result = result;
    v.id = c.id() + "/" + routing_key(v.routing);
    out.push_back(std::move(v));

    int k = static_cast<int>(residual.size()) - 1;
    while (k >= 0 && ++choice[k] == arity) choice[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

// ---------------------------------------------------------------------------

void validate_request(const TaxonomyContext& ctx, const Request& request, std::size_t propagated_cap) {
  if (request.target.empty()) throw Error(ErrorCode::InvalidRequest, "target must not be empty");
  if (request.target.has_hierarchy(Hierarchy::Formats))
    throw Error(ErrorCode::InvalidRequest, "target may only use the parts and attributes hierarchies");
  if (request.propagated.atoms.size() > propagated_cap)
    throw Error(ErrorCode::InvalidRequest, "at most " + std::to_string(propagated_cap) + " propagated types");
  if (request.limit <= 0) throw Error(ErrorCode::InvalidRequest, "limit must be positive");
  if (request.sizes) {
    if (request.sizes->empty()) throw Error(ErrorCode::InvalidRequest, "sizes must be null or non-empty");
    for (int s : *request.sizes)
      if (s <= 0) throw Error(ErrorCode::InvalidRequest, "sizes must be positive");
  }
  check_atoms_known(ctx, request.target, ErrorCode::UnknownAtomInRequest);
  check_atoms_known(ctx, request.propagated, ErrorCode::UnknownAtomInRequest);
}

Request request_from_json(const nlohmann::json& doc) {
  Request r;
  r.target = type_from_json(detail::field(doc, "target", "request"));
  if (auto it = doc.find("propagated"); it != doc.end() && !it->is_null()) r.propagated = type_from_json(*it);
  if (auto it = doc.find("sizes"); it != doc.end() && !it->is_null()) {
    if (!it->is_array()) throw Error(ErrorCode::SchemaViolation, "request.sizes must be an array or null");
    std::vector<int> sizes;
    for (const auto& s : *it) {
      if (!s.is_number_integer()) throw Error(ErrorCode::SchemaViolation, "request.sizes must hold integers");
      sizes.push_back(s.get<int>());
    }
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    r.sizes = std::move(sizes);
  }
  if (auto it = doc.find("limit"); it != doc.end() && !it->is_null()) {
    if (!it->is_number_integer()) throw Error(ErrorCode::SchemaViolation, "request.limit must be an integer");
    r.limit = it->get<int>();
  }
  return r;
}

nlohmann::json request_to_json(const Request& request) {
  return {{"target", type_to_json(request.target)},
          {"propagated", type_to_json(request.propagated)},
          {"sizes", request.sizes ? nlohmann::json(*request.sizes) : nlohmann::json(nullptr)},
          {"limit", request.limit}};
}

// ---------------------------------------------------------------------------

Repository::Repository(const Catalog& catalog)
    : Repository(catalog.taxonomy(), combinators_from_catalog(catalog.taxonomy(), catalog)) {}

Repository::Repository(TaxonomyContext ctx, std::vector<Combinator> combinators)
    : ctx_(std::move(ctx)), combinators_(std::move(combinators)) {
  for (std::size_t i = 0; i < combinators_.size(); ++i) index_.emplace(combinators_[i].id(), i);
}

const Combinator* Repository::find(std::string_view id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &combinators_[it->second];
}

std::size_t TreeGrammar::production_count() const {
  std::size_t n = 0;
  for (const auto& [_, ps] : rules) n += ps.size();
  return n;
}

TreeGrammar inhabit(const Repository& repo, const Request& request, std::size_t propagated_cap) {
  const auto& ctx = repo.taxonomy();
  validate_request(ctx, request, propagated_cap);

  TreeGrammar g;
  g.start = Nonterminal{canonicalize(ctx, request.target), request.propagated.atoms};

  std::map<Nonterminal, std::vector<Production>> rules;
  std::deque<Nonterminal> work{g.start};
  rules[g.start];
  while (!work.empty()) {
    Nonterminal n = std::move(work.front());
    work.pop_front();
    std::vector<Production> prods;
    for (const auto& c : repo.combinators()) {
      if (!subtype_le(ctx, c.result, n.type)) continue;
      for (auto& v : propagate_variants(ctx, c, n.demand)) {
        Production p{v.id, v.children, {}};
        for (const auto& a : c.args) p.multiplicities.push_back(a.multiplicity);
        for (const auto& child : v.children)
          if (rules.try_emplace(child).second) work.push_back(child);
        g.variants.try_emplace(v.id, std::move(v));
        prods.push_back(std::move(p));
      }
    }
    std::sort(prods.begin(), prods.end(),
              [](const Production& a, const Production& b) { return a.variant < b.variant; });
    rules[n] = std::move(prods);
  }

  // Productive fixpoint.
  std::set<Nonterminal> productive;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [n, prods] : rules) {
      if (productive.count(n)) continue;
      bool ok = std::any_of(prods.begin(), prods.end(), [&](const Production& p) {
        return std::all_of(p.children.begin(), p.children.end(),
                           [&](const Nonterminal& c) { return productive.count(c) != 0; });
      });
      if (ok) {
        productive.insert(n);
        changed = true;
      }
    }
  }
  for (auto& [n, prods] : rules) {
    std::erase_if(prods, [&](const Production& p) {
      return !std::all_of(p.children.begin(), p.children.end(),
                          [&](const Nonterminal& c) { return productive.count(c) != 0; });
    });
  }

  // Reachability from start over the surviving productions.
  if (productive.count(g.start)) {
    std::deque<Nonterminal> q{g.start};
    std::set<Nonterminal> seen{g.start};
    while (!q.empty()) {
      Nonterminal n = std::move(q.front());
      q.pop_front();
      for (const auto& p : rules.at(n))
        for (const auto& c : p.children)
          if (seen.insert(c).second) q.push_back(c);
    }
    for (const auto& n : seen) g.rules[n] = std::move(rules.at(n));
  }

  std::set<std::string> used;
  for (const auto& [_, prods] : g.rules)
    for (const auto& p : prods) used.insert(p.variant);
  std::erase_if(g.variants, [&](const auto& kv) { return used.count(kv.first) == 0; });
  return g;
}

// ---------------------------------------------------------------------------

bool operator==(const Term& a, const Term& b) { return a.variant == b.variant && a.children == b.children; }

bool operator<(const Term& a, const Term& b) {
  if (a.variant != b.variant) return a.variant < b.variant;
  return std::lexicographical_compare(a.children.begin(), a.children.end(), b.children.begin(), b.children.end());
}

nlohmann::json term_to_json(const Term& t) {
  auto kids = nlohmann::json::array();
  for (const auto& c : t.children) kids.push_back(term_to_json(c));
  return {{"variant", t.variant}, {"children", kids}};
}

Term term_from_json(const nlohmann::json& doc) {
  Term t;
  t.variant = detail::string_field(doc, "variant", "term");
  if (doc.contains("children"))
    for (const auto& c : detail::array_field(doc, "children", "term")) t.children.push_back(term_from_json(c));
  return t;
}

std::string to_string(const Term& t) {
  std::string out = t.variant;
  if (t.children.empty()) return out;
  out += "(";
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (i) out += ", ";
    out += to_string(t.children[i]);
  }
  return out + ")";
}

CombinatorVariant resolve_variant(const Repository& repo, const std::string& variant_id) {
  auto first = variant_id.find('/');
  auto last = variant_id.rfind('/');
  if (first == std::string::npos || first == last)
    throw Error(ErrorCode::IllTypedTerm, "malformed variant id \"" + variant_id + "\"");
  const Combinator* c = repo.find(std::string_view(variant_id).substr(0, last));
  if (!c) throw Error(ErrorCode::IllTypedTerm, "unknown combinator in \"" + variant_id + "\"");
  auto demand = demand_from_key(std::string_view(variant_id).substr(last + 1));
  for (auto& v : propagate_variants(repo.taxonomy(), *c, demand))
    if (v.id == variant_id) return std::move(v);
  throw Error(ErrorCode::IllTypedTerm, "\"" + variant_id + "\" is not a derivable variant");
}

namespace {

struct CheckedNode {
  CombinatorVariant variant;
  int part_count = 0;
};

CheckedNode check_node(const Repository& repo, const Term& term, const std::string& path) {
  CombinatorVariant v = [&] {
    try {
      return resolve_variant(repo, term.variant);
    } catch (const Error& e) {
      throw Error(ErrorCode::IllTypedTerm, "at " + path + ": " + e.what());
    }
  }();
  const auto& c = v.combinator;
  if (term.children.size() != c.arity())
    throw Error(ErrorCode::IllTypedTerm, "at " + path + ": " + c.id() + " takes " + std::to_string(c.arity()) +
                                             " arguments, got " + std::to_string(term.children.size()));
  int parts = 1;
  for (std::size_t i = 0; i < term.children.size(); ++i) {
    std::string child_path = path + "." + std::to_string(i);
    CheckedNode child = check_node(repo, term.children[i], child_path);
    const Nonterminal& want = v.children[i];
    if (!subtype_le(repo.taxonomy(), child.variant.combinator.result, want.type))
      throw Error(ErrorCode::IllTypedTerm, "at " + child_path + ": " + to_string(child.variant.combinator.result) +
                                               " is not <= " + to_string(want.type));
    if (child.variant.demand != want.demand)
      throw Error(ErrorCode::IllTypedTerm, "at " + child_path + ": propagates " +
                                               to_string(TypeExpr(child.variant.demand)) + ", expected " +
                                               to_string(TypeExpr(want.demand)));
    parts += c.args[i].multiplicity * child.part_count;
  }
  return {std::move(v), parts};
}

}  // namespace

CanonicalType check_term(const Repository& repo, const Term& term) {
  return check_node(repo, term, "0").variant.result;
}

CanonicalType check_term(const Catalog& catalog, const Term& term) {
  return check_term(Repository(catalog), term);
}

int part_count(const Repository& repo, const Term& term) {
  const Combinator* c = nullptr;
  if (auto last = term.variant.rfind('/'); last != std::string::npos)
    c = repo.find(std::string_view(term.variant).substr(0, last));
  if (!c || c->arity() != term.children.size())
    throw Error(ErrorCode::IllTypedTerm, "cannot size term node \"" + term.variant + "\"");
  int n = 1;
  for (std::size_t i = 0; i < term.children.size(); ++i)
    n += c->args[i].multiplicity * part_count(repo, term.children[i]);
  return n;
}

// ---------------------------------------------------------------------------

namespace {

/// Dense view of a grammar for size-indexed dynamic programming.
class SizedGrammar {
 public:
  struct Prod {
    const std::string* variant;
    std::vector<int> children;
    std::vector<int> mult;
    // suffix[i][b]: children i.. can use exactly b parts.
    std::vector<std::vector<char>> suffix;
  };

  explicit SizedGrammar(const TreeGrammar& g) {
    int i = 0;
    for (const auto& [n, _] : g.rules) ids_.emplace(n, i++);
    prods_.resize(ids_.size());
    for (const auto& [n, ps] : g.rules) {
      auto& out = prods_[ids_.at(n)];
      for (const auto& p : ps) {
        Prod q{&p.variant, {}, p.multiplicities, {}};
        for (const auto& c : p.children) q.children.push_back(ids_.at(c));
        out.push_back(std::move(q));
      }
    }
    start_ = g.rules.empty() ? -1 : ids_.at(g.start);
  }

  int start() const { return start_; }
  std::size_t size() const { return prods_.size(); }
  const std::vector<Prod>& prods(int n) const { return prods_[n]; }
  int max_size() const { return max_; }
  bool feasible(int n, int s) const { return s >= 1 && s <= max_ && feas_[n][s]; }

  // Exact counts; independent of the feasibility tables.
  Count count(int n, int s) const {
    std::vector<std::vector<Count>> table(size(), std::vector<Count>(s + 1));
    for (int t = 1; t <= s; ++t) {
      for (std::size_t m = 0; m < size(); ++m) {
        Count total = 0;
        for (const auto& p : prods_[m]) {
          // ways[b] = number of child tuples using exactly b parts
          std::vector<Count> ways(t, Count(0));
          ways[0] = 1;
          for (std::size_t i = 0; i < p.children.size(); ++i) {
            std::vector<Count> next(t, Count(0));
            for (int b = 0; b < t; ++b) {
              if (ways[b] == 0) continue;
              for (int cs = 1; b + p.mult[i] * cs <= t - 1; ++cs) {
                const Count& k = table[p.children[i]][cs];
                if (k != 0) next[b + p.mult[i] * cs] += ways[b] * k;
              }
            }
            ways = std::move(next);
          }
          total += ways[t - 1];
        }
        table[m][t] = total;
      }
    }
    return table[n][s];
  }

  void ensure(int s) {
    if (s <= max_) return;
    int target = std::max(s, 2 * max_);
    feas_.assign(size(), std::vector<char>(target + 1, 0));
    for (int t = 1; t <= target; ++t) {
      for (std::size_t m = 0; m < size(); ++m) {
        for (const auto& p : prods_[m]) {
          std::vector<char> reach(t, 0);
          reach[0] = 1;
          for (std::size_t i = 0; i < p.children.size(); ++i) {
            std::vector<char> next(t, 0);
            for (int b = 0; b < t; ++b) {
              if (!reach[b]) continue;
              for (int cs = 1; b + p.mult[i] * cs <= t - 1; ++cs)
                if (feas_[p.children[i]][cs]) next[b + p.mult[i] * cs] = 1;
            }
            reach = std::move(next);
          }
          if (reach[t - 1]) {
            feas_[m][t] = 1;
            break;
          }
        }
      }
    }
    max_ = target;
    for (auto& ps : prods_) {
      for (auto& p : ps) {
        const std::size_t k = p.children.size();
        p.suffix.assign(k + 1, std::vector<char>(max_ + 1, 0));
        p.suffix[k][0] = 1;
        for (std::size_t i = k; i-- > 0;) {
          for (int b = 0; b <= max_; ++b) {
            if (!p.suffix[i + 1][b]) continue;
            for (int cs = 1; b + p.mult[i] * cs <= max_; ++cs)
              if (feas_[p.children[i]][cs]) p.suffix[i][b + p.mult[i] * cs] = 1;
          }
        }
      }
    }
  }

  // Largest part count of any term, or nullopt when the grammar is recursive.
  std::optional<int> bound() const {
    if (start_ < 0) return 0;
    std::vector<int> state(size(), 0), best(size(), 0);
    bool cyclic = false;
    std::function<void(int)> visit = [&](int n) {
      state[n] = 1;
      int top = 0;
      for (const auto& p : prods_[n]) {
        int s = 1;
        for (std::size_t i = 0; i < p.children.size(); ++i) {
          int c = p.children[i];
          if (state[c] == 1) {
            cyclic = true;
            continue;
          }
          if (state[c] == 0) visit(c);
          s += p.mult[i] * best[c];
        }
        top = std::max(top, s);
      }
      best[n] = top;
      state[n] = 2;
    };
    visit(start_);
    if (cyclic) return std::nullopt;
    return best[start_];
  }

  using Sink = std::function<bool(Term&&, int)>;

  // Emits terms of n whose size is allowed, in lexicographic pre-order; stops
  // when sink returns false. Returns false iff stopped.
  bool generate(int n, const std::vector<char>& allowed, const Sink& sink) const {
    for (const auto& p : prods_[n]) {
      bool viable = false;
      for (int s = 1; s <= max_ && !viable; ++s) viable = allowed[s] && p.suffix[0][s - 1];
      if (!viable) continue;
      std::vector<Term> kids;
      if (!fill(p, 0, 1, kids, allowed, sink)) return false;
    }
    return true;
  }

 private:
  bool fill(const Prod& p, std::size_t i, int used, std::vector<Term>& kids, const std::vector<char>& allowed,
            const Sink& sink) const {
    if (i == p.children.size()) return !allowed[used] || sink(Term{*p.variant, kids}, used);
    const int m = p.mult[i];
    std::vector<char> child_allowed(max_ + 1, 0);
    bool any = false;
    for (int cs = 1; used + m * cs <= max_; ++cs) {
      if (!feas_[p.children[i]][cs]) continue;
      for (int s = used + m * cs; s <= max_; ++s) {
        if (allowed[s] && p.suffix[i + 1][s - used - m * cs]) {
          child_allowed[cs] = 1;
          any = true;
          break;
        }
      }
    }
    if (!any) return true;
    return generate(p.children[i], child_allowed, [&](Term&& t, int ts) {
      kids.push_back(std::move(t));
      bool go_on = fill(p, i + 1, used + m * ts, kids, allowed, sink);
      kids.pop_back();
      return go_on;
    });
  }

  std::map<Nonterminal, int> ids_;
  std::vector<std::vector<Prod>> prods_;
  std::vector<std::vector<char>> feas_;
  int start_ = -1;
  int max_ = 0;
};

// Appends up to quota terms of exactly size s.
void collect_size(SizedGrammar& sg, int s, std::size_t quota, std::vector<EnumeratedTerm>& out) {
  if (quota == 0) return;
  sg.ensure(s);
  if (!sg.feasible(sg.start(), s)) return;
  std::vector<char> allowed(sg.max_size() + 1, 0);
  allowed[s] = 1;
  std::size_t taken = 0;
  sg.generate(sg.start(), allowed, [&](Term&& t, int size) {
    out.push_back({std::move(t), size});
    return ++taken < quota;
  });
}

}  // namespace

Count count_terms(const TreeGrammar& grammar, int part_count) {
  if (grammar.empty() || part_count < 1) return 0;
  SizedGrammar sg(grammar);
  return sg.count(sg.start(), part_count);
}

std::vector<EnumeratedTerm> enumerate(const TreeGrammar& grammar, const Request& request,
                                      const EnumerateOptions& options) {
  std::vector<EnumeratedTerm> out;
  if (grammar.empty() || request.limit <= 0) return out;
  SizedGrammar sg(grammar);
  const auto limit = static_cast<std::size_t>(request.limit);

  if (request.sizes) {
    std::vector<int> sizes = *request.sizes;
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    const std::size_t share = limit / sizes.size();
    const std::size_t extra = limit % sizes.size();
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      if (options.max_part_count && sizes[i] > *options.max_part_count) continue;
      collect_size(sg, sizes[i], share + (i < extra ? 1 : 0), out);
    }
    return out;
  }

  std::optional<int> bound = sg.bound();
  if (options.max_part_count) bound = bound ? std::min(*bound, *options.max_part_count) : *options.max_part_count;
  for (int s = 1; out.size() < limit && (!bound || s <= *bound); ++s)
    collect_size(sg, s, limit - out.size(), out);
  return out;
}

std::vector<SynthesisResult> synthesize(const Repository& repo, const Request& request,
                                        const EnumerateOptions& options) {
  TreeGrammar g = inhabit(repo, request);
  std::vector<SynthesisResult> out;
  for (auto& e : enumerate(g, request, options)) {
    CanonicalType type = check_term(repo, e.term);
    out.push_back({std::move(e.term), e.part_count, std::move(type)});
  }
  return out;
}

nlohmann::json results_to_json(const std::vector<SynthesisResult>& results) {
  auto out = nlohmann::json::array();
  for (const auto& r : results)
    out.push_back({{"type", type_to_json(r.type)}, {"partCount", r.part_count}, {"term", term_to_json(r.term)}});
  return out;
}

std::vector<SynthesisResult> results_from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) throw Error(ErrorCode::SchemaViolation, "results must be an array");
  std::vector<SynthesisResult> out;
  for (const auto& r : doc) {
    SynthesisResult s;
    s.term = term_from_json(detail::field(r, "term", "result"));
    const auto& pc = detail::field(r, "partCount", "result");
    if (!pc.is_number_integer()) throw Error(ErrorCode::SchemaViolation, "result.partCount must be an integer");
    s.part_count = pc.get<int>();
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace clscad
