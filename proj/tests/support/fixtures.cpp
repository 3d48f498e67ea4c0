#include "fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <climits>
#include <deque>
#include <functional>

#include <unistd.h>

namespace fixtures {

namespace fs = std::filesystem;

fs::path toy_dir() { return CLSCAD_TEST_TOY_DATA; }

fs::path scratch_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  fs::path dir = fs::temp_directory_path() /
                 ("clscad-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

JointOrigin providing(const std::string& uuid, TypeExpr provides, Pose frame) {
  JointOrigin jo;
  jo.uuid = uuid;
  jo.label = uuid;
  jo.frame = frame;
  jo.provides = std::move(provides);
  return jo;
}

JointOrigin requiring(const std::string& uuid, TypeExpr required, JointKind kind, Pose frame,
                      std::optional<std::string> group) {
  JointOrigin jo;
  jo.uuid = uuid;
  jo.label = uuid;
  jo.frame = frame;
  jo.requires_ = std::move(required);
  jo.joint_kind = kind;
  jo.group_id = std::move(group);
  return jo;
}

Catalog mini_arm_catalog(bool with_extension) {
  TaxonomyContext ctx;
  ctx = ctx.with_taxonomy(Taxonomy(Hierarchy::Formats, {"Plug"}, {}));
  ctx = ctx.with_taxonomy(Taxonomy(Hierarchy::Parts, {"Arm", "Eff", "Link"}, {}));
  Catalog cat(ctx);

  Part base{"base", "Base", TypeExpr{prt("Arm")}, 10.0, {}};
  base.joint_origins = {providing("base-floor", TypeExpr{fmt("Plug")}),
                        requiring("base-top", TypeExpr{prt("Link")}, JointKind::Revolute, Pose::translate(0, 0, 20))};
  Part bracket{"bracket", "Bracket", TypeExpr{prt("Link")}, 2.0, {}};
  bracket.joint_origins = {providing("bracket-in", TypeExpr{fmt("Plug")}),
                           requiring("bracket-out", TypeExpr{prt("Eff")}, JointKind::Rigid, Pose::translate(0, 0, 30))};
  Part gripper{"gripper", "Gripper", TypeExpr{prt("Eff")}, 5.0, {}};
  gripper.joint_origins = {providing("gripper-in", TypeExpr{fmt("Plug")})};
  cat = cat.with_part(base).with_part(bracket).with_part(gripper);
  if (with_extension) {
    Part ext{"extension", "Extension", TypeExpr{prt("Link")}, 1.0, {}};
    ext.joint_origins = {providing("ext-in", TypeExpr{fmt("Plug")}),
                         requiring("ext-out", TypeExpr{prt("Link")}, JointKind::Revolute, Pose::translate(0, 0, 50))};
    cat = cat.with_part(ext);
  }
  return cat;
}

Term leaf(const std::string& variant) { return Term{variant, {}}; }
Term node(const std::string& variant, std::vector<Term> children) { return Term{variant, std::move(children)}; }

std::string bare_id(const std::string& variant) { return variant.substr(0, variant.rfind('/')); }

bool operator==(const BareTree& a, const BareTree& b) {
  return a.combinator == b.combinator && a.children == b.children;
}

bool operator<(const BareTree& a, const BareTree& b) {
  if (a.combinator != b.combinator) return a.combinator < b.combinator;
  return std::lexicographical_compare(a.children.begin(), a.children.end(), b.children.begin(), b.children.end());
}

BareTree strip(const Term& t) {
  BareTree b{bare_id(t.variant), {}};
  for (const auto& c : t.children) b.children.push_back(strip(c));
  return b;
}

std::string to_string(const BareTree& t) {
  std::string s = t.combinator;
  if (t.children.empty()) return s;
  s += "(";
  for (std::size_t i = 0; i < t.children.size(); ++i) s += (i ? "," : "") + to_string(t.children[i]);
  return s + ")";
}

// ---------------------------------------------------------------------------

BruteForce::BruteForce(const Catalog& catalog) {
  const auto& ctx = catalog.taxonomy();
  for (Hierarchy h : kAllHierarchies) {
    const auto& tax = ctx.taxonomy(h);
    std::map<std::string, std::vector<std::string>> up;
    for (const auto& [child, parent] : tax.edges()) up[child].push_back(parent);
    for (const auto& n : tax.nodes()) {
      std::set<Atom>& seen = ancestors_[Atom{h, n}];
      std::deque<std::string> queue{n};
      while (!queue.empty()) {
        std::string cur = queue.front();
        queue.pop_front();
        if (!seen.insert(Atom{h, cur}).second) continue;
        for (const auto& p : up[cur]) queue.push_back(p);
      }
    }
  }

  for (const auto& [pid, part] : catalog.parts()) {
    for (const auto& root : part.joint_origins) {
      if (!root.provides) continue;
      Comb c;
      c.id = pid + "/" + root.uuid;
      c.result = root.provides->atoms;
      c.result.insert(part.part_types.atoms.begin(), part.part_types.atoms.end());
      std::map<std::string, Arg> groups;
      for (const auto& jo : part.joint_origins) {
        if (jo.uuid == root.uuid || !jo.requires_) continue;
        auto& g = groups[jo.group_id.value_or(jo.uuid)];
        g.required = jo.requires_->atoms;
        ++g.multiplicity;
      }
      for (auto& [key, g] : groups) c.args.push_back(g);
      by_id_[c.id] = combs_.size();
      combs_.push_back(std::move(c));
    }
  }
}

bool BruteForce::le(const std::set<Atom>& sigma, const std::set<Atom>& tau) const {
  for (const auto& b : tau) {
    bool found = false;
    for (const auto& a : sigma) {
      auto it = ancestors_.find(a);
      if (a == b || (it != ancestors_.end() && it->second.count(b))) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

std::set<Atom> BruteForce::type_of(const BareTree& t) const { return combs_.at(by_id_.at(t.combinator)).result; }

int BruteForce::part_count(const BareTree& t) const {
  const auto& c = combs_.at(by_id_.at(t.combinator));
  int n = 1;
  for (std::size_t i = 0; i < t.children.size(); ++i) n += c.args[i].multiplicity * part_count(t.children[i]);
  return n;
}

const std::vector<BareTree>& BruteForce::trees(int size) const {
  if (auto it = memo_.find(size); it != memo_.end()) return it->second;
  std::vector<BareTree> out;
  for (const auto& c : combs_) {
    // Every way of giving each argument a well-typed subtree whose weighted
    // sizes add up to size - 1.
    std::function<void(std::size_t, int, std::vector<BareTree>&)> fill = [&](std::size_t i, int left,
                                                                             std::vector<BareTree>& kids) {
      if (i == c.args.size()) {
        if (left == 0) out.push_back(BareTree{c.id, kids});
        return;
      }
      const int m = c.args[i].multiplicity;
      for (int k = 1; k * m <= left; ++k) {
        for (const auto& child : trees(k)) {
          if (!le(type_of(child), c.args[i].required)) continue;
          kids.push_back(child);
          fill(i + 1, left - k * m, kids);
          kids.pop_back();
        }
      }
    };
    std::vector<BareTree> kids;
    fill(0, size - 1, kids);
  }
  return memo_[size] = std::move(out);
}

bool BruteForce::provides(const BareTree& t, const Atom& p) const {
  if (le(type_of(t), {p})) return true;
  return std::any_of(t.children.begin(), t.children.end(), [&](const BareTree& c) { return provides(c, p); });
}

std::set<BareTree> BruteForce::inhabitants(const std::set<Atom>& target, const std::set<Atom>& propagated,
                                           int size) const {
  std::set<BareTree> out;
  for (const auto& t : trees(size)) {
    if (!le(type_of(t), target)) continue;
    if (std::all_of(propagated.begin(), propagated.end(), [&](const Atom& p) { return provides(t, p); }))
      out.insert(t);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Taxonomy random_dag(std::mt19937_64& rng, Hierarchy h, const std::string& prefix, int n) {
  std::vector<std::string> nodes;
  std::vector<Taxonomy::Edge> edges;
  std::bernoulli_distribution edge(0.3);
  for (int i = 0; i < n; ++i) {
    nodes.push_back(prefix + std::to_string(i));
    for (int j = 0; j < i; ++j)
      if (edge(rng)) edges.emplace_back(nodes[i], nodes[j]);
  }
  return Taxonomy(h, nodes, edges);
}

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

TypeExpr random_type(std::mt19937_64& rng, const std::vector<Atom>& pool, int max_atoms) {
  TypeExpr t;
  int n = std::uniform_int_distribution<int>(1, max_atoms)(rng);
  for (int i = 0; i < n; ++i) t.atoms.insert(pick(rng, pool));
  return t;
}

}  // namespace

Catalog random_catalog(std::mt19937_64& rng, const RandomCatalogOptions& options) {
  TaxonomyContext ctx;
  ctx = ctx.with_taxonomy(random_dag(rng, Hierarchy::Formats, "F", 3));
  ctx = ctx.with_taxonomy(random_dag(rng, Hierarchy::Parts, "P", 5));
  ctx = ctx.with_taxonomy(random_dag(rng, Hierarchy::Attributes, "A", 3));

  std::vector<Atom> formats, kinds, attrs;
  for (const auto& n : ctx.taxonomy(Hierarchy::Formats).nodes()) formats.push_back(fmt(n));
  for (const auto& n : ctx.taxonomy(Hierarchy::Parts).nodes()) kinds.push_back(prt(n));
  for (const auto& n : ctx.taxonomy(Hierarchy::Attributes).nodes()) attrs.push_back(attr(n));
  std::vector<Atom> part_pool = kinds;
  part_pool.insert(part_pool.end(), attrs.begin(), attrs.end());
  std::vector<Atom> require_pool = formats;
  require_pool.insert(require_pool.end(), kinds.begin(), kinds.end());

  Catalog cat(ctx);
  std::bernoulli_distribution coin(0.5), rare(0.25);
  const int n_parts = std::uniform_int_distribution<int>(1, options.max_parts)(rng);
  for (int k = 0; k < n_parts; ++k) {
    Part p;
    p.part_id = "p" + std::to_string(k);
    p.name = "Part " + std::to_string(k);
    p.part_types = random_type(rng, part_pool, 2);
    if (coin(rng)) p.unit_cost = std::uniform_int_distribution<int>(1, 40)(rng) * 0.5;
    int jo = 0;
    auto uuid = [&] { return p.part_id + "-jo" + std::to_string(jo++); };

    const int n_provided = std::uniform_int_distribution<int>(1, 2)(rng);
    const int n_args = std::uniform_int_distribution<int>(0, options.max_arity)(rng);
    for (int i = 0; i < n_provided; ++i) p.joint_origins.push_back(providing(uuid(), random_type(rng, formats, 1),
                                                                             random_pose(rng)));
    for (int i = 0; i < n_args; ++i) {
      TypeExpr req = random_type(rng, require_pool, 2);
      JointKind kind = coin(rng) ? JointKind::Revolute : JointKind::Rigid;
      if (options.groups && rare(rng)) {
        std::string g = "g" + std::to_string(i);
        p.joint_origins.push_back(requiring(uuid(), req, kind, random_pose(rng), g));
        p.joint_origins.push_back(requiring(uuid(), req, kind, random_pose(rng), g));
      } else if (rare(rng) && p.joint_origins.size() > 1) {
        // A joint origin that can both be mounted and receive.
        auto& both = p.joint_origins.back();
        if (!both.requires_) {
          both.requires_ = req;
          both.joint_kind = kind;
          continue;
        }
        p.joint_origins.push_back(requiring(uuid(), req, kind, random_pose(rng)));
      } else {
        p.joint_origins.push_back(requiring(uuid(), req, kind, random_pose(rng)));
      }
    }
    cat = cat.with_part(p);
  }
  return cat;
}

TypeExpr random_target(std::mt19937_64& rng, const Catalog& catalog) {
  std::vector<Atom> pool;
  for (const auto& [_, part] : catalog.parts())
    for (const auto& a : part.part_types.atoms)
      for (const auto& up : catalog.taxonomy().taxonomy(a.hierarchy).closure(a.name))
        pool.push_back(Atom{a.hierarchy, up});
  return TypeExpr{pick(rng, pool)};
}

Pose random_pose(std::mt19937_64& rng, double extent) {
  std::uniform_real_distribution<double> t(-extent, extent);
  std::normal_distribution<double> g;
  Quaternion q{g(rng), g(rng), g(rng), g(rng)};
  return Pose{{t(rng), t(rng), t(rng)}, q.normalized().canonical()};
}

std::vector<EnumeratedTerm> toy_arms(const Catalog& toy, int max_parts, const TypeExpr& propagated) {
  Repository repo(toy);
  Request r;
  r.target = TypeExpr{prt("Arm")};
  r.propagated = propagated;
  r.limit = INT_MAX;
  return enumerate(inhabit(repo, r), r, EnumerateOptions{max_parts});
}

Term toy_servo_chain(int servos) {
  Term t = leaf("gripper/f5b8d210-gripper-mount/-");
  for (int i = 0; i < servos; ++i) {
    if (i > 0) t = node("bracket-alu/c21b7e90-bracket-alu-horn/-", {t});
    t = node("servo-small/a3f0e611-servo-s-housing/-", {t});
  }
  return node("base-plate/7d1c0a52-base-ground/-", {t});
}

}  // namespace fixtures
