#include "clscad/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "clscad/error.hpp"
#include "json_util.hpp"

namespace clscad {

std::string_view to_string(JointKind k) { return k == JointKind::Rigid ? "rigid" : "revolute"; }

JointKind joint_kind_from_string(std::string_view s) {
  if (s == "rigid") return JointKind::Rigid;
  if (s == "revolute") return JointKind::Revolute;
  throw Error(ErrorCode::SchemaViolation, "unknown joint kind \"" + std::string(s) + "\"");
}

const JointOrigin* Part::find_joint_origin(const std::string& uuid) const {
  for (const auto& jo : joint_origins)
    if (jo.uuid == uuid) return &jo;
  return nullptr;
}

std::string to_string(const Diagnostic& d) {
  std::string out = d.severity == Severity::Error ? "error" : "warning";
  out += " [" + d.part_id;
  if (!d.joint_origin.empty()) out += "/" + d.joint_origin;
  return out + "] " + d.message;
}

nlohmann::json diagnostics_to_json(const std::vector<Diagnostic>& ds) {
  auto out = nlohmann::json::array();
  for (const auto& d : ds) {
    out.push_back({{"severity", d.severity == Severity::Error ? "error" : "warning"},
                   {"code", to_string(d.code)},
                   {"partId", d.part_id},
                   {"jointOrigin", d.joint_origin},
                   {"message", d.message}});
  }
  return out;
}

bool has_errors(const std::vector<Diagnostic>& ds) {
  return std::any_of(ds.begin(), ds.end(), [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

// ---------------------------------------------------------------------------

std::vector<Diagnostic> validate_part(const TaxonomyContext& ctx, const Part& part) {
  std::vector<Diagnostic> out;
  auto error = [&](std::string jo, std::string msg, ErrorCode code = ErrorCode::InvalidPart) {
    out.push_back({Severity::Error, code, part.part_id, std::move(jo), std::move(msg)});
  };
  auto check_atoms = [&](const TypeExpr& t, const std::string& jo, const char* where) {
    for (const auto& a : t.atoms)
      if (!ctx.contains(a)) error(jo, std::string(where) + " references unknown atom " + to_string(a), ErrorCode::UnknownAtom);
  };

  if (part.part_id.empty() || part.part_id.find('/') != std::string::npos)
    error("", "partId must be non-empty and must not contain '/'");
  if (part.part_types.has_hierarchy(Hierarchy::Formats))
    error("", "partTypes may only use the parts and attributes hierarchies");
  check_atoms(part.part_types, "", "partTypes");
  if (part.unit_cost && !(*part.unit_cost >= 0.0)) error("", "unitCost must be non-negative", ErrorCode::NegativeCost);

  std::set<std::string> uuids;
  bool any_provided = false;
  for (const auto& jo : part.joint_origins) {
    if (jo.uuid.empty()) error("", "joint origin \"" + jo.label + "\" has no uuid");
    else if (!uuids.insert(jo.uuid).second) error(jo.uuid, "uuid used twice in this part", ErrorCode::DuplicateUuid);
    if (!jo.provides && !jo.requires_) error(jo.uuid, "joint origin needs a provided or required type");
    if (jo.provides) {
      any_provided = true;
      check_atoms(*jo.provides, jo.uuid, "provides");
    }
    if (jo.requires_) check_atoms(*jo.requires_, jo.uuid, "requires");
    if (jo.group_id && !jo.requires_) error(jo.uuid, "grouped joint origin must have a required type");
  }

  // Group members must ask for the same thing in the same way.
  std::map<std::string, const JointOrigin*> first_in_group;
  for (const auto& jo : part.joint_origins) {
    if (!jo.group_id || !jo.requires_) continue;
    auto [it, fresh] = first_in_group.emplace(*jo.group_id, &jo);
    if (fresh) continue;
    const JointOrigin& ref = *it->second;
    bool same_type;
    try {
      same_type = canonicalize(ctx, *ref.requires_) == canonicalize(ctx, *jo.requires_);
    } catch (const Error&) {
      same_type = *ref.requires_ == *jo.requires_;
    }
    if (!same_type) error(jo.uuid, "required type differs from group \"" + *jo.group_id + "\"");
    if (ref.joint_kind != jo.joint_kind) error(jo.uuid, "joint kind differs from group \"" + *jo.group_id + "\"");
  }

  if (!any_provided)
    out.push_back({Severity::Warning, ErrorCode::InvalidPart, part.part_id, "",
                   "no joint origin provides a type; the part cannot be used in synthesis"});
  return out;
}

std::vector<Configuration> derive_configurations(const TaxonomyContext& ctx, const Part& part) {
  auto ds = validate_part(ctx, part);
  if (has_errors(ds)) {
    std::string msg = "part \"" + part.part_id + "\" is invalid";
    for (const auto& d : ds)
      if (d.severity == Severity::Error) msg += "; " + d.message;
    throw Error(ErrorCode::InvalidPart, msg);
  }

  std::vector<Configuration> out;
  for (const auto& root : part.joint_origins) {
    if (!root.provides) continue;
    Configuration cfg;
    cfg.part_id = part.part_id;
    cfg.config_id = root.uuid;
    cfg.provided_type = meet(ctx, *root.provides, part.part_types);

    std::map<std::string, ArgGroup> groups;
    for (const auto& jo : part.joint_origins) {
      if (&jo == &root || !jo.requires_) continue;
      std::string key = jo.group_id ? *jo.group_id : jo.uuid;
      auto [it, fresh] = groups.try_emplace(key);
      if (fresh) it->second = ArgGroup{key, *jo.requires_, jo.joint_kind, {}};
      it->second.member_uuids.push_back(jo.uuid);
    }
    for (auto& [_, g] : groups) {
      std::sort(g.member_uuids.begin(), g.member_uuids.end());
      cfg.arg_groups.push_back(std::move(g));
    }
    std::sort(cfg.arg_groups.begin(), cfg.arg_groups.end(), [](const ArgGroup& a, const ArgGroup& b) {
      return std::tie(a.group_key, a.member_uuids.front()) < std::tie(b.group_key, b.member_uuids.front());
    });
    out.push_back(std::move(cfg));
  }
  return out;
}

// ---------------------------------------------------------------------------

const Part* Catalog::find(const std::string& part_id) const {
  auto it = parts_.find(part_id);
  return it == parts_.end() ? nullptr : &it->second;
}

const Part& Catalog::at(const std::string& part_id) const {
  const Part* p = find(part_id);
  if (!p) throw Error(ErrorCode::UnknownPart, "unknown part \"" + part_id + "\"");
  return *p;
}

const Part* Catalog::owner_of(const std::string& uuid) const {
  auto it = uuid_owner_.find(uuid);
  return it == uuid_owner_.end() ? nullptr : find(it->second);
}

Catalog Catalog::with_part(Part part) const {
  auto ds = validate_part(ctx_, part);
  if (has_errors(ds)) {
    ErrorCode code = ErrorCode::InvalidPart;
    std::string msg;
    for (const auto& d : ds) {
      if (d.severity != Severity::Error) continue;
      if (d.code == ErrorCode::UnknownAtom || (d.code == ErrorCode::DuplicateUuid && code != ErrorCode::UnknownAtom))
        code = d.code;
      msg += (msg.empty() ? "" : "; ") + to_string(d);
    }
    throw Error(code, msg);
  }
  Catalog next = without_part(part.part_id);
  for (const auto& jo : part.joint_origins) {
    auto it = next.uuid_owner_.find(jo.uuid);
    if (it != next.uuid_owner_.end())
      throw Error(ErrorCode::DuplicateUuid,
                  "joint origin uuid \"" + jo.uuid + "\" already used by part \"" + it->second + "\"");
  }
  for (const auto& jo : part.joint_origins) next.uuid_owner_[jo.uuid] = part.part_id;
  std::string id = part.part_id;
  next.parts_[id] = std::move(part);
  return next;
}

Catalog Catalog::without_part(const std::string& part_id) const {
  Catalog next = *this;
  auto it = next.parts_.find(part_id);
  if (it == next.parts_.end()) return next;
  for (const auto& jo : it->second.joint_origins) next.uuid_owner_.erase(jo.uuid);
  next.parts_.erase(it);
  return next;
}

Catalog Catalog::with_taxonomy(TaxonomyContext ctx) const {
  Catalog next = *this;
  next.ctx_ = std::move(ctx);
  return next;
}

std::vector<Diagnostic> Catalog::validate() const {
  std::vector<Diagnostic> out;
  std::map<std::string, std::string> seen;
  for (const auto& [id, part] : parts_) {
    auto ds = validate_part(ctx_, part);
    out.insert(out.end(), ds.begin(), ds.end());
    for (const auto& jo : part.joint_origins) {
      auto [it, fresh] = seen.emplace(jo.uuid, id);
      if (!fresh && it->second != id)
        out.push_back({Severity::Error, ErrorCode::DuplicateUuid, id, jo.uuid,
                       "uuid also used by part \"" + it->second + "\""});
    }
  }
  return out;
}

Catalog set_cost(const Catalog& catalog, const std::string& part_id, double cost) {
  Part p = catalog.at(part_id);
  if (!(cost >= 0.0)) throw Error(ErrorCode::NegativeCost, "cost must be non-negative");
  p.unit_cost = cost;
  return catalog.with_part(std::move(p));
}

// ---------------------------------------------------------------------------

nlohmann::json save_part(const Part& part) {
  auto jos = nlohmann::json::array();
  for (const auto& jo : part.joint_origins) {
    jos.push_back({{"uuid", jo.uuid},
                   {"label", jo.label},
                   {"frame", pose_to_json(jo.frame)},
                   {"provides", jo.provides ? type_to_json(*jo.provides) : nlohmann::json(nullptr)},
                   {"requires", jo.requires_ ? type_to_json(*jo.requires_) : nlohmann::json(nullptr)},
                   {"jointKind", to_string(jo.joint_kind)},
                   {"groupId", jo.group_id ? nlohmann::json(*jo.group_id) : nlohmann::json(nullptr)}});
  }
  return {{"partId", part.part_id},
          {"name", part.name},
          {"partTypes", type_to_json(part.part_types)},
          {"unitCost", part.unit_cost ? nlohmann::json(*part.unit_cost) : nlohmann::json(nullptr)},
          {"jointOrigins", jos}};
}

namespace {

std::optional<TypeExpr> optional_type(const nlohmann::json& jo, const char* key) {
  auto it = jo.find(key);
  if (it == jo.end() || it->is_null()) return std::nullopt;
  return type_from_json(*it);
}

}  // namespace

Part load_part(const nlohmann::json& doc) {
  const char* what = "part";
  Part p;
  p.part_id = detail::string_field(doc, "partId", what);
  p.name = doc.contains("name") ? detail::string_field(doc, "name", what) : p.part_id;
  p.part_types = doc.contains("partTypes") ? type_from_json(doc.at("partTypes")) : TypeExpr{};
  if (auto it = doc.find("unitCost"); it != doc.end() && !it->is_null()) {
    if (!it->is_number()) throw Error(ErrorCode::SchemaViolation, "part.unitCost must be a number or null");
    p.unit_cost = it->get<double>();
  }
  for (const auto& j : detail::array_field(doc, "jointOrigins", what)) {
    JointOrigin jo;
    jo.uuid = detail::string_field(j, "uuid", "jointOrigin");
    jo.label = j.contains("label") ? detail::string_field(j, "label", "jointOrigin") : "";
    jo.frame = j.contains("frame") ? pose_from_json(j.at("frame")) : Pose::identity();
    jo.provides = optional_type(j, "provides");
    jo.requires_ = optional_type(j, "requires");
    if (j.contains("jointKind")) jo.joint_kind = joint_kind_from_string(detail::string_field(j, "jointKind", "jointOrigin"));
    if (auto it = j.find("groupId"); it != j.end() && !it->is_null())
      jo.group_id = detail::as_string(*it, "jointOrigin.groupId");
    p.joint_origins.push_back(std::move(jo));
  }
  return p;
}

nlohmann::json read_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::SchemaViolation, "cannot read " + file.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaViolation, file.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& file, const nlohmann::json& doc) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << doc.dump(2) << '\n';
}

TaxonomyContext load_taxonomy_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (fs::is_regular_file(dir / "taxonomy.json")) return load_taxonomies(read_json_file(dir / "taxonomy.json"));
  TaxonomyContext ctx;
  if (fs::is_directory(dir / "taxonomy")) {
    for (Hierarchy h : kAllHierarchies) {
      auto file = dir / "taxonomy" / (std::string(to_string(h)) + ".json");
      if (!fs::is_regular_file(file)) continue;
      Taxonomy t = load_taxonomy(read_json_file(file));
      if (t.hierarchy() != h)
        throw Error(ErrorCode::SchemaViolation, file.string() + " declares the wrong hierarchy");
      ctx = ctx.with_taxonomy(std::move(t));
    }
    return ctx;
  }
  throw Error(ErrorCode::SchemaViolation, "no taxonomy.json or taxonomy/ under " + dir.string());
}

Catalog load_catalog(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  Catalog catalog(load_taxonomy_dir(dir));
  std::vector<fs::path> files;
  if (fs::is_directory(dir / "parts"))
    for (const auto& e : fs::directory_iterator(dir / "parts"))
      if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    Part p = [&] {
      try {
        return load_part(read_json_file(f));
      } catch (const Error& e) {
        throw Error(e.code(), f.filename().string() + ": " + e.what());
      }
    }();
    if (catalog.find(p.part_id))
      throw Error(ErrorCode::SchemaViolation, "partId \"" + p.part_id + "\" defined twice");
    catalog = catalog.with_part(std::move(p));
  }
  return catalog;
}

std::vector<Diagnostic> validate_catalog_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::vector<Diagnostic> out;
  TaxonomyContext ctx;
  try {
    ctx = load_taxonomy_dir(dir);
  } catch (const Error& e) {
    out.push_back({Severity::Error, e.code(), "", "", e.what()});
    return out;
  }
  std::vector<fs::path> files;
  if (fs::is_directory(dir / "parts"))
    for (const auto& e : fs::directory_iterator(dir / "parts"))
      if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  std::map<std::string, std::string> part_file;
  std::map<std::string, std::string> uuid_owner;
  for (const auto& f : files) {
    Part p;
    try {
      p = load_part(read_json_file(f));
    } catch (const Error& e) {
      out.push_back({Severity::Error, e.code(), f.filename().string(), "", e.what()});
      continue;
    }
    if (auto [it, fresh] = part_file.emplace(p.part_id, f.filename().string()); !fresh) {
      out.push_back({Severity::Error, ErrorCode::SchemaViolation, p.part_id, "",
                     "partId also defined in " + it->second});
      continue;
    }
    auto ds = validate_part(ctx, p);
    out.insert(out.end(), ds.begin(), ds.end());
    std::set<std::string> local;
    for (const auto& jo : p.joint_origins) {
      if (!local.insert(jo.uuid).second) continue;
      auto [it, fresh] = uuid_owner.emplace(jo.uuid, p.part_id);
      if (!fresh)
        out.push_back({Severity::Error, ErrorCode::DuplicateUuid, p.part_id, jo.uuid,
                       "uuid also used by part \"" + it->second + "\""});
    }
  }
  return out;
}

void save_catalog(const Catalog& catalog, const std::filesystem::path& dir) {
  write_json_file(dir / "taxonomy.json", save_taxonomies(catalog.taxonomy()));
  for (const auto& [id, part] : catalog.parts()) write_json_file(dir / "parts" / (id + ".json"), save_part(part));
}

}  // namespace clscad
