#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "clscad/error.hpp"
#include "clscad/pose.hpp"
#include "clscad/taxonomy.hpp"
#include "clscad/types.hpp"

namespace clscad {

enum class JointKind { Rigid, Revolute };

std::string_view to_string(JointKind k);
JointKind joint_kind_from_string(std::string_view s);

/// An annotated frame on a part. At least one of provides/requires is set.
struct JointOrigin {
  std::string uuid;
  std::string label;
  Pose frame;
  std::optional<TypeExpr> provides;
  std::optional<TypeExpr> requires_;
  JointKind joint_kind = JointKind::Rigid;
  std::optional<std::string> group_id;

  bool operator==(const JointOrigin&) const = default;
};

struct Part {
  std::string part_id;
  std::string name;
  TypeExpr part_types;  // parts + attributes atoms only
  std::optional<double> unit_cost;
  std::vector<JointOrigin> joint_origins;

  const JointOrigin* find_joint_origin(const std::string& uuid) const;

  bool operator==(const Part&) const = default;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  ErrorCode code = ErrorCode::InvalidPart;
  std::string part_id;
  std::string joint_origin;  // uuid, empty for part-level findings
  std::string message;
};

std::string to_string(const Diagnostic& d);
nlohmann::json diagnostics_to_json(const std::vector<Diagnostic>& ds);
bool has_errors(const std::vector<Diagnostic>& ds);

/// One argument slot of a configuration: every member joint origin receives
/// an identical sub-assembly.
struct ArgGroup {
  std::string group_key;  // groupId, or the uuid for ungrouped joint origins
  TypeExpr required_type;
  JointKind joint_kind = JointKind::Rigid;
  std::vector<std::string> member_uuids;

  bool operator==(const ArgGroup&) const = default;
};

/// A way of using a part, rooted at one providing joint origin.
struct Configuration {
  std::string part_id;
  std::string config_id;  // uuid of the root joint origin
  CanonicalType provided_type;
  std::vector<ArgGroup> arg_groups;

  bool operator==(const Configuration&) const = default;
};

std::vector<Diagnostic> validate_part(const TaxonomyContext& ctx, const Part& part);

// Throws InvalidPart when validate_part reports errors.
std::vector<Configuration> derive_configurations(const TaxonomyContext& ctx, const Part& part);

class Catalog {
 public:
  Catalog() = default;
  explicit Catalog(TaxonomyContext ctx) : ctx_(std::move(ctx)) {}

  const TaxonomyContext& taxonomy() const { return ctx_; }
  const std::map<std::string, Part>& parts() const { return parts_; }
  const Part* find(const std::string& part_id) const;
  const Part& at(const std::string& part_id) const;  // throws UnknownPart

  // Owner of a joint origin uuid, or nullptr.
  const Part* owner_of(const std::string& uuid) const;

  // Validates the part (errors throw InvalidPart, or UnknownAtom when the
  // only problem is an unresolved atom) and checks uuid uniqueness against
  // the other parts.
  Catalog with_part(Part part) const;
  Catalog without_part(const std::string& part_id) const;
  Catalog with_taxonomy(TaxonomyContext ctx) const;

  // All diagnostics, including cross-part uuid clashes.
  std::vector<Diagnostic> validate() const;

 private:
  TaxonomyContext ctx_;
  std::map<std::string, Part> parts_;
  std::map<std::string, std::string> uuid_owner_;
};

Catalog set_cost(const Catalog& catalog, const std::string& part_id, double cost);

nlohmann::json save_part(const Part& part);
Part load_part(const nlohmann::json& doc);  // schema only; atoms are checked by the catalog

/// Data directory layout:
///   <dir>/taxonomy.json          combined document, or
///   <dir>/taxonomy/<h>.json      one file per hierarchy
///   <dir>/parts/*.json           one part per file
TaxonomyContext load_taxonomy_dir(const std::filesystem::path& dir);
Catalog load_catalog(const std::filesystem::path& dir);
// Collects every problem in a data directory instead of stopping at the
// first: schema errors, per-part diagnostics, duplicate ids and uuids.
std::vector<Diagnostic> validate_catalog_dir(const std::filesystem::path& dir);
void save_catalog(const Catalog& catalog, const std::filesystem::path& dir);

nlohmann::json read_json_file(const std::filesystem::path& file);
// Pretty-printed with a trailing newline.
void write_json_file(const std::filesystem::path& file, const nlohmann::json& doc);

}  // namespace clscad
