#include <doctest.h>

#include <filesystem>
#include <random>

#include "clscad/catalog.hpp"
#include "fixtures.hpp"

using namespace clscad;
using fixtures::attr;
using fixtures::fmt;
using fixtures::prt;
namespace fs = std::filesystem;

namespace {

TaxonomyContext blocks() {
  return TaxonomyContext{}
      .create_node(fmt("Face"), {})
      .create_node(prt("Cube"), {})
      .create_node(prt("Peg"), {})
      .create_node(attr("Wood"), {});
}

Part wooden_cube() {
  Part p{"cube", "Wooden cube", TypeExpr{prt("Cube"), attr("Wood")}, 0.8, {}};
  for (int i = 0; i < 6; ++i)
    p.joint_origins.push_back(fixtures::providing("cube-side-" + std::to_string(i), TypeExpr{fmt("Face")}));
  return p;
}

void copy_toy(const fs::path& to) {
  fs::copy(fixtures::toy_dir(), to, fs::copy_options::recursive | fs::copy_options::overwrite_existing);
}

}  // namespace

TEST_CASE("validate_part") {
  auto ctx = blocks();
  CHECK(validate_part(ctx, wooden_cube()).empty());

  Part bare = wooden_cube();
  bare.joint_origins[2].provides.reset();
  auto ds = validate_part(ctx, bare);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].severity == Severity::Error);
  CHECK(ds[0].joint_origin == "cube-side-2");

  Part formats = wooden_cube();
  formats.part_types.atoms.insert(fmt("Face"));
  ds = validate_part(ctx, formats);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].severity == Severity::Error);

  Part receiver{"socket", "Socket", TypeExpr{prt("Peg")}, std::nullopt, {}};
  receiver.joint_origins = {fixtures::requiring("socket-in", TypeExpr{prt("Cube")})};
  ds = validate_part(ctx, receiver);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].severity == Severity::Warning);
  CHECK_FALSE(has_errors(ds));
}

TEST_CASE("validate_part: groups, atoms, uuids") {
  auto ctx = blocks();
  Part p{"rack", "Rack", TypeExpr{prt("Peg")}, 1.0, {}};
  p.joint_origins = {fixtures::providing("rack-base", TypeExpr{fmt("Face")}),
                     fixtures::requiring("rack-a", TypeExpr{prt("Cube")}, JointKind::Rigid, {}, "g"),
                     fixtures::requiring("rack-b", TypeExpr{prt("Peg")}, JointKind::Rigid, {}, "g")};
  CHECK(has_errors(validate_part(ctx, p)));
  p.joint_origins[2].requires_ = TypeExpr{prt("Cube")};
  p.joint_origins[2].joint_kind = JointKind::Revolute;
  CHECK(has_errors(validate_part(ctx, p)));
  p.joint_origins[2].joint_kind = JointKind::Rigid;
  CHECK(validate_part(ctx, p).empty());

  p.joint_origins[2].uuid = "rack-a";
  CHECK(validate_part(ctx, p).at(0).code == ErrorCode::DuplicateUuid);

  Part ghost = wooden_cube();
  ghost.part_types.atoms.insert(attr("Steel"));
  CHECK(validate_part(ctx, ghost).at(0).code == ErrorCode::UnknownAtom);
}

TEST_CASE("derive_configurations") {
  auto ctx = blocks();
  auto cube = derive_configurations(ctx, wooden_cube());
  REQUIRE(cube.size() == 6);
  for (const auto& c : cube) {
    CHECK(c.arg_groups.empty());
    CHECK(c.provided_type.expr() == TypeExpr{fmt("Face"), prt("Cube"), attr("Wood")});
    CHECK(subtype_le(ctx, c.provided_type.expr(), wooden_cube().part_types));
  }

  Part rack{"rack", "Rack", TypeExpr{prt("Peg")}, 1.0, {}};
  rack.joint_origins = {fixtures::providing("rack-base", TypeExpr{fmt("Face")}),
                        fixtures::requiring("rack-b", TypeExpr{prt("Cube")}, JointKind::Rigid, {}, "g"),
                        fixtures::requiring("rack-a", TypeExpr{prt("Cube")}, JointKind::Rigid, {}, "g")};
  auto cfg = derive_configurations(ctx, rack);
  REQUIRE(cfg.size() == 1);
  REQUIRE(cfg[0].arg_groups.size() == 1);
  CHECK(cfg[0].arg_groups[0].group_key == "g");
  CHECK(cfg[0].arg_groups[0].member_uuids == std::vector<std::string>{"rack-a", "rack-b"});

  Part bad = wooden_cube();
  bad.joint_origins[0].provides.reset();
  CHECK(fixtures::error_code([&] { derive_configurations(ctx, bad); }) == ErrorCode::InvalidPart);
}

TEST_CASE("a joint origin that provides and requires is an argument unless it is the root") {
  auto ctx = blocks();
  Part link{"link", "Link", TypeExpr{prt("Peg")}, 1.0, {}};
  auto a = fixtures::providing("link-a", TypeExpr{fmt("Face")});
  a.requires_ = TypeExpr{prt("Cube")};
  auto b = fixtures::providing("link-b", TypeExpr{fmt("Face")});
  b.requires_ = TypeExpr{prt("Peg")};
  link.joint_origins = {a, b};
  auto cfg = derive_configurations(ctx, link);
  REQUIRE(cfg.size() == 2);
  REQUIRE(cfg[0].arg_groups.size() == 1);
  CHECK(cfg[0].config_id == "link-a");
  CHECK(cfg[0].arg_groups[0].member_uuids == std::vector<std::string>{"link-b"});
  CHECK(cfg[1].arg_groups[0].member_uuids == std::vector<std::string>{"link-a"});
}

TEST_CASE("argument groups are ordered by key") {
  auto ctx = blocks();
  Part p{"hub", "Hub", TypeExpr{prt("Peg")}, 1.0, {}};
  p.joint_origins = {fixtures::providing("hub-0", TypeExpr{fmt("Face")}),
                     fixtures::requiring("hub-z", TypeExpr{prt("Cube")}),
                     fixtures::requiring("hub-m", TypeExpr{prt("Peg")}, JointKind::Revolute, {}, "b-group"),
                     fixtures::requiring("hub-a", TypeExpr{prt("Peg")}, JointKind::Revolute, {}, "b-group")};
  auto cfg = derive_configurations(ctx, p).at(0);
  REQUIRE(cfg.arg_groups.size() == 2);
  CHECK(cfg.arg_groups[0].group_key == "b-group");
  CHECK(cfg.arg_groups[0].joint_kind == JointKind::Revolute);
  CHECK(cfg.arg_groups[1].group_key == "hub-z");
  CHECK(derive_configurations(ctx, p) == derive_configurations(ctx, p));
}

TEST_CASE("set_cost") {
  Catalog cat = Catalog(blocks()).with_part(wooden_cube());
  CHECK(set_cost(cat, "cube", 25.0).at("cube").unit_cost == 25.0);
  CHECK(fixtures::error_code([&] { set_cost(cat, "ghost", 1); }) == ErrorCode::UnknownPart);
  CHECK(fixtures::error_code([&] { set_cost(cat, "cube", -1); }) == ErrorCode::NegativeCost);
}

TEST_CASE("with_part enforces catalog-wide uuid uniqueness and known atoms") {
  Catalog cat = Catalog(blocks()).with_part(wooden_cube());
  Part twin = wooden_cube();
  twin.part_id = "cube2";
  CHECK(fixtures::error_code([&] { cat.with_part(twin); }) == ErrorCode::DuplicateUuid);
  // Replacing a part may keep its own uuids.
  CHECK(cat.with_part(wooden_cube()).parts().size() == 1);
  Part ghost = wooden_cube();
  ghost.part_id = "ghost";
  ghost.part_types = TypeExpr{prt("Sphere")};
  for (auto& jo : ghost.joint_origins) jo.uuid += "-g";
  CHECK(fixtures::error_code([&] { cat.with_part(ghost); }) == ErrorCode::UnknownAtom);
  CHECK(cat.owner_of("cube-side-3")->part_id == "cube");
}

TEST_CASE("toy part files round-trip to their canonical form") {
  int n = 0;
  for (const auto& entry : fs::directory_iterator(fixtures::toy_dir() / "parts")) {
    auto doc = read_json_file(entry.path());
    CHECK(save_part(load_part(doc)) == doc);
    ++n;
  }
  CHECK(n == 9);
  Catalog toy = load_catalog(fixtures::toy_dir());
  CHECK(toy.parts().size() == 9);
  CHECK(toy.validate().empty());
}

TEST_CASE("part json canonicalizes quaternion sign and rejects non-unit rotations") {
  Part p = wooden_cube();
  p.joint_origins[0].frame.rotation = Quaternion{-0.0, 1.0, 0.0, 0.0};
  auto doc = save_part(p);
  doc["jointOrigins"][0]["frame"]["quaternion"] = {-1.0, 0.0, 0.0, 0.0};
  auto back = save_part(load_part(doc));
  CHECK(back["jointOrigins"][0]["frame"]["quaternion"] == nlohmann::json({1.0, 0.0, 0.0, 0.0}));
  doc["jointOrigins"][0]["frame"]["quaternion"] = {2.0, 0.0, 0.0, 0.0};
  CHECK(fixtures::error_code([&] { load_part(doc); }) == ErrorCode::NonUnitQuaternion);
  doc["jointOrigins"][0]["frame"]["quaternion"] = {1.0, 0.0, 0.0, 0.0};
  doc["jointOrigins"][0]["jointKind"] = "prismatic";
  CHECK(fixtures::error_code([&] { load_part(doc); }) == ErrorCode::SchemaViolation);
  CHECK(fixtures::error_code([&] { load_part(nlohmann::json{{"partId", 3}}); }) == ErrorCode::SchemaViolation);
}

TEST_CASE("load_catalog rejects shared uuids and unknown atoms") {
  auto dir = fixtures::scratch_dir("catalog");
  copy_toy(dir);
  auto doc = read_json_file(dir / "parts" / "gripper.json");
  doc["partId"] = "gripper-copy";
  write_json_file(dir / "parts" / "gripper-copy.json", doc);
  CHECK(fixtures::error_code([&] { load_catalog(dir); }) == ErrorCode::DuplicateUuid);
  auto ds = validate_catalog_dir(dir);
  CHECK(has_errors(ds));

  fs::remove(dir / "parts" / "gripper-copy.json");
  CHECK(load_catalog(dir).parts().size() == 9);
  auto grip = read_json_file(dir / "parts" / "gripper.json");
  grip["partTypes"]["attributes"] = {"Unobtainium"};
  write_json_file(dir / "parts" / "gripper.json", grip);
  CHECK(fixtures::error_code([&] { load_catalog(dir); }) == ErrorCode::UnknownAtom);
  ds = validate_catalog_dir(dir);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].code == ErrorCode::UnknownAtom);
  fs::remove_all(dir);
}

TEST_CASE("save_catalog then load_catalog is the identity") {
  Catalog toy = load_catalog(fixtures::toy_dir());
  auto dir = fixtures::scratch_dir("save");
  save_catalog(toy, dir);
  Catalog back = load_catalog(dir);
  CHECK(back.taxonomy() == toy.taxonomy());
  CHECK(back.parts() == toy.parts());
  fs::remove_all(dir);
}

TEST_CASE("property: configurations per provided joint origin") {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 100; ++round) {
    Catalog cat = fixtures::random_catalog(rng);
    REQUIRE(cat.validate().empty());
    for (const auto& [id, part] : cat.parts()) {
      auto cfg = derive_configurations(cat.taxonomy(), part);
      std::size_t provided = 0;
      for (const auto& jo : part.joint_origins) provided += jo.provides.has_value();
      REQUIRE(cfg.size() == provided);
      for (const auto& c : cfg) {
        REQUIRE(subtype_le(cat.taxonomy(), c.provided_type.expr(), part.part_types));
        std::size_t members = 0;
        for (const auto& g : c.arg_groups) members += g.member_uuids.size();
        std::size_t requiring = 0;
        for (const auto& jo : part.joint_origins) requiring += jo.requires_.has_value() && jo.uuid != c.config_id;
        REQUIRE(members == requiring);
      }
      auto doc = save_part(part);
      REQUIRE(save_part(load_part(doc)) == doc);
    }
  }
}
