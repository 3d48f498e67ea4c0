#include "clscad/cli.hpp"

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "clscad/error.hpp"
#include "clscad/kinematics.hpp"
#include "clscad/pipeline.hpp"
#include "clscad/server.hpp"

namespace clscad {

namespace fs = std::filesystem;

std::filesystem::path bundled_data_dir() {
#ifdef CLSCAD_BUNDLED_DATA
  return CLSCAD_BUNDLED_DATA;
#else
  return "data/toy-arm";
#endif
}

namespace {

void print_taxonomy(const Taxonomy& t, std::ostream& out) {
  out << to_string(t.hierarchy()) << "\n";
  std::function<void(const std::string&, int)> walk = [&](const std::string& n, int depth) {
    out << std::string(2 * depth + 2, ' ') << n << "\n";
    for (const auto& c : t.children(n)) walk(c, depth + 1);
  };
  for (const auto& n : t.nodes())
    if (t.parents(n).empty()) walk(n, 0);
}

void write_text(const fs::path& file, const std::string& text) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream o(file, std::ios::binary | std::ios::trunc);
  if (!o) throw std::runtime_error("cannot write " + file.string());
  o << text;
}

std::vector<double> angles_or_zero(const std::string& csv, const OccurrenceTree& tree) {
  if (csv.empty()) return std::vector<double>(static_cast<std::size_t>(dof(tree)), 0.0);
  return parse_angles(csv);
}

Server* g_serving = nullptr;

void on_signal(int) {
  if (g_serving) g_serving->stop();
}

Request showcase_request() {
  Request r;
  r.target = TypeExpr{Atom{Hierarchy::Parts, "Arm"}};
  r.propagated = TypeExpr{Atom{Hierarchy::Attributes, "SelfRotate"}};
  return r;
}

void print_summary(const std::vector<CompiledResult>& results, std::ostream& out, std::size_t rows) {
  out << std::left << std::setw(6) << "#" << std::setw(7) << "parts" << std::setw(7) << "links" << std::setw(5)
      << "dof" << "cost\n";
  for (std::size_t i = 0; i < results.size() && i < rows; ++i) {
    const auto& r = results[i];
    std::ostringstream cost;
    cost << std::fixed << std::setprecision(2) << r.bom.total_known_cost << (r.bom.cost_complete ? "" : " (incomplete)");
    out << std::left << std::setw(6) << i << std::setw(7) << r.result.part_count << std::setw(7)
        << r.partition.links.size() << std::setw(5) << dof(r.tree) << cost.str() << "\n";
  }
  if (results.size() > rows) out << "... " << results.size() - rows << " more\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synthesizes mechanical assemblies from a catalog of typed parts.", "clscad"};
  app.require_subcommand(1);

  auto* taxonomy = app.add_subcommand("taxonomy", "Inspect subtype hierarchies");
  taxonomy->require_subcommand(1);
  std::string tax_dir;
  auto* tax_validate = taxonomy->add_subcommand("validate", "Check a data directory's taxonomies");
  tax_validate->add_option("dir", tax_dir, "Data directory")->required();
  auto* tax_show = taxonomy->add_subcommand("show", "Print the hierarchies as trees");
  tax_show->add_option("dir", tax_dir, "Data directory")->required();

  auto* catalog = app.add_subcommand("catalog", "Inspect the part catalog");
  catalog->require_subcommand(1);
  std::string cat_dir;
  auto* cat_validate = catalog->add_subcommand("validate", "Validate every part file");
  cat_validate->add_option("dir", cat_dir, "Data directory")->required();

  std::string data_dir, request_file, out_dir;
  std::optional<int> limit;
  auto* synth = app.add_subcommand("synth", "Run a synthesis request and write programs and BOMs");
  synth->add_option("--data", data_dir, "Data directory")->required();
  synth->add_option("--request", request_file, "Request JSON file")->required();
  synth->add_option("--out", out_dir, "Output directory")->required();
  synth->add_option("--limit", limit, "Override the request's result limit")->check(CLI::PositiveNumber);

  std::string program_file, scene_out, angles_csv;
  auto* assemble = app.add_subcommand("assemble", "Replay a program and write the posed scene");
  assemble->add_option("--program", program_file, "Assembly program JSON")->required();
  assemble->add_option("--data", data_dir, "Data directory")->required();
  assemble->add_option("--out", scene_out, "Scene JSON to write")->required();
  assemble->add_option("--angles", angles_csv, "Comma-separated joint angles in radians");

  std::size_t result_index = 0;
  std::string results_dir, urdf_out;
  auto* urdf = app.add_subcommand("export-urdf", "Write a URDF for one synthesized result");
  urdf->add_option("--result", result_index, "Result index")->required();
  urdf->add_option("--results", results_dir, "Output directory of a synth run")->required();
  urdf->add_option("--data", data_dir, "Data directory")->required();
  urdf->add_option("--out", urdf_out, "URDF file to write")->required();
  urdf->add_option("--angles", angles_csv, "Comma-separated joint angles in radians");

  std::string demo_out = "demo-out";
  auto* demo = app.add_subcommand("demo", "Run the showcase request on the bundled toy arm catalog");
  demo->add_option("--out", demo_out, "Output directory");
  demo->add_option("--data", data_dir, "Use another data directory");

  int port = 8080;
  unsigned workers = 0;
  std::string host = "127.0.0.1";
  auto* serve = app.add_subcommand("serve", "Start the HTTP service");
  serve->add_option("--port", port, "TCP port")->check(CLI::Range(0, 65535));
  serve->add_option("--data", data_dir, "Data directory (default: $CLSCAD_DATA, then the bundled catalog)");
  serve->add_option("--host", host, "Listen address");
  serve->add_option("--workers", workers, "Synthesis workers (0 = one per core)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*tax_validate) {
      TaxonomyContext ctx = load_taxonomy_dir(tax_dir);
      for (Hierarchy h : kAllHierarchies)
        out << to_string(h) << ": " << ctx.taxonomy(h).size() << " atoms, " << ctx.taxonomy(h).edges().size()
            << " edges\n";
      out << "ok\n";
      return 0;
    }
    if (*tax_show) {
      TaxonomyContext ctx = load_taxonomy_dir(tax_dir);
      for (Hierarchy h : kAllHierarchies) print_taxonomy(ctx.taxonomy(h), out);
      return 0;
    }
    if (*cat_validate) {
      auto ds = validate_catalog_dir(cat_dir);
      for (const auto& d : ds) out << to_string(d) << "\n";
      if (has_errors(ds)) return 1;
      out << "ok\n";
      return 0;
    }
    if (*synth) {
      Catalog cat = load_catalog(data_dir);
      Request request = request_from_json(read_json_file(request_file));
      if (limit) request.limit = *limit;
      auto results = run_request(cat, request);
      write_outputs(out_dir, results);
      out << "wrote " << results.size() << " results to " << out_dir << "\n";
      return 0;
    }
    if (*assemble) {
      Catalog cat = load_catalog(data_dir);
      AssemblyProgram program = program_from_json(read_json_file(program_file));
      auto replayed = interpret_program(cat, program);
      auto posed = forward_kinematics(cat, replayed.tree, program, angles_or_zero(angles_csv, replayed.tree));
      write_json_file(scene_out, export_scene(posed));
      out << "placed " << posed.occurrences.size() << " occurrences in " << replayed.partition.links.size()
          << " links\n";
      return 0;
    }
    if (*urdf) {
      Catalog cat = load_catalog(data_dir);
      auto file = fs::path(results_dir) / ("program-" + std::to_string(result_index) + ".json");
      if (!fs::exists(file)) throw Error(ErrorCode::SchemaViolation, "no result " + std::to_string(result_index) + " in " + results_dir);
      AssemblyProgram program = program_from_json(read_json_file(file));
      auto replayed = interpret_program(cat, program);
      auto posed = forward_kinematics(cat, replayed.tree, program, angles_or_zero(angles_csv, replayed.tree));
      write_text(urdf_out, export_urdf(posed, replayed.partition, "result_" + std::to_string(result_index)));
      out << "wrote " << urdf_out << "\n";
      return 0;
    }
    if (*demo) {
      fs::path dir = data_dir.empty() ? bundled_data_dir() : fs::path(data_dir);
      Catalog cat = load_catalog(dir);
      Request request = showcase_request();
      out << "catalog: " << cat.parts().size() << " parts from " << dir.string() << "\n";
      out << "request: " << to_string(request.target) << " propagating " << to_string(request.propagated) << "\n";
      auto results = run_request(cat, request);
      write_outputs(demo_out, results);
      print_summary(results, out, 10);
      // Pose and export the first result with the most joints.
      std::size_t best = 0;
      for (std::size_t i = 0; i < results.size(); ++i)
        if (dof(results[i].tree) > dof(results[best].tree)) best = i;
      if (!results.empty()) {
        const auto& r = results[best];
        std::vector<double> angles(static_cast<std::size_t>(dof(r.tree)), 0.3);
        auto posed = forward_kinematics(cat, r.tree, r.program, angles);
        write_json_file(fs::path(demo_out) / ("scene-" + std::to_string(best) + ".json"), export_scene(posed));
        write_text(fs::path(demo_out) / ("result-" + std::to_string(best) + ".urdf"), export_urdf(posed, r.partition));
        out << "posed result " << best << " (" << dof(r.tree) << " DoF) at 0.3 rad per joint\n";
      }
      out << "outputs in " << demo_out << "\n";
      return 0;
    }
    if (*serve) {
      fs::path dir = data_dir;
      if (dir.empty()) {
        const char* env = std::getenv("CLSCAD_DATA");
        dir = env && *env ? fs::path(env) : bundled_data_dir();
      }
      ServerOptions options;
      options.data_dir = dir;
      options.workers = workers;
      Server server(options);
      int bound = server.bind(host, port);
      if (bound < 0) {
        err << "cannot bind " << host << ":" << port << "\n";
        return 1;
      }
      out << "serving " << dir.string() << " on http://" << host << ":" << bound << "\n" << std::flush;
      g_serving = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      server.listen_after_bind();
      g_serving = nullptr;
      return 0;
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace clscad
