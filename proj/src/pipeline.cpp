#include "clscad/pipeline.hpp"

namespace clscad {

CompiledResult compile_result(const Repository& repo, const Catalog& catalog, SynthesisResult result) {
  CompiledResult out;
  out.tree = expand_term(repo, result.term);
  out.partition = partition_links(out.tree);
  out.program = compile_program(out.tree, out.partition);
  out.bom = bom_and_cost(catalog, out.tree);
  out.result = std::move(result);
  return out;
}

std::vector<CompiledResult> run_request(const Catalog& catalog, const Request& request,
                                        const EnumerateOptions& options) {
  Repository repo(catalog);
  std::vector<CompiledResult> out;
  for (auto& r : synthesize(repo, request, options)) out.push_back(compile_result(repo, catalog, std::move(r)));
  return out;
}

void write_outputs(const std::filesystem::path& dir, const std::vector<CompiledResult>& results) {
  std::filesystem::create_directories(dir);
  std::vector<SynthesisResult> plain;
  plain.reserve(results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    plain.push_back(results[i].result);
    write_json_file(dir / ("program-" + std::to_string(i) + ".json"), program_to_json(results[i].program));
    write_json_file(dir / ("bom-" + std::to_string(i) + ".json"), bom_to_json(results[i].bom));
  }
  write_json_file(dir / "results.json", results_to_json(plain));

  // Drop numbered files left over from an earlier, larger run.
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    for (const char* prefix : {"program-", "bom-"}) {
      const std::string pre(prefix);
      if (name.rfind(pre, 0) != 0 || e.path().extension() != ".json") continue;
      const std::string digits = name.substr(pre.size(), name.size() - pre.size() - 5);
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) continue;
      if (std::stoull(digits) >= results.size()) std::filesystem::remove(e.path());
    }
  }
}

}  // namespace clscad
