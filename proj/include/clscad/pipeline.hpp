#pragma once

#include <filesystem>
#include <vector>

#include "clscad/assembly.hpp"
#include "clscad/catalog.hpp"
#include "clscad/synthesis.hpp"

namespace clscad {

/// A synthesized term together with everything the browse view needs.
struct CompiledResult {
  SynthesisResult result;
  OccurrenceTree tree;
  LinkPartition partition;
  AssemblyProgram program;
  Bom bom;
};

CompiledResult compile_result(const Repository& repo, const Catalog& catalog, SynthesisResult result);

std::vector<CompiledResult> run_request(const Catalog& catalog, const Request& request,
                                        const EnumerateOptions& options = {});

// results.json plus program-<i>.json and bom-<i>.json for i = 0, 1, ...
void write_outputs(const std::filesystem::path& dir, const std::vector<CompiledResult>& results);

}  // namespace clscad
