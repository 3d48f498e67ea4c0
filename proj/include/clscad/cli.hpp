#pragma once

#include <filesystem>
#include <ostream>

namespace clscad {

// Exit codes: 0 success, 1 validation failure, 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Directory of the toy arm catalog shipped with the sources.
std::filesystem::path bundled_data_dir();

}  // namespace clscad
