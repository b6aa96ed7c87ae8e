#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cspi::cli {

// Runs `cspi <command> [options]` with args excluding the program name.
// Returns 0 when every verdict passes, 1 on a verdict failure and 2 on a
// config or parse error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cspi::cli
