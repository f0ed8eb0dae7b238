#pragma once

#include "config.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace bellkit::cli {

// Each command writes its report to `out` and returns the process exit code.
int cmd_eval(const CliConfig& config, std::ostream& out);
int cmd_optimize(const CliConfig& config, std::ostream& out);
int cmd_map(const CliConfig& config, std::ostream& out);
int cmd_simulate(const CliConfig& config, std::ostream& out);

// Full command-line entry point; args excludes the program name.
// Exit codes: 0 ok, 1 numeric failure, 2 usage or configuration error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bellkit::cli
