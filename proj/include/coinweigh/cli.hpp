#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace coinweigh {

/// Command-line entry point (the binary's main is a thin wrapper so tests
/// can drive it in-process). Exit codes: 0 success, 1 verification failure,
/// 2 usage error. Subcommands and output schemas are documented in MANUAL.md.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coinweigh
