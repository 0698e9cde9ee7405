#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kerrlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Full command line: `kerrlab <task> [--config file] [--key value]...`.
/// Data goes to the configured output (`-` is `out`), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kerrlab::cli
