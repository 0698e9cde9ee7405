#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "config.hpp"

namespace kerrlab::cli {

using Cell = std::variant<long, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// What a run resolved beyond the config: echoed into the output header.
struct RunInfo {
  std::string task;
  int dim = 0;  // 0 when the task has no Fock space
  std::string dim_rule;
  std::uint64_t seed = 0;
  std::string units;
  int threads = 1;
  std::vector<std::pair<std::string, std::string>> notes;
};

const std::vector<std::string>& task_names();

/// Seed of sweep point / job `index`, independent of thread scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Runs `task` over the sweep. Rows are ordered by sweep index. ConfigError
/// for unusable settings; kerrlab::Error subclasses pass through.
Table run_task(const std::string& task, const Config& cfg, RunInfo& info);

}  // namespace kerrlab::cli
