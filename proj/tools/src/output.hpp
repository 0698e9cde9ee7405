#pragma once

#include <ostream>
#include <string>

#include "config.hpp"
#include "tasks.hpp"

namespace kerrlab::cli {

/// `#`-prefixed metadata (tool version, task, resolved dim, units, seed,
/// every resolved config key, notes), one header row, then the rows.
void write_csv(std::ostream& os, const Table& table, const Config& cfg,
               const RunInfo& info);

/// Same content as one JSON object: {"meta", "config", "notes", "columns",
/// "rows"}. Non-finite numbers are written as null.
void write_json(std::ostream& os, const Table& table, const Config& cfg,
                const RunInfo& info);

}  // namespace kerrlab::cli
