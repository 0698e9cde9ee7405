#include "output.hpp"

#include "json.hpp"

#include "kerrlab/version.hpp"

namespace kerrlab::cli {
namespace {

std::string cell_text(const Cell& c) {
  switch (c.index()) {
    case 0: return std::to_string(std::get<long>(c));
    case 1: return format_double(std::get<double>(c));
    default: return std::get<std::string>(c);
  }
}

std::string dim_text(const RunInfo& info) {
  return info.dim > 0 ? std::to_string(info.dim) : "none";
}

// The echoed config shows the resolved dim and seed, not "auto" and -1.
Value resolved(const std::string& key, const Value& v, const RunInfo& info) {
  if (key == "run.dim" && info.dim > 0) return std::string(std::to_string(info.dim));
  if (key == "run.seed") return static_cast<long>(info.seed);
  if (key == "run.threads") return static_cast<long>(info.threads);
  return v;
}

nlohmann::json to_json(const Value& v) {
  switch (v.index()) {
    case 0: return std::get<bool>(v);
    case 1: return std::get<long>(v);
    case 2: return std::get<double>(v);
    case 3: return std::get<std::string>(v);
    default: return std::get<std::vector<double>>(v);
  }
}

}  // namespace

void write_csv(std::ostream& os, const Table& table, const Config& cfg,
               const RunInfo& info) {
  os << "# kerrlab " << KERRLAB_VERSION << "\n";
  os << "# task: " << info.task << "\n";
  os << "# dim: " << dim_text(info);
  if (!info.dim_rule.empty()) os << " (" << info.dim_rule << ")";
  os << "\n# units: " << info.units << "\n";
  os << "# seed: " << info.seed << "\n";
  for (const auto& [key, e] : cfg.entries())
    os << "# " << key << ": " << format_value(resolved(key, e.value, info)) << "\n";
  for (const auto& [k, v] : info.notes) os << "# " << k << ": " << v << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    os << (i ? "," : "") << table.columns[i];
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << "\n";
  }
}

void write_json(std::ostream& os, const Table& table, const Config& cfg,
                const RunInfo& info) {
  nlohmann::ordered_json j;
  j["meta"] = {{"tool", "kerrlab"},
               {"version", KERRLAB_VERSION},
               {"task", info.task},
               {"dim", info.dim > 0 ? nlohmann::json(info.dim) : nlohmann::json(nullptr)},
               {"dim_rule", info.dim_rule},
               {"units", info.units},
               {"seed", info.seed}};
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [key, e] : cfg.entries())
    config[key] = to_json(resolved(key, e.value, info));
  j["config"] = config;
  nlohmann::ordered_json notes = nlohmann::ordered_json::array();
  for (const auto& [k, v] : info.notes) notes.push_back({{"key", k}, {"value", v}});
  j["notes"] = notes;
  j["columns"] = table.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const auto& c : row) {
      if (const auto* l = std::get_if<long>(&c)) r.push_back(*l);
      else if (const auto* d = std::get_if<double>(&c)) r.push_back(*d);
      else r.push_back(std::get<std::string>(c));
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = rows;
  os << j.dump(1) << "\n";
}

}  // namespace kerrlab::cli
