#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace kerrlab::cli {

/// Bad key, value or file; the CLI exits with status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Value = std::variant<bool, long, double, std::string, std::vector<double>>;

struct Entry {
  Value value;
  std::string help;
};

/// Flat map of dotted keys ("sk.eps2") to typed values. The key set and the
/// type of every key are fixed by defaults(); anything else is rejected.
class Config {
 public:
  static Config defaults();

  /// Nested YAML mapping of sections to scalars or sequences.
  void load_yaml_file(const std::string& path);
  void load_yaml_string(const std::string& text, const std::string& origin);

  /// Parses `text` according to the key's type. `origin` names the source in
  /// error messages (a file position or a flag).
  void set_from_string(const std::string& key, const std::string& text,
                       const std::string& origin);
  void set(const std::string& key, Value v);

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  double num(const std::string& key) const;
  long integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  const std::string& str(const std::string& key) const;
  const std::vector<double>& list(const std::string& key) const;

  const std::map<std::string, Entry>& entries() const { return entries_; }

 private:
  const Value& get(const std::string& key) const;
  std::map<std::string, Entry> entries_;
};

/// Round-trip text form of a value (shortest representation for doubles).
std::string format_value(const Value& v);
std::string format_double(double x);

/// Sweep grid from sweep.{parameter,start,stop,count,spacing}. An empty
/// parameter yields one point with the configured values.
std::vector<double> sweep_values(const Config& cfg);

}  // namespace kerrlab::cli
