#include "app.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "config.hpp"
#include "kerrlab/errors.hpp"
#include "kerrlab/version.hpp"
#include "output.hpp"
#include "tasks.hpp"

namespace kerrlab::cli {
namespace {

std::string schema_text(const Config& cfg) {
  std::ostringstream os;
  for (const auto& [key, e] : cfg.entries())
    os << key << " = " << format_value(e.value) << "    # " << e.help << "\n";
  return os.str();
}

// Remaining arguments are `--section.key value` or `--section.key=value`.
void apply_overrides(Config& cfg, const std::vector<std::string>& rest) {
  for (std::size_t i = 0; i < rest.size(); ++i) {
    const std::string& a = rest[i];
    if (a.rfind("--", 0) != 0)
      throw ConfigError("unexpected argument '" + a + "'");
    std::string key = a.substr(2), value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= rest.size()) throw ConfigError("flag '" + a + "' needs a value");
      value = rest[++i];
    }
    cfg.set_from_string(key, value, "flag --" + key);
  }
}

std::uint64_t resolve_seed(const Config& cfg) {
  const long s = cfg.integer("run.seed");
  if (s >= 0) return static_cast<std::uint64_t>(s);
  if (s != -1) throw ConfigError("run.seed must be >= 0 (or -1 for KERRLAB_SEED)");
  if (const char* env = std::getenv("KERRLAB_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
      throw ConfigError("KERRLAB_SEED must be a non-negative integer");
    return v;
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"kerrlab: squeezed Kerr oscillator computations"};
  app.allow_extras();
  std::string task, config_path;
  bool list_tasks = false, schema = false, version = false;
  app.add_option("task", task, "one of the tasks listed by --list-tasks");
  app.add_option("-c,--config", config_path, "YAML config file");
  app.add_flag("--list-tasks", list_tasks, "print task names");
  app.add_flag("--schema", schema, "print every config key with its default");
  app.add_flag("--version", version, "print the version");
  app.footer("Any config key can be overridden with --section.key value; "
             "--out, --format, --threads, --seed and --dim are shorthands for "
             "output.path, output.format, run.threads, run.seed and run.dim.");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  Config cfg = Config::defaults();
  if (version) {
    out << "kerrlab " << KERRLAB_VERSION << "\n";
    return kExitOk;
  }
  if (list_tasks) {
    for (const auto& t : task_names()) out << t << "\n";
    return kExitOk;
  }
  if (schema) {
    out << schema_text(cfg);
    return kExitOk;
  }

  RunInfo info;
  Table table;
  try {
    if (task.empty()) throw ConfigError("no task given (see --list-tasks)");
    if (!config_path.empty()) cfg.load_yaml_file(config_path);
    std::vector<std::string> rest = app.remaining();
    for (auto& a : rest) {
      static const std::pair<const char*, const char*> alias[] = {
          {"--out", "--output.path"}, {"--format", "--output.format"},
          {"--threads", "--run.threads"}, {"--seed", "--run.seed"},
          {"--dim", "--run.dim"}};
      for (const auto& [from, to] : alias) {
        const std::string f = from;
        if (a == f) a = to;
        else if (a.rfind(f + "=", 0) == 0) a = std::string(to) + a.substr(f.size());
      }
    }
    apply_overrides(cfg, rest);
    info.seed = resolve_seed(cfg);
    const long th = cfg.integer("run.threads");
    if (th < 0) throw ConfigError("run.threads must be >= 0");
    info.threads = th > 0 ? static_cast<int>(th)
                          : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    table = run_task(task, cfg, info);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const kerrlab::Error& e) {
    err << "numerical error: " << e.name() << ": " << e.what() << "\n";
    return kExitNumerical;
  }

  std::ostringstream buf;
  if (cfg.str("output.format") == "json") write_json(buf, table, cfg, info);
  else write_csv(buf, table, cfg, info);
  const std::string& path = cfg.str("output.path");
  if (path == "-") {
    out << buf.str();
  } else {
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << buf.str())) {
      err << "config error: cannot write output file '" << path << "'\n";
      return kExitConfig;
    }
  }
  return kExitOk;
}

}  // namespace kerrlab::cli
