#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace kerrlab::cli {
namespace {

using List = std::vector<double>;

std::string type_name(const Value& v) {
  switch (v.index()) {
    case 0: return "boolean";
    case 1: return "integer";
    case 2: return "number";
    case 3: return "string";
    default: return "list of numbers";
  }
}

bool parse_double(const std::string& s, double& out) {
  const std::string t = s;
  if (t == "inf" || t == "+inf" || t == ".inf") {
    out = std::numeric_limits<double>::infinity();
    return true;
  }
  const char* b = t.data();
  const char* e = b + t.size();
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && p == e;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::defaults() {
  Config c;
  auto& e = c.entries_;
  const double pi = 3.141592653589793;
  // run
  e["run.seed"] = {-1L, "seed for stochastic tasks (-1: KERRLAB_SEED, else 0)"};
  e["run.threads"] = {0L, "worker threads over sweep points (0: all cores)"};
  e["run.dim"] = {std::string("auto"), "Fock cutoff or 'auto'"};
  e["run.units"] = {std::string("kerr"), "'kerr' (K = 1) or 'si' (rad/s and s)"};
  e["run.truncation_check"] = {true, "re-check spectra at twice the cutoff"};
  // output
  e["output.format"] = {std::string("csv"), "'csv' or 'json'"};
  e["output.path"] = {std::string("-"), "output file, '-' for stdout"};
  // Hamiltonian
  e["sk.delta"] = {0.0, "detuning Delta"};
  e["sk.kerr"] = {1.0, "Kerr K (must be 1 in kerr units)"};
  e["sk.eps2"] = {0.0, "squeezing drive eps2 >= 0"};
  e["sk.lambda"] = {0.0, "six-wave term lambda"};
  e["sk.eps4_re"] = {0.0, "Re eps4"};
  e["sk.eps4_im"] = {0.0, "Im eps4"};
  e["sk.eps2_prime_re"] = {0.0, "Re eps2'"};
  e["sk.eps2_prime_im"] = {0.0, "Im eps2'"};
  // dissipation
  e["dissipation.kappa1"] = {0.0, "single-photon loss rate"};
  e["dissipation.n_th"] = {0.0, "thermal occupation"};
  e["dissipation.kappa_phi"] = {0.0, "pure dephasing rate"};
  e["dissipation.sigma_delta"] = {0.0, "quasi-static detuning spread"};
  e["dissipation.n_samples"] = {33L, "stratified detuning samples"};
  // circuit
  e["circuit.omega_o"] = {1.0, "bare oscillator frequency"};
  e["circuit.g3"] = {0.0, "cubic nonlinearity"};
  e["circuit.g4"] = {0.0, "quartic nonlinearity"};
  e["circuit.g5"] = {0.0, "quintic nonlinearity"};
  e["circuit.g6"] = {0.0, "sextic nonlinearity"};
  e["circuit.Omega_d"] = {0.0, "drive amplitude"};
  e["circuit.omega_d"] = {2.0, "drive frequency"};
  e["circuit.omega_a"] = {0.0, "shifted frequency (<= 0: omega_o)"};
  e["circuit.drive_phase"] = {0.0, "phase of Pi"};
  e["circuit.order"] = {2L, "perturbative order 1..4"};
  e["circuit.floquet"] = {false, "also compute Floquet gaps"};
  e["circuit.floquet_dim"] = {14L, "Fock cutoff of the Floquet check"};
  // sweep
  e["sweep.parameter"] = {std::string(""), "swept key, e.g. sk.eps2 (empty: none)"};
  e["sweep.start"] = {0.0, "first value"};
  e["sweep.stop"] = {0.0, "last value"};
  e["sweep.count"] = {1L, "number of points"};
  e["sweep.spacing"] = {std::string("linear"), "'linear' or 'log'"};
  // tasks
  e["spectrum.n_pairs"] = {4L, "pairs reported per point"};
  e["kissing.n_pairs"] = {3L, "pairs whose inflection is located"};
  e["lifetime.n_th_values"] = {List{}, "thermal occupations (empty: dissipation.n_th)"};
  e["lifetime.t_max"] = {100.0, "initial fit window"};
  e["lifetime.grid_points"] = {120L, "samples per window"};
  e["lifetime.drive_re"] = {0.0, "Re of an optional resonant drive"};
  e["lifetime.drive_im"] = {0.0, "Im of an optional resonant drive"};
  e["leff.gamma"] = {3L, "pairs kept (0: from |delta_n| < kappa1)"};
  e["leff.ablation"] = {false, "drop the tunnel-splitting part"};
  e["leff.compare_full"] = {false, "also report the full-superoperator T_X"};
  e["lindblad_spectrum.eigenvalues"] = {false, "list every eigenvalue"};
  e["wigner.state"] = {std::string("coherent"),
                       "coherent, cat_even, cat_odd, fock, thermal or sk_plus_x"};
  e["wigner.alpha_re"] = {2.0, "Re alpha"};
  e["wigner.alpha_im"] = {0.0, "Im alpha"};
  e["wigner.fock_n"] = {0L, "Fock index"};
  e["wigner.n_th"] = {0.5, "thermal occupation"};
  e["wigner.extent"] = {5.0, "grid half-width in x and p"};
  e["wigner.points"] = {101L, "grid points per axis"};
  e["kerr_evolve.alpha_re"] = {2.0, "Re alpha"};
  e["kerr_evolve.alpha_im"] = {0.0, "Im alpha"};
  e["kerr_evolve.t_max"] = {pi, "final time"};
  e["kerr_evolve.points"] = {101L, "time samples"};
  e["cat_rabi.eps_x_re"] = {0.2, "Re eps_x"};
  e["cat_rabi.eps_x_im"] = {0.0, "Im eps_x"};
  e["cat_rabi.t_max"] = {50.0, "final time"};
  e["cat_rabi.points"] = {200L, "time samples"};
  e["cat_rabi.trace"] = {false, "emit the parity trace instead of the fit"};
  e["readout.g_bs_re"] = {0.0, "Re g_bs"};
  e["readout.g_bs_im"] = {1.0, "Im g_bs"};
  e["readout.kappa_r"] = {1.0, "resonator linewidth"};
  e["readout.eta"] = {1.0, "quantum efficiency"};
  e["readout.tau"] = {10.0, "pulse length"};
  e["readout.T_X"] = {1000.0, "well-flip time (inf allowed)"};
  e["readout.alpha_re"] = {2.0, "Re alpha"};
  e["readout.alpha_im"] = {0.0, "Im alpha"};
  e["readout.kerr"] = {1.0, "K for the weak-readout ratio"};
  e["readout.n_shots"] = {10000L, "shots"};
  e["readout.n_repeats"] = {10L, "measurements per shot"};
  e["liouville.x0"] = {-2.8284271247461903, "ensemble centre x"};
  e["liouville.p0"] = {0.0, "ensemble centre p"};
  e["liouville.spread"] = {0.5, "Gaussian spread"};
  e["liouville.particles"] = {400L, "number of particles"};
  e["liouville.t_max"] = {60.0, "final time"};
  e["liouville.points"] = {61L, "time samples"};
  e["metapotential.variant"] = {std::string("quantum"), "'quantum' or 'classical'"};
  e["metapotential.extent"] = {5.0, "grid half-width"};
  e["metapotential.points"] = {101L, "grid points per axis"};
  return c;
}

const Value& Config::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("unknown key '" + key + "'");
  return it->second.value;
}

double Config::num(const std::string& key) const {
  const Value& v = get(key);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* l = std::get_if<long>(&v)) return static_cast<double>(*l);
  throw ConfigError("key '" + key + "' is not numeric");
}

long Config::integer(const std::string& key) const {
  const Value& v = get(key);
  if (const auto* l = std::get_if<long>(&v)) return *l;
  throw ConfigError("key '" + key + "' is not an integer");
}

bool Config::flag(const std::string& key) const {
  const Value& v = get(key);
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  throw ConfigError("key '" + key + "' is not a boolean");
}

const std::string& Config::str(const std::string& key) const {
  const Value& v = get(key);
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  throw ConfigError("key '" + key + "' is not a string");
}

const std::vector<double>& Config::list(const std::string& key) const {
  const Value& v = get(key);
  if (const auto* l = std::get_if<List>(&v)) return *l;
  throw ConfigError("key '" + key + "' is not a list");
}

void Config::set(const std::string& key, Value v) {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("unknown key '" + key + "'");
  if (it->second.value.index() != v.index()) {
    // Integers are accepted where numbers are expected.
    if (std::holds_alternative<double>(it->second.value) &&
        std::holds_alternative<long>(v))
      v = static_cast<double>(std::get<long>(v));
    else
      throw ConfigError("key '" + key + "' expects a " +
                        type_name(it->second.value));
  }
  it->second.value = std::move(v);
}

void Config::set_from_string(const std::string& key, const std::string& raw,
                             const std::string& origin) {
  const auto it = entries_.find(key);
  if (it == entries_.end())
    throw ConfigError(origin + ": unknown key '" + key + "'");
  const std::string text = trim(raw);
  const auto bad = [&] {
    return ConfigError(origin + ": key '" + key + "' expects a " +
                       type_name(it->second.value) + ", got '" + text + "'");
  };
  switch (it->second.value.index()) {
    case 0: {
      if (text == "true" || text == "1" || text == "yes" || text == "on")
        it->second.value = true;
      else if (text == "false" || text == "0" || text == "no" || text == "off")
        it->second.value = false;
      else
        throw bad();
      return;
    }
    case 1: {
      long v = 0;
      auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || p != text.data() + text.size()) throw bad();
      it->second.value = v;
      return;
    }
    case 2: {
      double v = 0.0;
      if (!parse_double(text, v)) throw bad();
      it->second.value = v;
      return;
    }
    case 3:
      it->second.value = text;
      return;
    default: {
      List out;
      std::string body = text;
      if (!body.empty() && body.front() == '[' && body.back() == ']')
        body = body.substr(1, body.size() - 2);
      std::stringstream ss(body);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        double v = 0.0;
        if (!parse_double(item, v)) throw bad();
        out.push_back(v);
      }
      it->second.value = out;
      return;
    }
  }
}

namespace {

void load_node(Config& cfg, const YAML::Node& root, const std::string& origin) {
  const auto where = [&](const YAML::Node& n) {
    std::ostringstream os;
    os << origin << ":" << n.Mark().line + 1;
    return os.str();
  };
  if (root.IsNull()) return;
  if (!root.IsMap())
    throw ConfigError(where(root) + ": top level must be a mapping of sections");
  for (const auto& sec : root) {
    const std::string section = sec.first.as<std::string>();
    if (!sec.second.IsMap())
      throw ConfigError(where(sec.first) + ": section '" + section +
                        "' must be a mapping");
    for (const auto& kv : sec.second) {
      const std::string key = section + "." + kv.first.as<std::string>();
      if (!cfg.has(key))
        throw ConfigError(where(kv.first) + ": unknown key '" + key + "'");
      if (kv.second.IsSequence()) {
        std::string joined;
        for (const auto& item : kv.second) {
          if (!item.IsScalar())
            throw ConfigError(where(item) + ": key '" + key +
                              "' expects scalar list items");
          joined += item.as<std::string>() + ",";
        }
        if (!std::holds_alternative<std::vector<double>>(
                cfg.entries().at(key).value))
          throw ConfigError(where(kv.first) + ": key '" + key +
                            "' does not take a list");
        cfg.set_from_string(key, joined, where(kv.second));
      } else if (kv.second.IsScalar()) {
        cfg.set_from_string(key, kv.second.as<std::string>(), where(kv.second));
      } else {
        throw ConfigError(where(kv.first) + ": key '" + key +
                          "' must be a scalar or a list");
      }
    }
  }
}

}  // namespace

void Config::load_yaml_file(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw ConfigError("cannot read config file '" + path + "'");
  } catch (const YAML::Exception& e) {
    throw ConfigError(path + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  load_node(*this, root, path);
}

void Config::load_yaml_string(const std::string& text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  load_node(*this, root, origin);
}

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

std::string format_value(const Value& v) {
  switch (v.index()) {
    case 0: return std::get<bool>(v) ? "true" : "false";
    case 1: return std::to_string(std::get<long>(v));
    case 2: return format_double(std::get<double>(v));
    case 3: return std::get<std::string>(v);
    default: {
      std::string s = "[";
      const auto& l = std::get<List>(v);
      for (std::size_t i = 0; i < l.size(); ++i)
        s += (i ? "," : "") + format_double(l[i]);
      return s + "]";
    }
  }
}

std::vector<double> sweep_values(const Config& cfg) {
  const std::string& par = cfg.str("sweep.parameter");
  if (par.empty()) return {std::nan("")};
  if (!cfg.has(par)) throw ConfigError("sweep.parameter: unknown key '" + par + "'");
  if (!std::holds_alternative<double>(cfg.entries().at(par).value))
    throw ConfigError("sweep.parameter: key '" + par + "' is not a number");
  const long n = cfg.integer("sweep.count");
  if (n < 1) throw ConfigError("sweep.count must be >= 1");
  const double a = cfg.num("sweep.start"), b = cfg.num("sweep.stop");
  const std::string& spacing = cfg.str("sweep.spacing");
  if (spacing != "linear" && spacing != "log")
    throw ConfigError("sweep.spacing must be 'linear' or 'log'");
  if (spacing == "log" && !(a > 0.0 && b > 0.0))
    throw ConfigError("log sweeps need positive start and stop");
  std::vector<double> v(n);
  for (long k = 0; k < n; ++k) {
    const double f = n == 1 ? 0.0 : double(k) / double(n - 1);
    v[k] = spacing == "linear" ? a + (b - a) * f
                               : std::exp(std::log(a) + (std::log(b) - std::log(a)) * f);
  }
  return v;
}

}  // namespace kerrlab::cli
