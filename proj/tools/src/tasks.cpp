#include "tasks.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <set>
#include <thread>

#include "kerrlab/effham.hpp"
#include "kerrlab/errors.hpp"
#include "kerrlab/fock.hpp"
#include "kerrlab/lindblad.hpp"
#include "kerrlab/phasespace.hpp"
#include "kerrlab/protocols.hpp"
#include "kerrlab/spectrum.hpp"

namespace kerrlab::cli {
namespace {

using Row = std::vector<Cell>;
using Rows = std::vector<Row>;

enum class Kind { None, Rate, Time, CircuitRate };

Kind kind_of(const std::string& key) {
  static const std::set<std::string> rates = {
      "sk.delta", "sk.kerr", "sk.eps2", "sk.lambda", "sk.eps4_re", "sk.eps4_im",
      "sk.eps2_prime_re", "sk.eps2_prime_im", "dissipation.kappa1",
      "dissipation.kappa_phi", "dissipation.sigma_delta", "lifetime.drive_re",
      "lifetime.drive_im", "cat_rabi.eps_x_re", "cat_rabi.eps_x_im",
      "readout.g_bs_re", "readout.g_bs_im", "readout.kappa_r", "readout.kerr"};
  static const std::set<std::string> times = {
      "lifetime.t_max", "kerr_evolve.t_max", "cat_rabi.t_max", "readout.tau",
      "readout.T_X", "liouville.t_max"};
  if (rates.count(key)) return Kind::Rate;
  if (times.count(key)) return Kind::Time;
  if (key.rfind("circuit.", 0) == 0) return Kind::CircuitRate;
  return Kind::None;
}

struct Ctx {
  const Config& base;
  std::string task;
  std::string sweep_key;
  std::vector<double> sweep;
  bool kerr_units = true;
  int dim = 0;
  std::uint64_t seed = 0;
  int threads = 1;

  std::string col(const std::string& name, Kind k) const {
    switch (k) {
      case Kind::Rate: return name + (kerr_units ? "_over_K" : "_rad_per_s");
      case Kind::Time: return name + (kerr_units ? "_times_K" : "_s");
      case Kind::CircuitRate: return kerr_units ? name : name + "_rad_per_s";
      default: return name;
    }
  }
  std::string key_col(const std::string& key) const {
    return col(key.substr(key.find('.') + 1), kind_of(key));
  }
  Config point(std::size_t i) const {
    Config c = base;
    if (!sweep_key.empty()) c.set(sweep_key, sweep[i]);
    return c;
  }
  std::size_t size() const { return sweep.size(); }
};

// ------------------------------------------------------------ parameters

SKParams sk_of(const Config& c, bool kerr_units) {
  SKParams p;
  p.delta = c.num("sk.delta");
  p.kerr = c.num("sk.kerr");
  p.eps2 = c.num("sk.eps2");
  p.lambda = c.num("sk.lambda");
  p.eps4 = {c.num("sk.eps4_re"), c.num("sk.eps4_im")};
  p.eps2_prime = {c.num("sk.eps2_prime_re"), c.num("sk.eps2_prime_im")};
  if (kerr_units && p.kerr != 1.0)
    throw ConfigError("sk.kerr must be 1 in kerr units (set run.units: si)");
  validate(p);
  return p;
}

DissipationParams diss_of(const Config& c) {
  DissipationParams d;
  d.kappa1 = c.num("dissipation.kappa1");
  d.n_th = c.num("dissipation.n_th");
  d.kappa_phi = c.num("dissipation.kappa_phi");
  d.sigma_delta = c.num("dissipation.sigma_delta");
  d.n_samples = static_cast<int>(c.integer("dissipation.n_samples"));
  validate(d);
  return d;
}

CircuitParams circuit_of(const Config& c) {
  CircuitParams p;
  p.omega_o = c.num("circuit.omega_o");
  p.g3 = c.num("circuit.g3");
  p.g4 = c.num("circuit.g4");
  p.g5 = c.num("circuit.g5");
  p.g6 = c.num("circuit.g6");
  p.Omega_d = c.num("circuit.Omega_d");
  p.omega_d = c.num("circuit.omega_d");
  p.omega_a = c.num("circuit.omega_a");
  p.drive_phase = c.num("circuit.drive_phase");
  return p;
}

Complex cnum(const Config& c, const std::string& prefix) {
  return {c.num(prefix + "_re"), c.num(prefix + "_im")};
}

int positive_int(const Config& c, const std::string& key, long min = 1) {
  const long v = c.integer(key);
  if (v < min)
    throw ConfigError("key '" + key + "' must be >= " + std::to_string(min));
  return static_cast<int>(v);
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) v[k] = n == 1 ? a : a + (b - a) * k / (n - 1);
  return v;
}

// ------------------------------------------------------------ scheduling

/// Runs jobs 0..n-1 on a shared queue; output order is job order. The first
/// failing job (lowest index) is rethrown after all workers stop.
std::vector<Rows> run_jobs(std::size_t n, int threads,
                           const std::function<Rows(std::size_t)>& job) {
  std::vector<Rows> out(n);
  std::vector<std::exception_ptr> err(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        out[i] = job(i);
      } catch (...) {
        err[i] = std::current_exception();
        failed = true;
      }
    }
  };
  const int nt = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : err)
    if (e) std::rethrow_exception(e);
  return out;
}

Table assemble(std::vector<std::string> cols, const std::vector<Rows>& parts) {
  Table t{std::move(cols), {}};
  for (const auto& p : parts)
    for (const auto& r : p) t.rows.push_back(r);
  return t;
}

// Prefix column naming the swept key, unless the task already reports it.
struct Prefix {
  bool on = false;
  std::string name;
};

Prefix prefix_for(const Ctx& ctx, const std::vector<std::string>& cols) {
  if (ctx.sweep_key.empty()) return {};
  const std::string name = ctx.key_col(ctx.sweep_key);
  if (std::find(cols.begin(), cols.end(), name) != cols.end()) return {};
  return {true, name};
}

std::vector<std::string> with_prefix(const Prefix& pre, std::vector<std::string> cols) {
  if (pre.on) cols.insert(cols.begin(), pre.name);
  return cols;
}

Row row_with(const Prefix& pre, const Ctx& ctx, std::size_t i, Row r) {
  if (pre.on) r.insert(r.begin(), ctx.sweep[i]);
  return r;
}

// ------------------------------------------------------------ truncation

/// Re-diagonalizes at twice the cutoff and compares the top `pairs` pairs.
/// Returns the largest drift relative to max(K, |E|).
double truncation_drift(const SKParams& p, int dim, int pairs) {
  const SpectrumResult a = diagonalize(p, HilbertSpace(dim));
  const SpectrumResult b = diagonalize(p, HilbertSpace(2 * dim));
  const int n = std::min<int>(pairs, static_cast<int>(a.pairs.size()));
  double drift = 0.0;
  for (int k = 0; k < n; ++k) {
    for (const auto& [ea, eb] : {std::pair{a.pairs[k].e_plus, b.pairs[k].e_plus},
                                 std::pair{a.pairs[k].e_minus, b.pairs[k].e_minus}})
      drift = std::max(drift, std::abs(ea - eb) / std::max(p.kerr, std::abs(ea)));
  }
  return drift;
}

constexpr double kTruncationTolerance = 1e-6;

class TruncationAudit {
 public:
  TruncationAudit(bool on, int dim) : on_(on), dim_(dim) {}
  void check(const SKParams& p, int pairs) {
    if (!on_) return;
    const double d = truncation_drift(p, dim_, pairs);
    {
      std::lock_guard<std::mutex> lock(m_);
      worst_ = std::max(worst_, d);
      used_ = true;
    }
    if (d > kTruncationTolerance)
      throw TruncationError("levels drift by " + std::to_string(d) +
                            " between dim " + std::to_string(dim_) + " and " +
                            std::to_string(2 * dim_) + "; raise run.dim");
  }
  void report(RunInfo& info) const {
    if (!on_) info.notes.push_back({"truncation_check", "off"});
    else if (used_)
      info.notes.push_back({"truncation_check",
                            "max level drift " + format_double(worst_) +
                                " at dim " + std::to_string(2 * dim_)});
  }

 private:
  bool on_;
  int dim_;
  bool used_ = false;
  double worst_ = 0.0;
  std::mutex m_;
};

// ------------------------------------------------------------ tasks

Table task_spectrum(const Ctx& ctx, TruncationAudit& audit) {
  const int n_pairs = positive_int(ctx.base, "spectrum.n_pairs");
  const std::vector<std::string> cols = {
      ctx.col("eps2", Kind::Rate), "pair_index", "parity",
      ctx.col("energy", Kind::Rate), ctx.col("delta_n", Kind::Rate)};
  const Prefix pre = prefix_for(ctx, cols);
  auto parts = run_jobs(ctx.size(), ctx.threads, [&](std::size_t i) {
    const SKParams p = sk_of(ctx.point(i), ctx.kerr_units);
    audit.check(p, n_pairs);
    const SpectrumResult r = diagonalize(p, HilbertSpace(ctx.dim));
    const int n = std::min<int>(n_pairs, static_cast<int>(r.pairs.size()));
    Rows rows;
    for (int k = 0; k < n; ++k) {
      const LevelPair& lp = r.pairs[k];
      rows.push_back(row_with(pre, ctx, i, {p.eps2, long(k), 1L, lp.e_plus, lp.delta}));
      rows.push_back(row_with(pre, ctx, i, {p.eps2, long(k), -1L, lp.e_minus, lp.delta}));
    }
    return rows;
  });
  return assemble(with_prefix(pre, cols), parts);
}

Table task_kissing(const Ctx& ctx, TruncationAudit& audit) {
  if (ctx.sweep_key != "sk.eps2")
    throw ConfigError("kissing needs sweep.parameter: sk.eps2");
  if (ctx.size() < 8) throw ConfigError("kissing needs sweep.count >= 8");
  const int n_pairs = positive_int(ctx.base, "kissing.n_pairs");
  const SKParams templ = sk_of(ctx.base, ctx.kerr_units);
  SKParams top = templ;
  top.eps2 = *std::max_element(ctx.sweep.begin(), ctx.sweep.end());
  audit.check(top, n_pairs + 1);
  const auto kp = kissing_points(ctx.sweep, templ, n_pairs, HilbertSpace(ctx.dim));
  Table t{{"pair_index", ctx.col("eps2", Kind::Rate)}, {}};
  for (const auto& k : kp) t.rows.push_back({long(k.n), k.eps2_over_K * templ.kerr});
  return t;
}

Table task_bohr(const Ctx& ctx) {
  const std::vector<std::string> cols = {
      ctx.col("eps2", Kind::Rate), ctx.col("delta", Kind::Rate), "bohr_count",
      "lemniscate_area", "lemniscate_area_exact"};
  const Prefix pre = prefix_for(ctx, cols);
  const double nan = std::nan("");
  auto parts = run_jobs(ctx.size(), ctx.threads, [&](std::size_t i) {
    const SKParams p = sk_of(ctx.point(i), ctx.kerr_units);
    double area = nan, exact = nan;
    try {
      area = lemniscate_area(p);
      exact = lemniscate_area_exact(p);
    } catch (const NoWellError&) {
      // Below threshold there is no loop; the count is still reported.
    }
    return Rows{row_with(pre, ctx, i, {p.eps2, p.delta, bohr_count(p), area, exact})};
  });
  return assemble(with_prefix(pre, cols), parts);
}

Table task_lifetime(const Ctx& ctx, TruncationAudit& audit) {
  std::vector<double> nths = ctx.base.list("lifetime.n_th_values");
  if (nths.empty()) nths.push_back(ctx.base.num("dissipation.n_th"));
  const double t_max = ctx.base.num("lifetime.t_max");
  if (!(t_max > 0.0)) throw ConfigError("lifetime.t_max must be > 0");
  LifetimeOptions opt;
  opt.grid_points = positive_int(ctx.base, "lifetime.grid_points", 16);
  opt.drive = cnum(ctx.base, "lifetime.drive");
  const std::vector<std::string> cols = {
      ctx.col("eps2", Kind::Rate), "n_th", ctx.col("T_X", Kind::Time), "amplitude",
      "offset", "fit_residual"};
  const Prefix pre = prefix_for(ctx, cols);
  const std::size_t m = nths.size();
  auto parts = run_jobs(ctx.size() * m, ctx.threads, [&](std::size_t j) {
    const std::size_t i = j / m;
    const Config c = ctx.point(i);
    const SKParams p = sk_of(c, ctx.kerr_units);
    audit.check(p, 3);
    DissipationParams d = diss_of(c);
    d.n_th = nths[j % m];
    d.seed = derive_seed(ctx.seed, j);
    validate(d);
    const Trajectory tr = coherent_lifetime(p, d, HilbertSpace(ctx.dim), t_max, opt);
    const ExpFit& f = *tr.fit;
    return Rows{row_with(pre, ctx, i,
                         {p.eps2, d.n_th, f.T, f.amplitude, f.offset, f.residual})};
  });
  return assemble(with_prefix(pre, cols), parts);
}

Table task_leff(const Ctx& ctx, TruncationAudit& audit) {
  const long gamma_cfg = ctx.base.integer("leff.gamma");
  if (gamma_cfg < 0) throw ConfigError("leff.gamma must be >= 0");
  const bool full = ctx.base.flag("leff.compare_full");
  EffLindbladOptions opt;
  opt.include_hamiltonian = !ctx.base.flag("leff.ablation");
  std::vector<std::string> cols = {ctx.col("eps2", Kind::Rate), "gamma",
                                   ctx.col("T_X_gamma", Kind::Time)};
  if (full) cols.push_back(ctx.col("T_X_full", Kind::Time));
  const Prefix pre = prefix_for(ctx, cols);
  auto parts = run_jobs(ctx.size(), ctx.threads, [&](std::size_t i) {
    const Config c = ctx.point(i);
    const SKParams p = sk_of(c, ctx.kerr_units);
    audit.check(p, 3);
    DissipationParams d = diss_of(c);
    const HilbertSpace space(ctx.dim);
    const int gamma = gamma_cfg > 0
                          ? static_cast<int>(gamma_cfg)
                          : choose_gamma(diagonalize(p, space), d.kappa1);
    const EffLindbladResult r = eff_lindbladian(p, d, gamma, space, opt);
    Row row = {p.eps2, long(gamma), r.T_X_gamma};
    if (full) row.push_back(lindbladian_spectrum_full(p, d, space).T_X);
    return Rows{row_with(pre, ctx, i, row)};
  });
  return assemble(with_prefix(pre, cols), parts);
}

Table task_lindblad_spectrum(const Ctx& ctx, TruncationAudit& audit) {
  const bool all = ctx.base.flag("lindblad_spectrum.eigenvalues");
  std::vector<std::string> cols;
  if (all)
    cols = {ctx.col("eps2", Kind::Rate), "index", ctx.col("re", Kind::Rate),
            ctx.col("im", Kind::Rate)};
  else
    cols = {ctx.col("eps2", Kind::Rate), ctx.col("zero_mode_re", Kind::Rate),
            ctx.col("slowest_re", Kind::Rate), ctx.col("slowest_im", Kind::Rate),
            ctx.col("slowest_coherence_re", Kind::Rate),
            ctx.col("slowest_coherence_im", Kind::Rate), ctx.col("T_X", Kind::Time)};
  const Prefix pre = prefix_for(ctx, cols);
  auto parts = run_jobs(ctx.size(), ctx.threads, [&](std::size_t i) {
    const Config c = ctx.point(i);
    const SKParams p = sk_of(c, ctx.kerr_units);
    audit.check(p, 3);
    const LindbladSpectrum s = lindbladian_spectrum_full(p, diss_of(c), HilbertSpace(ctx.dim));
    Rows rows;
    if (all) {
      std::vector<Complex> ev = s.eigenvalues;
      std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() > b.real() : a.imag() < b.imag();
      });
      for (std::size_t k = 0; k < ev.size(); ++k)
        rows.push_back(row_with(pre, ctx, i, {p.eps2, long(k), ev[k].real(), ev[k].imag()}));
    } else {
      rows.push_back(row_with(pre, ctx, i,
                              {p.eps2, s.zero_mode.real(), s.slowest.real(),
                               s.slowest.imag(), s.slowest_coherence.real(),
                               s.slowest_coherence.imag(), s.T_X}));
    }
    return rows;
  });
  return assemble(with_prefix(pre, cols), parts);
}

DensityMatrix wigner_state(const Config& c, HilbertSpace space, bool kerr_units,
                           TruncationAudit& audit) {
  const std::string& st = c.str("wigner.state");
  const Complex alpha = cnum(c, "wigner.alpha");
  if (st == "coherent") return DensityMatrix(coherent(space, alpha));
  if (st == "cat_even") return DensityMatrix(cat(space, alpha, CatParity::Even));
  if (st == "cat_odd") return DensityMatrix(cat(space, alpha, CatParity::Odd));
  if (st == "fock") {
    const long n = c.integer("wigner.fock_n");
    if (n < 0 || n >= space.dim()) throw ConfigError("wigner.fock_n outside the Fock space");
    return DensityMatrix(fock_state(space, static_cast<int>(n)));
  }
  if (st == "thermal") return DensityMatrix::thermal(space, c.num("wigner.n_th"));
  if (st == "sk_plus_x") {
    const SKParams p = sk_of(c, kerr_units);
    audit.check(p, 1);
    const SpectrumResult r = diagonalize(p, space);
    const CVector v = (r.ket(1, 0).amplitudes() + r.ket(-1, 0).amplitudes()) /
                      std::numbers::sqrt2;
    return DensityMatrix(Ket(space, v));
  }
  throw ConfigError("wigner.state must be coherent, cat_even, cat_odd, fock, "
                    "thermal or sk_plus_x");
}

Table task_wigner(const Ctx& ctx, TruncationAudit& audit) {
  const std::vector<std::string> cols = {"x", "p", "W"};
  const Prefix pre = prefix_for(ctx, cols);
  auto parts = run_jobs(ctx.size(), ctx.threads, [&](std::size_t i) {
    const Config c = ctx.point(i);
    const double extent = c.num("wigner.extent");
    if (!(extent > 0.0)) throw ConfigError("wigner.extent must be > 0");
    const PhaseGrid grid = PhaseGrid::square(extent, positive_int(c, "wigner.points", 2));
    const WignerGrid w = wigner_of(
        wigner_state(c, HilbertSpace(ctx.dim), ctx.kerr_units, audit), grid);
    Rows rows;
    for (std::size_t a = 0; a < grid.x.size(); ++a)
      for (std::size_t b = 0; b < grid.p.size(); ++b)
        rows.push_back(row_with(pre, ctx, i, {grid.x[a], grid.p[b], w.values(a, b)}));
    return rows;
  });
  return assemble(with_prefix(pre, cols), parts);
}

Table task_kerr_evolve(const Ctx& ctx) {
  const std::vector<std::string> cols = {ctx.col("t", Kind::Time), "parity", "n",
                                         "return_probability", "a_re", "a_im"};
  const Prefix pre = prefix_for(ctx, cols);
  auto parts = run_jobs(ctx.size(), ctx.threads, [&](std::size_t i) {
    const Config c = ctx.point(i);
    const SKParams p = sk_of(c, ctx.kerr_units);
    DissipationParams d = diss_of(c);
    d.seed = derive_seed(ctx.seed, i);
    const auto t = linspace(0.0, c.num("kerr_evolve.t_max"),
                            positive_int(c, "kerr_evolve.points", 2));
    const Trajectory tr = free_kerr_evolve(cnum(c, "kerr_evolve.alpha"), p, d, t,
                                           HilbertSpace(ctx.dim));
    const auto& par = tr.series("parity");
    const auto& n = tr.series("n");
    const auto& ret = tr.series("return");
    const auto& are = tr.series("a");
    const auto& aim = tr.series("a_im");
    Rows rows;
    for (std::size_t k = 0; k < t.size(); ++k)
      rows.push_back(row_with(pre, ctx, i, {t[k], par[k], n[k], ret[k], are[k], aim[k]}));
    return rows;
  });
  return assemble(with_prefix(pre, cols), parts);
}

Table task_cat_rabi(const Ctx& ctx, TruncationAudit& audit) {
  const bool trace = ctx.base.flag("cat_rabi.trace");
  std::vector<std::string> cols;
  if (trace)
    cols = {ctx.col("eps2", Kind::Rate), ctx.col("t", Kind::Time), "parity"};
  else
    cols = {ctx.col("eps2", Kind::Rate), ctx.col("eps_x_re", Kind::Rate),
            ctx.col("eps_x_im", Kind::Rate), ctx.col("omega", Kind::Rate),
            ctx.col("T_YZ", Kind::Time), "amplitude", "fit_residual",
            ctx.col("omega_predicted", Kind::Rate),
            ctx.col("T_YZ_predicted", Kind::Time)};
  const Prefix pre = prefix_for(ctx, cols);
  auto parts = run_jobs(ctx.size(), ctx.threads, [&](std::size_t i) {
    const Config c = ctx.point(i);
    const SKParams p = sk_of(c, ctx.kerr_units);
    audit.check(p, 2);
    DissipationParams d = diss_of(c);
    d.seed = derive_seed(ctx.seed, i);
    const Complex eps_x = cnum(c, "cat_rabi.eps_x");
    const auto t = linspace(0.0, c.num("cat_rabi.t_max"),
                            positive_int(c, "cat_rabi.points", 16));
    const RabiTrace rt = cat_rabi_trace(p, d, eps_x, t, HilbertSpace(ctx.dim));
    Rows rows;
    if (trace) {
      const auto& par = rt.trajectory.series("parity");
      for (std::size_t k = 0; k < t.size(); ++k)
        rows.push_back(row_with(pre, ctx, i, {p.eps2, t[k], par[k]}));
      return rows;
    }
    const double a2 = well_alpha2(p);
    const double pred_omega = std::abs(rabi_frequency(eps_x, std::sqrt(a2)));
    const double pred_tyz = d.kappa1 > 0.0
                                ? 1.0 / (2.0 * d.kappa1 * nbar_ys(a2))
                                : std::numeric_limits<double>::infinity();
    rows.push_back(row_with(pre, ctx, i,
                            {p.eps2, eps_x.real(), eps_x.imag(), rt.omega, rt.T_YZ,
                             rt.fit.amplitude, rt.fit.residual, pred_omega, pred_tyz}));
    return rows;
  });
  return assemble(with_prefix(pre, cols), parts);
}

Table task_readout(const Ctx& ctx, RunInfo& info) {
  const std::vector<std::string> cols = {
      ctx.col("tau", Kind::Time), "snr", "fidelity", "fidelity_gaussian", "qndness",
      ctx.col("decay_time", Kind::Time), "weak_readout_ratio"};
  const Prefix pre = prefix_for(ctx, cols);
  std::vector<double> ratios(ctx.size());
  auto parts = run_jobs(ctx.size(), ctx.threads, [&](std::size_t i) {
    const Config c = ctx.point(i);
    ReadoutParams ro;
    ro.g_bs = cnum(c, "readout.g_bs");
    ro.kappa_r = c.num("readout.kappa_r");
    ro.eta = c.num("readout.eta");
    ro.tau = c.num("readout.tau");
    validate(ro);
    const Complex alpha = cnum(c, "readout.alpha");
    const double ratio = weak_readout_ratio(ro, c.num("readout.kerr"), alpha);
    ratios[i] = ratio;
    const ReadoutSimulation s = readout_record_sim(
        c.num("readout.T_X"), ro, alpha, positive_int(c, "readout.n_shots"),
        positive_int(c, "readout.n_repeats"), derive_seed(ctx.seed, i));
    // 1 - P(-|+) - P(+|-) for Gaussian outcomes without well flips.
    const double gauss = std::erf(std::sqrt(s.snr / 2.0) / std::numbers::sqrt2);
    return Rows{row_with(pre, ctx, i,
                         {ro.tau, s.snr, s.fidelity, gauss, s.qndness,
                          s.decay_time.value_or(std::nan("")), ratio})};
  });
  const double worst = *std::max_element(ratios.begin(), ratios.end());
  if (worst > kWeakReadoutWarnRatio)
    info.notes.push_back({"warning", "readout drive is not weak against the Kerr "
                                     "gap (ratio " + format_double(worst) + ")"});
  return assemble(with_prefix(pre, cols), parts);
}

Table task_liouville(const Ctx& ctx) {
  const std::vector<std::string> cols = {ctx.col("t", Kind::Time), "particle", "x",
                                         "p", ctx.col("energy", Kind::Rate),
                                         "anisotropy"};
  const Prefix pre = prefix_for(ctx, cols);
  auto parts = run_jobs(ctx.size(), ctx.threads, [&](std::size_t i) {
    const Config c = ctx.point(i);
    const SKParams p = sk_of(c, ctx.kerr_units);
    const ClassicalEnsemble start = gaussian_ensemble(
        p, c.num("liouville.x0"), c.num("liouville.p0"), c.num("liouville.spread"),
        positive_int(c, "liouville.particles"), derive_seed(ctx.seed, i));
    const auto t = linspace(0.0, c.num("liouville.t_max"),
                            positive_int(c, "liouville.points"));
    const auto frames = liouville_evolve(start, p, t);
    Rows rows;
    for (std::size_t k = 0; k < t.size(); ++k) {
      const double an = ensemble_anisotropy(frames[k]);
      for (std::size_t j = 0; j < frames[k].size(); ++j)
        rows.push_back(row_with(pre, ctx, i,
                                {t[k], long(j), frames[k].x[j], frames[k].p[j],
                                 frames[k].energy[j], an}));
    }
    return rows;
  });
  return assemble(with_prefix(pre, cols), parts);
}

Table task_metapotential(const Ctx& ctx) {
  const std::vector<std::string> cols = {ctx.col("eps2", Kind::Rate), "x", "p",
                                         ctx.col("V", Kind::Rate)};
  const Prefix pre = prefix_for(ctx, cols);
  const std::string& v = ctx.base.str("metapotential.variant");
  if (v != "quantum" && v != "classical")
    throw ConfigError("metapotential.variant must be 'quantum' or 'classical'");
  const auto variant =
      v == "quantum" ? MetapotentialVariant::Quantum : MetapotentialVariant::Classical;
  auto parts = run_jobs(ctx.size(), ctx.threads, [&](std::size_t i) {
    const Config c = ctx.point(i);
    const SKParams p = sk_of(c, ctx.kerr_units);
    const PhaseGrid grid = PhaseGrid::square(c.num("metapotential.extent"),
                                             positive_int(c, "metapotential.points", 2));
    const MetapotentialSurface s = metapotential(p, grid, variant);
    Rows rows;
    for (std::size_t a = 0; a < grid.x.size(); ++a)
      for (std::size_t b = 0; b < grid.p.size(); ++b)
        rows.push_back(row_with(pre, ctx, i, {p.eps2, grid.x[a], grid.p[b], s.values(a, b)}));
    return rows;
  });
  return assemble(with_prefix(pre, cols), parts);
}

Table task_effcoeffs(const Ctx& ctx, RunInfo& info) {
  const int order = positive_int(ctx.base, "circuit.order");
  const bool floquet = ctx.base.flag("circuit.floquet");
  const int fdim = positive_int(ctx.base, "circuit.floquet_dim", 4);
  const Kind r = Kind::CircuitRate;
  std::vector<std::string> cols = {
      "order", "Pi_abs", ctx.col("Delta", r), ctx.col("K", r),
      ctx.col("eps2_abs", r), "eps2_arg", ctx.col("eps2_prime_re", r),
      ctx.col("eps2_prime_im", r), ctx.col("lambda", r), ctx.col("eps4_re", r),
      ctx.col("eps4_im", r)};
  if (floquet)
    for (const char* n : {"floquet_gap_1", "floquet_gap_2", "heff_gap_1", "heff_gap_2"})
      cols.push_back(ctx.col(n, r));
  if (floquet) cols.push_back("max_rel_error");
  const Prefix pre = prefix_for(ctx, cols);
  std::vector<std::vector<std::string>> warnings(ctx.size());
  auto parts = run_jobs(ctx.size(), ctx.threads, [&](std::size_t i) {
    const CircuitParams cp = circuit_of(ctx.point(i));
    warnings[i] = validate(cp);
    const EffectiveCoefficients e = effective_coefficients(cp, order);
    Row row = {long(order), std::abs(e.Pi), e.total_Delta, e.total_K,
               std::abs(e.total_eps2), std::arg(e.total_eps2), e.eps2_prime.real(),
               e.eps2_prime.imag(), e.lambda4, e.eps4.real(), e.eps4.imag()};
    if (floquet) {
      const FloquetComparison fc = compare_floquet_effective(
          cp, order, HilbertSpace(fdim), HilbertSpace(std::max(30, 2 * fdim)), 3);
      row.insert(row.end(), {fc.floquet_gaps[0], fc.floquet_gaps[1], fc.heff_gaps[0],
                             fc.heff_gaps[1], fc.max_rel_error});
    }
    return Rows{row_with(pre, ctx, i, row)};
  });
  std::set<std::string> seen;
  for (const auto& w : warnings)
    for (const auto& s : w)
      if (seen.insert(s).second) info.notes.push_back({"warning", s});
  if (floquet) info.dim = fdim, info.dim_rule = "circuit.floquet_dim";
  return assemble(with_prefix(pre, cols), parts);
}

// ------------------------------------------------------------ dimensions

bool uses_space(const std::string& task) {
  return task != "bohr" && task != "effcoeffs" && task != "liouville" &&
         task != "metapotential" && task != "readout-sim";
}

bool dissipative(const std::string& task) {
  return task == "lifetime" || task == "leff" || task == "lindblad-spectrum" ||
         task == "cat-rabi";
}

double largest_alpha2(const Ctx& ctx) {
  double a2 = 0.0;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const Config c = ctx.point(i);
    if (ctx.task == "wigner") {
      const std::string& st = c.str("wigner.state");
      if (st == "fock") a2 = std::max(a2, double(c.integer("wigner.fock_n")));
      else if (st == "thermal") a2 = std::max(a2, c.num("wigner.n_th"));
      else if (st == "sk_plus_x") a2 = std::max(a2, well_alpha2(sk_of(c, ctx.kerr_units)));
      else a2 = std::max(a2, std::norm(cnum(c, "wigner.alpha")));
    } else if (ctx.task == "kerr-evolve") {
      a2 = std::max(a2, std::norm(cnum(c, "kerr_evolve.alpha")));
    } else {
      a2 = std::max(a2, well_alpha2(sk_of(c, ctx.kerr_units)));
    }
  }
  return a2;
}

void resolve_dim(Ctx& ctx, RunInfo& info) {
  if (!uses_space(ctx.task)) return;
  const std::string& d = ctx.base.str("run.dim");
  if (d != "auto") {
    char* end = nullptr;
    const long v = std::strtol(d.c_str(), &end, 10);
    if (end == d.c_str() || *end != '\0' || v < 2)
      throw ConfigError("run.dim must be 'auto' or an integer >= 2");
    ctx.dim = static_cast<int>(v);
    info.dim_rule = "explicit";
  } else {
    const double a2 = largest_alpha2(ctx);
    if (dissipative(ctx.task)) {
      ctx.dim = static_cast<int>(std::ceil(a2 + 6.0 * std::sqrt(a2 + 1.0) + 10.0));
      info.dim_rule = "auto: ceil(a2 + 6 sqrt(a2 + 1) + 10), a2 = " + format_double(a2);
    } else {
      ctx.dim = recommended_dim(a2);
      info.dim_rule = "auto: ceil(a2 + 12 sqrt(a2 + 1) + 15), a2 = " + format_double(a2);
    }
  }
  info.dim = ctx.dim;
}

}  // namespace

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names = {
      "effcoeffs", "spectrum", "kissing", "bohr", "lifetime", "leff",
      "lindblad-spectrum", "wigner", "kerr-evolve", "cat-rabi", "readout-sim",
      "liouville", "metapotential"};
  return names;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 of (seed, index)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Table run_task(const std::string& task, const Config& cfg, RunInfo& info) {
  const auto& names = task_names();
  if (std::find(names.begin(), names.end(), task) == names.end())
    throw ConfigError("unknown task '" + task + "'");
  const std::string& units = cfg.str("run.units");
  if (units != "kerr" && units != "si")
    throw ConfigError("run.units must be 'kerr' or 'si'");
  const std::string& fmt = cfg.str("output.format");
  if (fmt != "csv" && fmt != "json")
    throw ConfigError("output.format must be 'csv' or 'json'");

  Ctx ctx{cfg, task, cfg.str("sweep.parameter"), sweep_values(cfg)};
  ctx.kerr_units = units == "kerr";
  ctx.seed = info.seed;
  ctx.threads = std::max(1, info.threads);
  info.task = task;
  info.units = units;
  resolve_dim(ctx, info);

  TruncationAudit audit(cfg.flag("run.truncation_check"), ctx.dim);
  Table t;
  if (task == "effcoeffs") t = task_effcoeffs(ctx, info);
  else if (task == "spectrum") t = task_spectrum(ctx, audit);
  else if (task == "kissing") t = task_kissing(ctx, audit);
  else if (task == "bohr") t = task_bohr(ctx);
  else if (task == "lifetime") t = task_lifetime(ctx, audit);
  else if (task == "leff") t = task_leff(ctx, audit);
  else if (task == "lindblad-spectrum") t = task_lindblad_spectrum(ctx, audit);
  else if (task == "wigner") t = task_wigner(ctx, audit);
  else if (task == "kerr-evolve") t = task_kerr_evolve(ctx);
  else if (task == "cat-rabi") t = task_cat_rabi(ctx, audit);
  else if (task == "readout-sim") t = task_readout(ctx, info);
  else if (task == "liouville") t = task_liouville(ctx);
  else t = task_metapotential(ctx);
  audit.report(info);
  return t;
}

}  // namespace kerrlab::cli
