#include "kerrlab/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "kerrlab/errors.hpp"

namespace kerrlab {
namespace {

void require_pure_kerr(const SKParams& p) {
  validate(p);
  if (p.delta != 0.0 || p.eps2 != 0.0 || p.lambda != 0.0 || p.eps4 != 0.0 ||
      p.eps2_prime != 0.0)
    throw ParameterError("free Kerr evolution needs Delta = eps2 = 0 and no "
                         "higher-order terms");
}

bool dissipation_off(const DissipationParams& d) {
  return d.kappa1 == 0.0 && d.kappa_phi == 0.0;
}

// x - 4(1 - e^{-x/2}) + (1 - e^{-x}). The leading terms cancel to O(x^3),
// so small arguments use the series sum_k (-x)^k (4 2^-k - 1)/k!, k >= 3.
double snr_bracket(double x) {
  if (x < 0.5) {
    double sum = 0.0, term = 1.0;  // term = (-x)^k / k!
    for (int k = 1; k <= 20; ++k) {
      term *= -x / k;
      if (k >= 3) sum += term * (4.0 * std::ldexp(1.0, -k) - 1.0);
    }
    return sum;
  }
  return x + 4.0 * std::expm1(-0.5 * x) - std::expm1(-x);
}

}  // namespace

double nbar_ys(double alpha2) {
  if (alpha2 < 0.0) throw ParameterError("|alpha|^2 must be >= 0");
  // (1/2)|a|^2 (r^2 + r^-2) = |a|^2 (1 + e^{-4|a|^2}) / (1 - e^{-4|a|^2})
  //                         = |a|^2 / tanh(2|a|^2)
  if (alpha2 < 1e-8) return 0.5 + 2.0 * alpha2 * alpha2 / 3.0;
  return alpha2 / std::tanh(2.0 * alpha2);
}

double meridian_nbar(double alpha2) {
  if (alpha2 <= 0.0) throw ParameterError("|alpha|^2 must be > 0");
  const double e = std::exp(-4.0 * alpha2);
  return alpha2 * (1.0 + e) / (1.0 - e);
}

double rabi_frequency(Complex eps_x, Complex alpha) {
  const double phase = std::abs(alpha) > 0.0 ? std::arg(alpha) : 0.0;
  const double amp = std::sqrt(nbar_ys(std::norm(alpha)));
  return (4.0 * eps_x * std::polar(amp, -phase)).real();
}

double rabi_speed_limit(const SKParams& params, double kappa2) {
  validate(params);
  if (kappa2 < 0.0) throw ParameterError("kappa2 must be >= 0");
  const double a = std::sqrt(well_alpha2(params));
  return 16.0 * a * a * a *
         std::sqrt(params.kerr * params.kerr + 0.25 * kappa2 * kappa2);
}

double kerr_gate_time(double kerr) {
  if (!(kerr > 0.0)) throw ParameterError("K must be > 0");
  return std::numbers::pi / (2.0 * kerr);
}

Trajectory free_kerr_evolve(Complex alpha, const SKParams& params,
                            const DissipationParams& diss,
                            const std::vector<double>& t_grid,
                            HilbertSpace space) {
  require_pure_kerr(params);
  validate(diss);
  const Ket psi0 = coherent(space, alpha);
  const Operator a = annihilation(space);
  const Operator back(space, psi0.amplitudes() * psi0.amplitudes().adjoint());
  const std::vector<Observable> obs = {{"parity", parity(space)},
                                       {"n", number(space)},
                                       {"return", back},
                                       {"a", a}};
  const Operator H = build_hamiltonian(params, space);

  if (!dissipation_off(diss)) {
    EvolveOptions opt;
    opt.integrator = Integrator::Exact;
    opt.store_states = true;
    return evolve(DensityMatrix(psi0), H, diss, t_grid, obs, opt);
  }

  // H is diagonal: psi_n(t) = e^{-i H_nn t} psi_n(0).
  for (std::size_t k = 0; k < t_grid.size(); ++k)
    if (t_grid[k] < 0.0 || (k > 0 && t_grid[k] < t_grid[k - 1]))
      throw ParameterError("time grid must be non-negative and non-decreasing");
  Trajectory tr;
  tr.min_eigenvalue = 0.0;
  for (const auto& o : obs) {
    tr.observables[o.name];
    if (!o.op.is_hermitian()) tr.observables[o.name + "_im"];
  }
  const int d = space.dim();
  for (double t : t_grid) {
    CVector v(d);
    for (int n = 0; n < d; ++n)
      v(n) = std::exp(Complex(0.0, -H(n, n).real() * t)) * psi0[n];
    const CMatrix rho = v * v.adjoint();
    tr.times.push_back(t);
    tr.states.push_back(rho);
    tr.observables["trace"].push_back(rho.trace().real());
    tr.observables["purity"].push_back(1.0);
    for (const auto& o : obs) {
      const Complex e = v.dot(o.op.matrix() * v);
      tr.observables[o.name].push_back(e.real());
      if (!o.op.is_hermitian()) tr.observables[o.name + "_im"].push_back(e.imag());
    }
  }
  return tr;
}

RabiTrace cat_rabi_trace(const SKParams& params, const DissipationParams& diss,
                         Complex eps_x, const std::vector<double>& t_grid,
                         HilbertSpace space) {
  validate(diss);
  if (eps_x == 0.0)
    throw FitError("no Rabi drive: there is no oscillation to fit");
  const SpectrumResult spec = diagonalize(params, space);
  const CVector ys = (spec.ket(+1, 0).amplitudes() +
                      Complex(0.0, 1.0) * spec.ket(-1, 0).amplitudes()) /
                     std::sqrt(2.0);
  const DensityMatrix rho0(Ket(space, ys));

  const int d = space.dim();
  CMatrix vdrive = CMatrix::Zero(d, d);
  for (int n = 0; n + 1 < d; ++n) {
    vdrive(n + 1, n) = eps_x * std::sqrt(n + 1.0);
    vdrive(n, n + 1) = std::conj(eps_x) * std::sqrt(n + 1.0);
  }
  const auto deltas = diss.sigma_delta > 0.0
                          ? stratified_normal(params.delta, diss.sigma_delta,
                                              diss.n_samples, diss.seed)
                          : std::vector<double>{params.delta};
  RabiTrace out;
  std::vector<double> mean;
  for (double dl : deltas) {
    SKParams p = params;
    p.delta = dl;
    const Operator H(space, build_hamiltonian(p, space).matrix() + vdrive);
    Trajectory tr =
        evolve(rho0, H, diss, t_grid, {{"parity", parity(space)}});
    const auto& par = tr.series("parity");
    if (mean.empty()) {
      mean.assign(par.size(), 0.0);
      out.trajectory = std::move(tr);
    } else {
      out.trajectory.max_trace_drift =
          std::max(out.trajectory.max_trace_drift, tr.max_trace_drift);
      out.trajectory.min_eigenvalue =
          std::min(out.trajectory.min_eigenvalue, tr.min_eigenvalue);
    }
    for (std::size_t k = 0; k < par.size(); ++k)
      mean[k] += par[k] / static_cast<double>(deltas.size());
  }
  out.trajectory.observables["parity"] = mean;
  out.fit = fit_damped_cosine(out.trajectory.times, mean);
  out.T_YZ = out.fit.T;
  out.omega = out.fit.omega;
  return out;
}

void validate(const ReadoutParams& ro) {
  if (!(ro.kappa_r > 0.0)) throw ParameterError("kappa_r must be > 0");
  if (!(ro.eta > 0.0 && ro.eta <= 1.0))
    throw ParameterError("eta must lie in (0, 1]");
  if (!(ro.tau >= 0.0)) throw ParameterError("tau must be >= 0");
}

double readout_snr(const ReadoutParams& ro, Complex alpha) {
  validate(ro);
  const double g = std::abs(ro.g_bs * alpha) / ro.kappa_r;
  return 32.0 * ro.eta * g * g * snr_bracket(ro.kappa_r * ro.tau);
}

double weak_readout_ratio(const ReadoutParams& ro, double kerr, Complex alpha) {
  validate(ro);
  if (!(kerr > 0.0) || std::abs(alpha) == 0.0)
    throw ParameterError("need K > 0 and alpha != 0");
  return std::norm(ro.g_bs) / (2.0 * kerr * std::abs(alpha) * ro.kappa_r);
}

ReadoutSimulation readout_record_sim(double T_X, const ReadoutParams& ro,
                                     Complex alpha, int n_shots, int n_repeats,
                                     std::uint64_t seed) {
  if (!(T_X > 0.0)) throw ParameterError("T_X must be > 0");
  if (n_shots < 1 || n_repeats < 1)
    throw ParameterError("need at least one shot and one repeat");
  ReadoutSimulation sim;
  sim.snr = readout_snr(ro, alpha);
  const double i0 = 1.0;
  const double sigma = sim.snr > 0.0 ? i0 * std::sqrt(2.0 / sim.snr)
                                     : std::numeric_limits<double>::infinity();
  const double p_flip = -0.5 * std::expm1(-ro.tau / T_X);

  auto& rec = sim.record;
  rec.n_repeats = n_repeats;
  rec.threshold = 0.0;
  rec.outcomes.reserve(static_cast<std::size_t>(n_shots) * n_repeats);
  rec.truth.reserve(rec.outcomes.capacity());
  for (int s = 0; s < n_shots; ++s) {
    std::seed_seq sq{static_cast<std::uint32_t>(seed),
                     static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(s)};
    std::mt19937_64 rng(sq);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> g(0.0, 1.0);
    int well = u(rng) < 0.5 ? 1 : -1;
    for (int k = 0; k < n_repeats; ++k) {
      if (k > 0 && u(rng) < p_flip) well = -well;
      double I, Q;
      if (std::isfinite(sigma)) {
        I = well * i0 + sigma * g(rng);
        Q = sigma * g(rng);
      } else {  // no information: a fair coin
        I = u(rng) - 0.5;
        Q = 0.0;
      }
      rec.outcomes.push_back({I, Q, I - rec.threshold >= 0.0 ? 1 : -1});
      rec.truth.push_back(well);
    }
  }

  // Fidelity from the first measurement of each shot.
  long wrong_p = 0, wrong_m = 0, n_p = 0, n_m = 0;
  for (int s = 0; s < n_shots; ++s) {
    const std::size_t i = static_cast<std::size_t>(s) * n_repeats;
    if (rec.truth[i] > 0) {
      ++n_p;
      wrong_p += rec.outcomes[i].label < 0;
    } else {
      ++n_m;
      wrong_m += rec.outcomes[i].label > 0;
    }
  }
  sim.fidelity = 1.0 - (n_m ? double(wrong_m) / n_m : 0.0) -
                 (n_p ? double(wrong_p) / n_p : 0.0);

  // QNDness from successive label pairs.
  long pp = 0, p_tot = 0, mm = 0, m_tot = 0;
  std::vector<double> cond(n_repeats, 0.0);
  for (int s = 0; s < n_shots; ++s) {
    const std::size_t base = static_cast<std::size_t>(s) * n_repeats;
    const int first = rec.outcomes[base].label;
    for (int k = 0; k < n_repeats; ++k) {
      cond[k] += first * rec.outcomes[base + k].I / n_shots;
      if (k == 0) continue;
      const int a = rec.outcomes[base + k - 1].label;
      const int b = rec.outcomes[base + k].label;
      if (a > 0) {
        ++p_tot;
        pp += b > 0;
      } else {
        ++m_tot;
        mm += b < 0;
      }
    }
  }
  sim.qndness = 0.5 * ((p_tot ? double(pp) / p_tot : 0.0) +
                       (m_tot ? double(mm) / m_tot : 0.0));

  if (n_repeats >= 8) {
    std::vector<double> t(n_repeats);
    for (int k = 0; k < n_repeats; ++k) t[k] = k * ro.tau;
    try {
      sim.decay_time = fit_exponential(t, cond).T;
    } catch (const FitError&) {
    }
  }
  return sim;
}

double bloch_average_coherence(const std::array<double, 6>& T) {
  double sum = 0.0;
  for (double t : T) {
    if (!(t > 0.0)) throw ParameterError("decay times must be > 0");
    sum += 1.0 / t;
  }
  return sum / 6.0;
}

double fock_average_coherence(double T2R, double T1) {
  if (!(T2R > 0.0) || !(T1 > 0.0)) throw ParameterError("decay times must be > 0");
  return (4.0 / T2R + 1.0 / T1) / 6.0;
}

double error_correction_gain(double gamma_fock, double gamma_cat) {
  if (!(gamma_fock > 0.0) || !(gamma_cat > 0.0))
    throw ParameterError("rates must be > 0");
  return gamma_fock / gamma_cat;
}

}  // namespace kerrlab
