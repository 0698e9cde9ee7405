#include "kerrlab/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <boost/math/distributions/normal.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "kerrlab/errors.hpp"

namespace kerrlab {

void validate(const DissipationParams& d) {
  if (!(d.kappa1 >= 0.0)) throw ParameterError("kappa1 must be >= 0");
  if (!(d.n_th >= 0.0)) throw ParameterError("n_th must be >= 0");
  if (!(d.kappa_phi >= 0.0)) throw ParameterError("kappa_phi must be >= 0");
  if (!(d.sigma_delta >= 0.0)) throw ParameterError("sigma_delta must be >= 0");
  if (d.n_samples < 1) throw ParameterError("n_samples must be >= 1");
}

const std::vector<double>& Trajectory::series(const std::string& name) const {
  auto it = observables.find(name);
  if (it == observables.end())
    throw ParameterError("trajectory has no series named '" + name + "'");
  return it->second;
}

// ------------------------------------------------------------ generator

CMatrix lindbladian_apply(const CMatrix& rho, const CMatrix& H,
                          const DissipationParams& diss) {
  const int d = static_cast<int>(rho.rows());
  const Complex mi(0.0, -1.0);
  CMatrix out = mi * (H * rho - rho * H);
  const double down = diss.kappa1 * (1.0 + diss.n_th);
  const double up = diss.kappa1 * diss.n_th;
  const double phi = diss.kappa_phi;
  if (down == 0.0 && up == 0.0 && phi == 0.0) return out;
  for (int n = 0; n < d; ++n) {
    const double cn = n + 1 < d ? n + 1.0 : 0.0;  // (a a+)_nn when truncated
    for (int m = 0; m < d; ++m) {
      const double cm = m + 1 < d ? m + 1.0 : 0.0;
      Complex v = 0.0;
      if (m + 1 < d && n + 1 < d)
        v += down * std::sqrt((m + 1.0) * (n + 1.0)) * rho(m + 1, n + 1);
      if (m > 0 && n > 0) v += up * std::sqrt(double(m) * n) * rho(m - 1, n - 1);
      const double decay = 0.5 * down * (m + n) + 0.5 * up * (cm + cn) +
                           0.5 * phi * double(m - n) * double(m - n);
      out(m, n) += v - decay * rho(m, n);
    }
  }
  return out;
}

Operator lindbladian_apply(const DensityMatrix& rho, const Operator& H,
                           const DissipationParams& diss) {
  if (!(rho.space() == H.space()))
    throw ShapeError("density matrix and Hamiltonian dimensions differ");
  validate(diss);
  return Operator(rho.space(), lindbladian_apply(rho.matrix(), H.matrix(), diss));
}

namespace {

bool conserves_parity(const CMatrix& H) {
  for (int j = 0; j < H.cols(); ++j)
    for (int i = 0; i < H.rows(); ++i)
      if ((i + j) % 2 && H(i, j) != 0.0) return false;
  return true;
}

// A set of matrix elements (m, n) closed under the generator, with the
// superoperator restricted to it.
struct Block {
  int d = 0;
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> index;  // m + n d -> position, or -1

  static Block make(int d, int parity) {  // parity -1: all elements
    Block b;
    b.d = d;
    b.index.assign(d * d, -1);
    for (int n = 0; n < d; ++n)
      for (int m = 0; m < d; ++m)
        if (parity < 0 || (m + n) % 2 == parity) {
          b.index[m + n * d] = static_cast<int>(b.pairs.size());
          b.pairs.emplace_back(m, n);
        }
    return b;
  }
  int size() const { return static_cast<int>(pairs.size()); }
  int at(int m, int n) const { return index[m + n * d]; }

  CVector gather(const CMatrix& rho) const {
    CVector v(size());
    for (int k = 0; k < size(); ++k) v(k) = rho(pairs[k].first, pairs[k].second);
    return v;
  }
  void scatter(const CVector& v, CMatrix& rho) const {
    for (int k = 0; k < size(); ++k) rho(pairs[k].first, pairs[k].second) = v(k);
  }

  CMatrix generator(const CMatrix& H, const DissipationParams& diss) const {
    const int N = size();
    CMatrix L = CMatrix::Zero(N, N);
    const Complex mi(0.0, -1.0);
    const double down = diss.kappa1 * (1.0 + diss.n_th);
    const double up = diss.kappa1 * diss.n_th;
    for (int r = 0; r < N; ++r) {
      const auto [m, n] = pairs[r];
      for (int k = 0; k < d; ++k) {
        if (H(m, k) != 0.0) L(r, at(k, n)) += mi * H(m, k);
        if (H(k, n) != 0.0) L(r, at(m, k)) -= mi * H(k, n);
      }
      if (m + 1 < d && n + 1 < d)
        L(r, at(m + 1, n + 1)) += down * std::sqrt((m + 1.0) * (n + 1.0));
      if (m > 0 && n > 0) L(r, at(m - 1, n - 1)) += up * std::sqrt(double(m) * n);
      const double cm = m + 1 < d ? m + 1.0 : 0.0;
      const double cn = n + 1 < d ? n + 1.0 : 0.0;
      L(r, r) -= 0.5 * down * (m + n) + 0.5 * up * (cm + cn) +
                 0.5 * diss.kappa_phi * double(m - n) * double(m - n);
    }
    return L;
  }
};

std::vector<Block> blocks_for(const CMatrix& H) {
  const int d = static_cast<int>(H.rows());
  if (conserves_parity(H)) return {Block::make(d, 0), Block::make(d, 1)};
  return {Block::make(d, -1)};
}

double generator_scale(const CMatrix& H, const DissipationParams& diss) {
  const int d = static_cast<int>(H.rows());
  double hn = 0.0;
  for (int i = 0; i < d; ++i) hn = std::max(hn, H.row(i).cwiseAbs().sum());
  return 2.0 * hn + diss.kappa1 * (1.0 + 2.0 * diss.n_th) * d +
         diss.kappa_phi * double(d) * d;
}

class Recorder {
 public:
  Recorder(Trajectory& tr, const std::vector<Observable>& obs, Complex trace0,
           bool track_eig, bool store = false)
      : tr_(tr), obs_(obs), trace0_(trace0), track_eig_(track_eig),
        store_(store) {
    tr_.observables["trace"];
    tr_.observables["purity"];
    for (const auto& o : obs_) {
      hermitian_.push_back(o.op.is_hermitian());
      tr_.observables[o.name];
      if (!hermitian_.back()) tr_.observables[o.name + "_im"];
    }
    tr_.min_eigenvalue = 1.0;
  }

  void record(double t, const CMatrix& rho) {
    tr_.times.push_back(t);
    if (store_) tr_.states.push_back(rho);
    const Complex tr = rho.trace();
    tr_.observables["trace"].push_back(tr.real());
    tr_.observables["purity"].push_back((rho * rho).trace().real());
    tr_.max_trace_drift = std::max(tr_.max_trace_drift, std::abs(tr - trace0_));
    tr_.max_hermiticity_drift =
        std::max(tr_.max_hermiticity_drift,
                 (rho - rho.adjoint()).cwiseAbs().maxCoeff());
    if (track_eig_) {
      const CMatrix herm = 0.5 * (rho + rho.adjoint());
      Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
      tr_.min_eigenvalue = std::min(tr_.min_eigenvalue, es.eigenvalues()(0));
    }
    for (std::size_t k = 0; k < obs_.size(); ++k) {
      const Complex v = obs_[k].op.matrix().cwiseProduct(rho.transpose()).sum();
      tr_.observables[obs_[k].name].push_back(v.real());
      if (!hermitian_[k]) tr_.observables[obs_[k].name + "_im"].push_back(v.imag());
    }
  }

 private:
  Trajectory& tr_;
  const std::vector<Observable>& obs_;
  Complex trace0_;
  bool track_eig_;
  bool store_;
  std::vector<bool> hermitian_;
};

// Dormand-Prince 5(4), stepping exactly onto every grid time. The generator
// is autonomous, so the node times c_i are not needed.
void integrate_adaptive(const CMatrix& rho0, const CMatrix& H,
                        const DissipationParams& diss,
                        const std::vector<double>& grid,
                        const EvolveOptions& opt, Recorder& rec) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  auto f = [&](const CMatrix& r) { return lindbladian_apply(r, H, diss); };
  CMatrix y = rho0;
  double t = 0.0;
  std::size_t next = 0;
  while (next < grid.size() && grid[next] <= 0.0) rec.record(grid[next++], y);
  if (next == grid.size()) return;

  double h = std::min(0.01 / std::max(generator_scale(H, diss), 1e-300),
                      grid.back());
  CMatrix k1 = f(y);
  long steps = 0;
  while (next < grid.size()) {
    const double target = grid[next];
    const bool land = t + h >= target;
    const double hp = h;  // proposed step
    if (land) h = target - t;
    const CMatrix k2 = f(y + h * a21 * k1);
    const CMatrix k3 = f(y + h * (a31 * k1 + a32 * k2));
    const CMatrix k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const CMatrix k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const CMatrix k6 =
        f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const CMatrix y5 =
        y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const CMatrix k7 = f(y5);
    const CMatrix err =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double en = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y(i)), std::abs(y5(i)));
      en = std::max(en, std::abs(err(i)) / sc);
    }
    if (++steps > 50'000'000)
      throw ConvergenceError("adaptive integrator exceeded the step budget");
    if (en <= 1.0) {
      t = land ? target : t + h;
      y = y5;
      k1 = k7;  // first-same-as-last
      if (land) {
        while (next < grid.size() && grid[next] <= t) rec.record(grid[next++], y);
      }
      const double fac = en == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(en, -0.2));
      // a short landing step says little about the proposed one
      h = (h >= 0.5 * hp) ? h * fac : hp;
    } else {
      h *= std::max(0.1, 0.9 * std::pow(en, -0.25));
      if (h < 1e-14 * std::max(1.0, t))
        throw ConvergenceError("adaptive step size underflow");
    }
  }
}

void integrate_exact(const CMatrix& rho0, const CMatrix& H,
                     const DissipationParams& diss,
                     const std::vector<double>& grid, Recorder& rec) {
  const auto blocks = blocks_for(H);
  std::vector<CMatrix> gens;
  std::vector<CVector> state;
  for (const auto& b : blocks) {
    gens.push_back(b.generator(H, diss));
    state.push_back(b.gather(rho0));
  }
  std::vector<CMatrix> prop(blocks.size());
  double cached_dt = -1.0;
  CMatrix rho = rho0;
  double t = 0.0;
  for (double tk : grid) {
    const double dt = tk - t;
    if (dt > 0.0) {
      if (std::abs(dt - cached_dt) > 1e-12 * std::max(dt, cached_dt)) {
        for (std::size_t b = 0; b < blocks.size(); ++b)
          prop[b] = (gens[b] * dt).exp();
        cached_dt = dt;
      }
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        state[b] = prop[b] * state[b];
        blocks[b].scatter(state[b], rho);
      }
      t = tk;
    }
    rec.record(tk, rho);
  }
}

}  // namespace

CMatrix superoperator(const Operator& H, const DissipationParams& diss) {
  validate(diss);
  return Block::make(H.dim(), -1).generator(H.matrix(), diss);
}

Trajectory evolve(const DensityMatrix& rho0, const Operator& H,
                  const DissipationParams& diss,
                  const std::vector<double>& t_grid,
                  const std::vector<Observable>& observables,
                  const EvolveOptions& options) {
  if (!(rho0.space() == H.space()))
    throw ShapeError("density matrix and Hamiltonian dimensions differ");
  for (const auto& o : observables)
    if (!(o.op.space() == H.space()))
      throw ShapeError("observable '" + o.name + "' has the wrong dimension");
  validate(diss);
  if (!(options.rtol > 0.0) || !(options.atol > 0.0))
    throw ParameterError("integrator tolerances must be positive");
  for (std::size_t k = 0; k < t_grid.size(); ++k)
    if (t_grid[k] < 0.0 || (k > 0 && t_grid[k] < t_grid[k - 1]))
      throw ParameterError("time grid must be non-negative and non-decreasing");

  Trajectory tr;
  Recorder rec(tr, observables, rho0.trace(), options.track_min_eigenvalue,
               options.store_states);
  Integrator method = options.integrator;
  if (method == Integrator::Auto) {
    const double t_end = t_grid.empty() ? 0.0 : t_grid.back();
    const double stiffness = generator_scale(H.matrix(), diss) * t_end;
    method = (stiffness > 2e4 && H.dim() <= 40) ? Integrator::Exact
                                                 : Integrator::Adaptive;
  }
  if (method == Integrator::Exact)
    integrate_exact(rho0.matrix(), H.matrix(), diss, t_grid, rec);
  else
    integrate_adaptive(rho0.matrix(), H.matrix(), diss, t_grid, options, rec);

  if (tr.max_trace_drift > 1e-6) {
    std::ostringstream os;
    os << "trace drifted by " << tr.max_trace_drift;
    throw ToleranceError(os.str());
  }
  return tr;
}

// ------------------------------------------------------------ lifetimes

std::vector<double> stratified_normal(double mean, double sigma, int n,
                                      std::uint64_t seed) {
  if (n < 1) throw ParameterError("need at least one sample");
  if (sigma == 0.0) return std::vector<double>(n, mean);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const boost::math::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    double q = (i + u(rng)) / n;
    q = std::clamp(q, 1e-15, 1.0 - 1e-15);
    out[i] = mean + sigma * boost::math::quantile(normal, q);
  }
  return out;
}

Trajectory coherent_lifetime(const SKParams& params,
                             const DissipationParams& diss, HilbertSpace space,
                             double t_max, const LifetimeOptions& options) {
  validate(diss);
  if (!(t_max > 0.0)) throw ParameterError("t_max must be > 0");
  if (options.grid_points < 8) throw ParameterError("grid_points must be >= 8");

  const SpectrumResult spec = diagonalize(params, space);
  const CVector& up = spec.ket(+1, 0).amplitudes();
  const CVector& um = spec.ket(-1, 0).amplitudes();
  const CVector plus = (up + um) / std::sqrt(2.0);
  const CMatrix X = up * um.adjoint() + um * up.adjoint();

  const int d = space.dim();
  // Without a drive <X> lives in the parity-changing block alone.
  const bool driven = options.drive != 0.0;
  const Block blk = Block::make(d, driven ? -1 : 1);
  CMatrix rho0 = plus * plus.adjoint();
  const CVector v0 = blk.gather(rho0);
  // <X> = sum_k X(n, m) rho(m, n) over the block
  CVector xrow(blk.size());
  for (int k = 0; k < blk.size(); ++k)
    xrow(k) = X(blk.pairs[k].second, blk.pairs[k].first);
  CMatrix vdrive = CMatrix::Zero(d, d);
  for (int n = 0; n + 1 < d; ++n) {
    vdrive(n + 1, n) = options.drive * std::sqrt(n + 1.0);
    vdrive(n, n + 1) = std::conj(options.drive) * std::sqrt(n + 1.0);
  }

  const auto deltas = diss.sigma_delta > 0.0
                          ? stratified_normal(params.delta, diss.sigma_delta,
                                              diss.n_samples, diss.seed)
                          : std::vector<double>{params.delta};
  std::vector<CMatrix> gens;
  for (double dl : deltas) {
    SKParams p = params;
    p.delta = dl;
    gens.push_back(
        blk.generator(build_hamiltonian(p, space).matrix() + vdrive, diss));
  }

  const int N = options.grid_points;
  double tm = t_max;
  std::vector<CMatrix> prop(gens.size());
  auto fresh = [&] {
    for (std::size_t s = 0; s < gens.size(); ++s)
      prop[s] = (gens[s] * (tm / N)).exp();
  };
  fresh();
  bool refined = false;
  int doublings = 0;
  while (true) {
    Trajectory tr;
    std::vector<double> xs(N + 1, 0.0);
    for (std::size_t s = 0; s < prop.size(); ++s) {
      CVector v = v0;
      for (int k = 0; k <= N; ++k) {
        if (k > 0) v = prop[s] * v;
        xs[k] += xrow.cwiseProduct(v).sum().real();
      }
    }
    for (int k = 0; k <= N; ++k) {
      tr.times.push_back(tm * k / N);
      xs[k] /= double(prop.size());
    }
    tr.observables["X"] = xs;

    // Skip the fast intra-well transient at the start of the window.
    const int first = N / 20;
    const std::vector<double> ft(tr.times.begin() + first, tr.times.end());
    const std::vector<double> fx(xs.begin() + first, xs.end());
    std::optional<ExpFit> fit;
    try {
      fit = fit_exponential(ft, fx);
      // Report the amplitude at t = 0.
      fit->amplitude *= std::exp(ft.front() / fit->T);
    } catch (const FitError&) {
      if (doublings >= options.max_doublings) throw;
    }
    const bool too_short = !fit || fit->T > tm / 3.0;
    if (too_short && doublings < options.max_doublings) {
      tm *= 2.0;
      for (auto& p : prop) p = p * p;
      ++doublings;
      continue;
    }
    if (fit && fit->T < tm / 40.0 && !refined) {
      tm = 8.0 * fit->T;
      refined = true;
      fresh();
      continue;
    }
    if (!fit) throw FitError("no exponential decay resolved");
    if (fit->residual > 0.05 * std::abs(fit->amplitude)) {
      std::ostringstream os;
      os << "single-exponential residual " << fit->residual
         << " exceeds 5% of the amplitude " << fit->amplitude;
      throw FitError(os.str());
    }
    tr.fit = fit;
    return tr;
  }
}

// ------------------------------------------------------------ spectra

LindbladSpectrum lindbladian_spectrum_full(const SKParams& params,
                                           const DissipationParams& diss,
                                           HilbertSpace space) {
  validate(diss);
  if (space.dim() > 40)
    throw SizeError("dense superoperator limited to dim <= 40");
  const CMatrix H = build_hamiltonian(params, space).matrix();
  const auto blocks = blocks_for(H);
  LindbladSpectrum out;
  std::vector<int> block_of;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    Eigen::ComplexEigenSolver<CMatrix> es(blocks[b].generator(H, diss), false);
    if (es.info() != Eigen::Success)
      throw EigsolverError("superoperator diagonalization failed");
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
      out.eigenvalues.push_back(es.eigenvalues()(k));
      block_of.push_back(blocks.size() == 1 ? -1 : static_cast<int>(b));
    }
  }
  const std::size_t n = out.eigenvalues.size();
  std::size_t zero = 0;
  for (std::size_t k = 1; k < n; ++k)
    if (std::abs(out.eigenvalues[k]) < std::abs(out.eigenvalues[zero])) zero = k;
  out.zero_mode = out.eigenvalues[zero];

  auto better = [](Complex a, Complex b) {  // slower decay, prefer Im >= 0
    const double ra = std::abs(a.real()), rb = std::abs(b.real());
    if (std::abs(ra - rb) > 1e-12 * std::max(ra, rb)) return ra < rb;
    return a.imag() > b.imag();
  };
  bool have = false, have_coh = false;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == zero) continue;
    const Complex l = out.eigenvalues[k];
    if (!have || better(l, out.slowest)) {
      out.slowest = l;
      have = true;
    }
    if (block_of[k] != 0 && (!have_coh || better(l, out.slowest_coherence))) {
      out.slowest_coherence = l;
      have_coh = true;
    }
  }
  if (!have_coh) out.slowest_coherence = out.slowest;
  out.T_X = -1.0 / out.slowest_coherence.real();
  return out;
}

EffLindbladResult eff_lindbladian(const SKParams& params,
                                  const DissipationParams& diss, int gamma,
                                  HilbertSpace space,
                                  const EffLindbladOptions& options) {
  validate(diss);
  if (gamma < 1) throw ParameterError("gamma must be >= 1");
  const SpectrumResult spec = diagonalize(params, space);
  if (static_cast<int>(spec.pairs.size()) < gamma + 1)
    throw TruncationError("space holds too few pairs for the requested gamma");
  const Operator a = annihilation(space);
  const Operator n_op = number(space);
  const CMatrix& am = a.matrix();

  EffLindbladResult r;
  r.gamma = gamma;
  r.B = RMatrix(gamma, gamma);
  for (int k = 0; k < gamma; ++k) {
    r.delta_n.push_back(spec.pairs[k].delta);
    r.A_n.push_back(0.5 * (spec.ket(+1, k).expectation(n_op).real() +
                           spec.ket(-1, k).expectation(n_op).real()));
  }
  for (int m = 0; m < gamma; ++m) {
    const CVector& pm = spec.ket(+1, m).amplitudes();
    const CVector& mm = spec.ket(-1, m).amplitudes();
    for (int k = 0; k < gamma; ++k) {
      const CVector& pk = spec.ket(+1, k).amplitudes();
      const CVector& mk = spec.ket(-1, k).amplitudes();
      const Complex b = mm.dot(am * pk) * mk.dot(am.adjoint() * pm);
      if (std::abs(b.imag()) > 1e-8)
        throw ConventionError("B matrix element is not real; eigenket phases "
                              "are not real in the Fock basis");
      r.B(m, k) = b.real();
    }
  }

  const int g = gamma;
  CMatrix L = CMatrix::Zero(2 * g, 2 * g);
  const double down = diss.kappa1 * (1.0 + diss.n_th);
  const double up = diss.kappa1 * diss.n_th;
  for (int m = 0; m < g; ++m) {
    for (int k = 0; k < g; ++k) {
      L(m, g + k) += down * r.B(m, k) + up * r.B(k, m);
      L(g + m, k) += down * r.B(m, k) + up * r.B(k, m);
    }
    L(m, m) += -down * r.A_n[m] - up * (r.A_n[m] + 1.0);
    L(g + m, g + m) += -down * r.A_n[m] - up * (r.A_n[m] + 1.0);
    if (options.include_hamiltonian) {
      L(m, m) += Complex(0.0, -r.delta_n[m]);
      L(g + m, g + m) += Complex(0.0, r.delta_n[m]);
    }
  }
  Eigen::ComplexEigenSolver<CMatrix> es(L, false);
  if (es.info() != Eigen::Success)
    throw EigsolverError("effective Lindbladian diagonalization failed");
  Complex slow = es.eigenvalues()(0);
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const Complex l = es.eigenvalues()(k);
    r.eigenvalues.push_back(l);
    if (std::abs(l.real()) < std::abs(slow.real())) slow = l;
  }
  r.T_X_gamma = -1.0 / slow.real();
  return r;
}

int choose_gamma(const SpectrumResult& spectrum, double kappa1) {
  int g = 0;
  while (g < static_cast<int>(spectrum.pairs.size()) &&
         std::abs(spectrum.pairs[g].delta) < kappa1)
    ++g;
  return std::max(g, 1);
}

}  // namespace kerrlab
