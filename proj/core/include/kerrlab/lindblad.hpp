#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kerrlab/fitting.hpp"
#include "kerrlab/fock.hpp"
#include "kerrlab/spectrum.hpp"

namespace kerrlab {

/// kappa1 (1 + n_th) D[a] + kappa1 n_th D[a+] + kappa_phi D[a+ a], plus an
/// optional quasi-static Gaussian spread of the detuning.
struct DissipationParams {
  double kappa1 = 0.0;
  double n_th = 0.0;
  double kappa_phi = 0.0;
  double sigma_delta = 0.0;
  int n_samples = 33;
  std::uint64_t seed = 0;
};

/// ParameterError for negative rates or occupancies, or n_samples < 1.
void validate(const DissipationParams& diss);

/// -i[H, rho] + dissipators. ShapeError on dimension mismatch. The result is
/// a derivative, so it is returned as a plain Operator.
Operator lindbladian_apply(const DensityMatrix& rho, const Operator& H,
                           const DissipationParams& diss);

/// Same on raw matrices (no validation), for integrators.
CMatrix lindbladian_apply(const CMatrix& rho, const CMatrix& H,
                          const DissipationParams& diss);

struct Observable {
  std::string name;
  Operator op;
};

struct Trajectory {
  std::vector<double> times;
  /// Always "trace" and "purity"; for each observable O the series
  /// Re Tr(O rho), and "<name>_im" for non-Hermitian O.
  std::map<std::string, std::vector<double>> observables;
  std::optional<ExpFit> fit;
  double max_trace_drift = 0.0;
  double max_hermiticity_drift = 0.0;
  double min_eigenvalue = 0.0;
  /// rho at every grid time when requested (EvolveOptions::store_states).
  std::vector<CMatrix> states;

  const std::vector<double>& series(const std::string& name) const;
};

enum class Integrator {
  Auto,      // exact when the problem is stiff and small enough
  Adaptive,  // Dormand-Prince 5(4) with error control
  Exact,     // matrix exponential of the (parity-blocked) superoperator
};

struct EvolveOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  Integrator integrator = Integrator::Auto;
  bool track_min_eigenvalue = true;
  bool store_states = false;
};

/// Integrates the master equation and samples rho at every grid time (the
/// grid must be non-decreasing and start at or after 0). The trace is never
/// renormalized; ToleranceError if it drifts by more than 1e-6. The
/// detuning spread sigma_delta is not sampled here (see coherent_lifetime).
Trajectory evolve(const DensityMatrix& rho0, const Operator& H,
                  const DissipationParams& diss,
                  const std::vector<double>& t_grid,
                  const std::vector<Observable>& observables = {},
                  const EvolveOptions& options = {});

/// Dense superoperator in column-stacked form, vec(A rho B) = (B^T kron A)
/// vec(rho). Exposed for testing and small studies.
CMatrix superoperator(const Operator& H, const DissipationParams& diss);

struct LifetimeOptions {
  int grid_points = 120;
  int max_doublings = 14;
  /// Optional resonant drive eps_x a+ + eps_x* a added to H_SK.
  Complex drive = 0.0;
};

/// Well-flip lifetime T_X. rho0 = |+X><+X| with |+X> = (psi_0^+ + psi_0^-)/sqrt2
/// built from the top two eigenkets of H_SK, and X = |psi_0^+><psi_0^-| + h.c.
/// (at eps2 = 0 this is 2 Re rho_01 in the Fock qubit). <X>(t) is averaged
/// over stratified draws Delta ~ Normal(delta, sigma_delta) and fitted by a
/// single exponential on the last 95% of the window (the first samples carry
/// a fast intra-well transient); t_max doubles until the decay is resolved.
///
/// Observables: "X". FitError if the fit residual exceeds 5% of |A|.
Trajectory coherent_lifetime(const SKParams& params,
                             const DissipationParams& diss, HilbertSpace space,
                             double t_max, const LifetimeOptions& options = {});

/// Detunings Delta_i = mean + sigma Phi^{-1}((i + U_i)/n), U_i ~ U(0,1)
/// from a generator seeded with `seed`.
std::vector<double> stratified_normal(double mean, double sigma, int n,
                                      std::uint64_t seed);

struct LindbladSpectrum {
  std::vector<Complex> eigenvalues;
  Complex zero_mode;
  /// Eigenvalue with the smallest non-zero |Re| over the whole superoperator.
  Complex slowest;
  /// Same restricted to the parity-changing block (rho_mn with m + n odd),
  /// which is where <X> lives.
  Complex slowest_coherence;
  double T_X = 0.0;  // -1/Re(slowest_coherence)
};

/// SizeError for dim > 40.
LindbladSpectrum lindbladian_spectrum_full(const SKParams& params,
                                           const DissipationParams& diss,
                                           HilbertSpace space);

struct EffLindbladResult {
  int gamma = 0;
  std::vector<double> delta_n;
  std::vector<double> A_n;
  RMatrix B;
  std::vector<Complex> eigenvalues;
  double T_X_gamma = 0.0;
};

struct EffLindbladOptions {
  bool include_hamiltonian = true;  // false: L_D alone (no tunnel splittings)
};

/// 2 gamma x 2 gamma matrix of the Lindbladian restricted to the coherences
/// |psi_n^+><psi_n^-|, |psi_n^-><psi_n^+| (n < gamma), in that order.
/// ConventionError if some B_mn is complex beyond 1e-8.
EffLindbladResult eff_lindbladian(const SKParams& params,
                                  const DissipationParams& diss, int gamma,
                                  HilbertSpace space,
                                  const EffLindbladOptions& options = {});

/// Number of pairs with |delta_n| < kappa1 counted from the ground pair,
/// at least 1.
int choose_gamma(const SpectrumResult& spectrum, double kappa1);

}  // namespace kerrlab
