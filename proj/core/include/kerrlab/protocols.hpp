#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "kerrlab/fitting.hpp"
#include "kerrlab/fock.hpp"
#include "kerrlab/lindblad.hpp"
#include "kerrlab/spectrum.hpp"

namespace kerrlab {

// ------------------------------------------------------------- cat gates

/// Mean photon number of the parity-less cats, |alpha|^2 (r^2 + r^-2)/2 with
/// r the even/odd normalization ratio. Tends to 1/2 as alpha -> 0.
double nbar_ys(double alpha2);

/// Rabi rate of a resonant drive eps_x (a + a+) between the cat states,
/// Re(4 eps_x e^{-i arg alpha} sqrt(nbar_ys)). For large |alpha| this is
/// Re(4 eps_x alpha*); at alpha = 0 the phase of alpha is taken as 0.
double rabi_frequency(Complex eps_x, Complex alpha);

/// 16 |alpha|^3 sqrt(K^2 + kappa2^2/4) with |alpha|^2 the well photon number.
double rabi_speed_limit(const SKParams& params, double kappa2);

/// Bloch-sphere average of the photon number along the cat meridian,
/// |alpha|^2 (1 + e^{-4|alpha|^2})/(1 - e^{-4|alpha|^2}); equals nbar_ys.
double meridian_nbar(double alpha2);

/// Evolution of |alpha> under -K a+^2 a^2 (Delta = eps2 = 0), closed or with
/// dissipation. Observables "parity", "n", "return" (<alpha|rho|alpha>) and
/// "a" / "a_im"; `states` holds rho at every grid time. Closed evolution
/// uses the exact number-basis phases. ParameterError if Delta, eps2 or any
/// higher-order term is non-zero.
Trajectory free_kerr_evolve(Complex alpha, const SKParams& params,
                            const DissipationParams& diss,
                            const std::vector<double>& t_grid,
                            HilbertSpace space);

/// Duration of the Kerr gate that maps a coherent state onto a parity-less
/// cat, pi/(2K).
double kerr_gate_time(double kerr);

struct RabiTrace {
  Trajectory trajectory;  // observable "parity", averaged over detuning draws
  DampedCosineFit fit;
  double T_YZ = 0.0;
  double omega = 0.0;
};

/// Starts from the parity-less cat (psi_0^+ + i psi_0^-)/sqrt2 built from the
/// top eigenkets of H_SK, evolves under H_SK + eps_x a+ + eps_x* a with
/// dissipation and fits A e^{-t/T} cos(Omega t + phi) + C to <parity>.
/// FitError for eps_x = 0 (nothing oscillates) or a failed fit.
RabiTrace cat_rabi_trace(const SKParams& params, const DissipationParams& diss,
                         Complex eps_x, const std::vector<double>& t_grid,
                         HilbertSpace space);

// ---------------------------------------------------------------- readout

struct ReadoutParams {
  Complex g_bs;          // beamsplitter rate, canonical phase +pi/2
  double kappa_r = 0.0;  // resonator linewidth
  double eta = 1.0;      // quantum efficiency in (0, 1]
  double tau = 0.0;      // pulse length
};

/// ParameterError unless kappa_r > 0, 0 < eta <= 1 and tau >= 0.
void validate(const ReadoutParams& ro);

/// Power SNR 32 eta (|g alpha|/kappa_r)^2 [x - 4(1 - e^{-x/2}) + (1 - e^{-x})]
/// with x = kappa_r tau.
double readout_snr(const ReadoutParams& ro, Complex alpha);

inline constexpr double kWeakReadoutWarnRatio = 0.1;

/// |g_bs|^2 / (2 K |alpha| kappa_r); the readout stays within the wells
/// when this is small (warn above kWeakReadoutWarnRatio).
double weak_readout_ratio(const ReadoutParams& ro, double kerr, Complex alpha);

struct ReadoutOutcome {
  double I;
  double Q;
  int label;  // sign(I - threshold)
};

/// Shot-major: measurement k of shot s is entry s * n_repeats + k.
struct MeasurementRecord {
  std::vector<ReadoutOutcome> outcomes;
  std::vector<int> truth;  // well label (+1 / -1) at each measurement
  double threshold = 0.0;
  int n_repeats = 0;
};

struct ReadoutSimulation {
  MeasurementRecord record;
  double snr = 0.0;
  /// 1 - p(+|-) - p(-|+) from the first measurement of every shot.
  double fidelity = 0.0;
  /// (P(+|+) + P(-|-))/2 over successive measurement pairs.
  double qndness = 0.0;
  /// Exponential fit of the sign-conditioned mean of I along the repeats;
  /// empty if fewer than 8 repeats or the fit fails.
  std::optional<double> decay_time;
};

/// Symmetric telegraph process with flip rate 1/(2 T_X) per direction,
/// sampled every tau; each measurement returns I ~ Normal(+-I0, sigma),
/// Q ~ Normal(0, sigma) with 2 I0^2/sigma^2 = SNR. T_X may be infinite.
/// Each shot draws from its own generator seeded by (seed, shot index).
ReadoutSimulation readout_record_sim(double T_X, const ReadoutParams& ro,
                                     Complex alpha, int n_shots, int n_repeats,
                                     std::uint64_t seed);

// ---------------------------------------------------------------- summary

/// (1/6) sum of the six cardinal-state decay rates, in the order
/// +X, -X, +Y, -Y, +Z, -Z.
double bloch_average_coherence(const std::array<double, 6>& T);

/// Fock-qubit counterpart, (4/T_2R + 1/T_1)/6: the four equatorial rates
/// average to 1/T_2R and the two polar rates sum to 1/T_1.
double fock_average_coherence(double T2R, double T1);

/// gamma_Fock / gamma_cat.
double error_correction_gain(double gamma_fock, double gamma_cat);

}  // namespace kerrlab
