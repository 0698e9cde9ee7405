#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "kerrlab/fock.hpp"

namespace kerrlab {

/// Driven nonlinear oscillator in the bosonic basis. All rates share one
/// unit (rad/s or any consistent choice).
struct CircuitParams {
  double omega_o = 1.0;  // bare frequency
  double g3 = 0.0;
  double g4 = 0.0;
  double g5 = 0.0;
  double g6 = 0.0;
  double Omega_d = 0.0;  // drive amplitude
  double omega_d = 2.0;  // drive frequency
  /// Shifted small-oscillation frequency entering the coefficient formulas.
  /// Values <= 0 select omega_o.
  double omega_a = 0.0;
  /// Phase of the displacement Pi (gauge of the drive).
  double drive_phase = 0.0;

  double detuning() const { return 0.5 * omega_d - omega_o; }
  double shifted_frequency() const { return omega_a > 0.0 ? omega_a : omega_o; }
};

/// Throws ParameterError when some |g_m|/omega_o >= 0.2 or omega_d <= 0.
/// Returns human-readable warnings (|g_m|/omega_o > 0.05, |delta| > |g3|).
std::vector<std::string> validate(const CircuitParams& params);

/// |Pi| = 4 Omega_d / (3 omega_d).
double displacement_amplitude(const CircuitParams& params);

/// One order of a coefficient: pieces[k] multiplies |Pi|^(2k).
struct OrderTerms {
  std::vector<double> pieces;
  double total = 0.0;
};

struct EffectiveCoefficients {
  int order = 0;
  Complex Pi;
  std::map<int, OrderTerms> Delta_by_order;
  std::map<int, OrderTerms> K_by_order;
  std::map<int, Complex> eps2_by_order;
  Complex eps2_prime;  // order 3
  double lambda4 = 0.0;
  Complex eps4;
  double total_Delta = 0.0;
  double total_K = 0.0;
  Complex total_eps2;
};

/// Static-effective coefficients of H_eff = -Delta n - K a+^2 a^2 + eps2 a+^2
/// + eps2' a+^3 a - lambda a+^3 a^3 + eps4 a+^4 + h.c., summed through
/// `order` (1..4). OrderError otherwise.
///
/// The g3^2 g4 term of eps4 is evaluated with 1/omega_a^2; this is the only
/// dimensionally consistent reading of that term.
EffectiveCoefficients effective_coefficients(const CircuitParams& params,
                                             int order);

/// Alternative leading-order Kerr K = -3 g4/2 + 10 g3^2/(3 omega_a). It
/// disagrees with the order-2 value -3 g4/2 - 5 g3^2/(3 omega_a) returned by
/// effective_coefficients, which is the one used everywhere else.
double leading_order_kerr_alternative(const CircuitParams& params);

/// n_crit = 15 M^2 / (p^2 phi_zps^2).
double ncrit(double M, double p, double phi_zps);

struct FloquetOptions {
  int steps_per_period = 1024;  // initial RK4 resolution
  int max_doublings = 6;
  double rel_tol = 1e-3;
};

struct FloquetResult {
  /// Quasienergies of the n_levels lowest-photon-number Floquet states,
  /// sorted ascending, folded around the one with fewest photons.
  std::vector<double> quasienergies;
  std::vector<double> photon_numbers;  // matching quasienergies
  std::vector<double> gaps;            // consecutive differences
  int steps_per_period = 0;
};

/// Brute-force quasienergies of the rotating-frame Hamiltonian
///   -delta n + sum_m g_m/m (a e^{-i w t/2} + h.c. + Pi e^{-i w t} + c.c.)^m
/// over one period 4 pi/omega_d. The step count doubles until every gap is
/// stable to rel_tol; ConvergenceError otherwise.
FloquetResult floquet_spectrum(const CircuitParams& params, HilbertSpace space,
                               int n_levels, FloquetOptions options = {});

std::vector<double> floquet_quasienergies(const CircuitParams& params,
                                          HilbertSpace space, int n_levels);

}  // namespace kerrlab
