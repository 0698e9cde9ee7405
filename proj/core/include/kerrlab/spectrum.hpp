#pragma once

#include <complex>
#include <vector>

#include "kerrlab/effham.hpp"
#include "kerrlab/fock.hpp"

namespace kerrlab {

/// H_SK = -Delta n - K a+^2 a^2 + eps2 (a+^2 + a^2)
///        - lambda a+^3 a^3 + (eps4 a+^4 + eps2' a+^3 a + h.c.)
/// with eps2 real and non-negative.
struct SKParams {
  double delta = 0.0;
  double kerr = 1.0;
  double eps2 = 0.0;
  double lambda = 0.0;
  Complex eps4 = 0.0;
  Complex eps2_prime = 0.0;

  double alpha2() const { return eps2 / kerr; }
};

/// ParameterError unless kerr > 0 and eps2 >= 0.
void validate(const SKParams& params);

/// Maps effective coefficients to SKParams, rotating a -> a e^{i arg(eps2)/2}
/// so that eps2 becomes real and non-negative.
SKParams to_sk_params(const EffectiveCoefficients& coeffs);

/// Mean photon number of the (Hamiltonian) wells, eps2/K - Delta/(2K),
/// clipped at 0.
double well_alpha2(const SKParams& params);

/// Smallest dimension accepted by build_hamiltonian.
int minimum_dim(const SKParams& params);

/// TruncationError when the space is smaller than minimum_dim.
Operator build_hamiltonian(const SKParams& params, HilbertSpace space);

struct Level {
  double energy;
  int parity;  // +1 even, -1 odd
  int index;   // excitation index within the parity sector, 0 = top level
};

struct LevelPair {
  int n;
  double e_plus;
  double e_minus;
  double delta;  // e_plus - e_minus
};

/// Eigenpairs of H_SK by parity sector. Within a sector `levels` is sorted
/// by ascending energy; the excitation index counts down from the highest
/// level (the ground manifold of the inverted spectrum, since -K a+^2 a^2 is
/// bounded above). Pair n combines the n-th even and n-th odd level.
struct SpectrumResult {
  SKParams params;
  HilbertSpace space;
  std::vector<Level> levels;
  std::vector<Ket> eigenkets;  // aligned with levels
  std::vector<LevelPair> pairs;

  const Ket& ket(int parity, int n) const;
  double energy(int parity, int n) const;
  int sector_size(int parity) const;
};

/// Sector-wise diagonalization; eigenkets are phase-fixed so the largest
/// Fock coefficient is real and positive.
SpectrumResult diagonalize(const SKParams& params, HilbertSpace space);

/// Eigenvalues of the full (unsplit) matrix, ascending.
std::vector<double> eigenvalues_full(const SKParams& params,
                                     HilbertSpace space);

struct GapResult {
  double mean;        // mean of (E_0^pm - E_1^pm)
  double nearest;     // E_0^+ minus the closest level outside the ground pair
  double asymptotic;  // 4 K |alpha|^2
};

GapResult excitation_gap(const SKParams& params, HilbertSpace space);

/// eps2/(pi K) - Delta/(8K).
double bohr_count(const SKParams& params);

/// Area of one tear-drop loop of H_cl = 0 divided by 2 pi, obtained by
/// marching the separatrix from the saddle and applying Green's theorem.
/// NoWellError unless eps2 > |Delta|/2.
double lemniscate_area(const SKParams& params);

/// Closed form of the same area: (eps2 sin 2t - Delta t)/(pi K) with
/// cos 2t = Delta/(2 eps2).
double lemniscate_area_exact(const SKParams& params);

struct KissingPoint {
  int n;
  double eps2_over_K;
};

/// Inflection point of the splitting |delta_n|(eps2) for n = 1..n_pairs,
/// located on a natural cubic spline through the sweep. NotFoundError if the
/// second derivative never changes sign from negative to positive.
std::vector<KissingPoint> kissing_points(const std::vector<double>& sweep,
                                         const SKParams& templ, int n_pairs,
                                         HilbertSpace space);

/// Inflection of a single sampled curve (exposed for testing).
double sigmoid_inflection(const std::vector<double>& x,
                          const std::vector<double>& y);

struct NoJumpWells {
  double alpha2;
  double sin_2phi;
};

/// Well positions of the no-jump Hamiltonian with Delta -> Delta + i k1/2,
/// K -> K + i k2/2. BelowThresholdError below the parametric threshold.
NoJumpWells nojump_wells(const SKParams& params, double kappa1, double kappa2);

/// Levels of H_eff (order `order`) and of the brute-force Floquet problem,
/// both ordered by mean photon number, with gaps E_{k+1} - E_k taken in that
/// order. Used to check the static effective Hamiltonian at weak drive.
struct FloquetComparison {
  std::vector<double> floquet_photons;
  std::vector<double> heff_photons;
  std::vector<double> floquet_gaps;
  std::vector<double> heff_gaps;
  std::vector<double> rel_error;  // |floquet - heff| / |heff| per gap
  double max_rel_error = 0.0;
};

FloquetComparison compare_floquet_effective(const CircuitParams& params,
                                            int order, HilbertSpace floquet_space,
                                            HilbertSpace heff_space, int n_levels);

}  // namespace kerrlab
