#pragma once

#include <cstdint>
#include <vector>

#include "kerrlab/fock.hpp"
#include "kerrlab/lindblad.hpp"
#include "kerrlab/spectrum.hpp"

namespace kerrlab {

// Phase-space functions use x = (a + a+)/sqrt2, p = (a - a+)/(i sqrt2).

enum class MetapotentialVariant {
  Quantum,    // (K - Delta/2) r^2 - K/4 r^4 + eps2 (x^2 - p^2), Weyl symbol
  Classical,  // -Delta/2 r^2 - K/4 r^4 + eps2 (x^2 - p^2)
};

struct MetapotentialSurface {
  PhaseGrid grid;
  RMatrix values;  // values(i, j) at (x_i, p_j)
  MetapotentialVariant variant;
};

double metapotential_at(const SKParams& params, double x, double p,
                        MetapotentialVariant variant);
MetapotentialSurface metapotential(const SKParams& params, const PhaseGrid& grid,
                                   MetapotentialVariant variant);

/// Point particles with uniform weights; `energy` holds the classical
/// energy of each particle.
struct ClassicalEnsemble {
  std::vector<double> x;
  std::vector<double> p;
  std::vector<double> energy;

  std::size_t size() const { return x.size(); }
};

/// n particles drawn from a Gaussian of standard deviation `spread` around
/// (x0, p0), reproducibly from `seed`.
ClassicalEnsemble gaussian_ensemble(const SKParams& params, double x0, double p0,
                                    double spread, int n, std::uint64_t seed);

/// Sum over particles of |<x^2> - <p^2>, 2<xp>| / (<x^2> + <p^2>), moments
/// about the origin; 0 for a circularly symmetric cloud.
double ensemble_anisotropy(const ClassicalEnsemble& ensemble);

struct LiouvilleOptions {
  /// Upper bound on the RK4 step in units of the fastest local period.
  double step_fraction = 2e-3;
  double energy_tolerance = 1e-5;  // relative drift bound
};

/// Hamilton's equations x' = dH/dp, p' = -dH/dx for the classical
/// Hamiltonian (conservative flow only), integrated with fixed-step RK4.
/// Returns one ensemble per grid time. ToleranceError on energy drift.
std::vector<ClassicalEnsemble> liouville_evolve(const ClassicalEnsemble& start,
                                                const SKParams& params,
                                                const std::vector<double>& t_grid,
                                                const LiouvilleOptions& options = {});

/// Jacobian of the flow map (x0, p0) -> (x(t), p(t)), integrated with the
/// variational equations. Its determinant is 1 for a Hamiltonian flow.
Eigen::Matrix2d flow_jacobian(const SKParams& params, double x0, double p0,
                              double t, const LiouvilleOptions& options = {});

/// Compares W[L rho] (exact, since the Wigner map is linear) with the
/// phase-space drift/diffusion operator
///   kappa1 (1+n_th)/2 (d_x x + d_p p + lap/2) W
///   + kappa1 n_th/2 (-d_x x - d_p p + lap/2) W
/// evaluated with 8th-order central differences on interior grid points.
/// Only the dissipative part is compared; the Hamiltonian bracket is checked
/// in operator space elsewhere. Returns max |difference| normalized by
/// max(max |W[L rho]|, kappa1 max |W|).
///
/// GridError for non-uniform or coarse grids or fewer than 9 points per
/// axis; ParameterError if kappa_phi != 0 (no phase-space term for it).
double moyal_rhs_check(const DensityMatrix& rho, const DissipationParams& diss,
                       const PhaseGrid& grid);

struct QuantumnessBudget {
  /// max |(1/24)(H_xxx W_ppp - 3 H_xxp W_xpp + 3 H_xpp W_xxp - H_ppp W_xxx)|,
  /// the complete beyond-Poisson part of the Moyal bracket for a quartic H.
  double nonlinear_side = 0.0;
  /// kappa1 max(|W_xx|, |W_pp|).
  double dissipative_side = 0.0;
  double ratio = 0.0;
};

QuantumnessBudget quantumness_budget(const SKParams& params,
                                     const DissipationParams& diss,
                                     const DensityMatrix& rho,
                                     const PhaseGrid& grid);

}  // namespace kerrlab
