#pragma once

#include <vector>

namespace kerrlab {

/// A e^{-t/T} + C.
struct ExpFit {
  double amplitude = 0.0;
  double T = 0.0;
  double offset = 0.0;
  double residual = 0.0;  // root-mean-square misfit
};

/// Least-squares fit of A e^{-t/T} + C. The offset is first estimated from
/// three points, A and T from a log-linear regression, then all three are
/// refined by Levenberg-Marquardt.
///
/// FitError with fewer than 8 points, for (numerically) constant data, a
/// vanishing amplitude, a non-decaying solution, T beyond 1000 times the
/// sampled window, or a failed refinement.
ExpFit fit_exponential(const std::vector<double>& times,
                       const std::vector<double>& values);

/// A e^{-t/T} cos(omega t + phi) + C.
struct DampedCosineFit {
  double amplitude = 0.0;
  double T = 0.0;
  double omega = 0.0;
  double phase = 0.0;
  double offset = 0.0;
  double residual = 0.0;
};

/// The frequency is seeded from the peak of a zero-padded FFT of the
/// mean-removed samples; the amplitude is reported non-negative.
/// Requires at least 8 roughly uniform samples.
DampedCosineFit fit_damped_cosine(const std::vector<double>& times,
                                  const std::vector<double>& values);

}  // namespace kerrlab
