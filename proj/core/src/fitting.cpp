#include "kerrlab/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>
#include <unsupported/Eigen/NonLinearOptimization>

#include "kerrlab/errors.hpp"

namespace kerrlab {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct ModelBase {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = VectorXd;
  using ValueType = VectorXd;
  using JacobianType = MatrixXd;

  const std::vector<double>& t;
  const std::vector<double>& y;
  int n_inputs;

  int inputs() const { return n_inputs; }
  int values() const { return static_cast<int>(t.size()); }
};

// x = (A, k, C), model A e^{-k t} + C
struct ExpModel : ModelBase {
  int operator()(const VectorXd& x, VectorXd& f) const {
    for (int i = 0; i < values(); ++i)
      f(i) = x(0) * std::exp(-x(1) * t[i]) + x(2) - y[i];
    return 0;
  }
  int df(const VectorXd& x, MatrixXd& j) const {
    for (int i = 0; i < values(); ++i) {
      const double e = std::exp(-x(1) * t[i]);
      j(i, 0) = e;
      j(i, 1) = -x(0) * t[i] * e;
      j(i, 2) = 1.0;
    }
    return 0;
  }
};

// x = (A, k, w, phi, C)
struct CosModel : ModelBase {
  int operator()(const VectorXd& x, VectorXd& f) const {
    for (int i = 0; i < values(); ++i)
      f(i) = x(0) * std::exp(-x(1) * t[i]) * std::cos(x(2) * t[i] + x(3)) +
             x(4) - y[i];
    return 0;
  }
  int df(const VectorXd& x, MatrixXd& j) const {
    for (int i = 0; i < values(); ++i) {
      const double e = std::exp(-x(1) * t[i]);
      const double c = std::cos(x(2) * t[i] + x(3));
      const double s = std::sin(x(2) * t[i] + x(3));
      j(i, 0) = e * c;
      j(i, 1) = -x(0) * t[i] * e * c;
      j(i, 2) = -x(0) * t[i] * e * s;
      j(i, 3) = -x(0) * e * s;
      j(i, 4) = 1.0;
    }
    return 0;
  }
};

template <class Model>
bool refine(Model model, VectorXd& x) {
  Eigen::LevenbergMarquardt<Model> lm(model);
  lm.parameters.maxfev = 4000;
  lm.parameters.xtol = 1e-14;
  lm.parameters.ftol = 1e-14;
  const auto status = lm.minimize(x);
  using namespace Eigen::LevenbergMarquardtSpace;
  return status != ImproperInputParameters &&
         status != TooManyFunctionEvaluation && x.allFinite();
}

template <class Model>
double rms(const Model& model, const VectorXd& x) {
  VectorXd f(model.values());
  model(x, f);
  return std::sqrt(f.squaredNorm() / f.size());
}

void check_input(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size()) throw ShapeError("times and values differ in length");
  if (t.size() < 8) throw FitError("need at least 8 samples");
  for (std::size_t i = 0; i < t.size(); ++i)
    if (!std::isfinite(t[i]) || !std::isfinite(y[i]))
      throw FitError("non-finite sample");
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  double scale = 0.0;
  for (double v : y) scale = std::max(scale, std::abs(v));
  if (*hi - *lo <= 1e-12 * std::max(1.0, scale))
    throw FitError("constant series: decay time unidentifiable");
}

double interpolate(const std::vector<double>& t, const std::vector<double>& y,
                   double at) {
  auto it = std::lower_bound(t.begin(), t.end(), at);
  if (it == t.begin()) return y.front();
  if (it == t.end()) return y.back();
  const std::size_t k = it - t.begin();
  const double w = (at - t[k - 1]) / (t[k] - t[k - 1]);
  return (1.0 - w) * y[k - 1] + w * y[k];
}

}  // namespace

ExpFit fit_exponential(const std::vector<double>& times,
                       const std::vector<double>& values) {
  check_input(times, values);
  const int n = static_cast<int>(times.size());
  const double t0 = times.front(), t2 = times.back();
  const double span = t2 - t0;
  if (!(span > 0.0)) throw FitError("time span must be positive");

  // three equally spaced samples give C = (y0 y2 - y1^2)/(y0 + y2 - 2 y1)
  const double y0 = values.front(), y2 = values.back();
  const double y1 = interpolate(times, values, 0.5 * (t0 + t2));
  const double den = y0 + y2 - 2.0 * y1;
  double c0 = y2;
  if (std::abs(den) > 1e-12 * (std::abs(y0) + std::abs(y2) + 1e-300)) {
    const double c = (y0 * y2 - y1 * y1) / den;
    // keep the estimate on the far side of the last sample
    if ((y0 - y2) * (y2 - c) >= 0.0) c0 = c;
  }
  if (c0 == y2) c0 = y2 - 0.05 * (y0 - y2);

  // log-linear regression of log|y - C|
  double sw = 0, st = 0, sl = 0, stt = 0, stl = 0;
  const double sign = (y0 - c0) >= 0.0 ? 1.0 : -1.0;
  for (int i = 0; i < n; ++i) {
    const double d = sign * (values[i] - c0);
    if (d <= 0.0) continue;
    const double l = std::log(d);
    const double w = d * d;  // damp the noisy tail
    sw += w;
    st += w * times[i];
    sl += w * l;
    stt += w * times[i] * times[i];
    stl += w * times[i] * l;
  }
  double k0 = 1.0 / span, a0 = y0 - c0;
  const double det = sw * stt - st * st;
  if (sw > 0.0 && det > 0.0) {
    const double slope = (sw * stl - st * sl) / det;
    if (slope < 0.0) {
      k0 = -slope;
      a0 = sign * std::exp((sl - slope * st) / sw);
    }
  }

  const ExpModel model{{times, values, 3}};
  VectorXd x(3);
  x << a0, k0, c0;
  VectorXd best = x;
  double best_rms = rms(model, x);
  bool ok = false;
  for (double kscale : {1.0, 0.3, 3.0}) {
    VectorXd trial(3);
    trial << a0, k0 * kscale, c0;
    if (refine(model, trial) && trial(1) > 0.0) {
      const double r = rms(model, trial);
      if (!ok || r < best_rms) {
        best = trial;
        best_rms = r;
        ok = true;
      }
    }
  }
  if (!ok) throw FitError("exponential refinement did not converge");
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  if (std::abs(best(0)) <= 1e-12 * std::max(1.0, scale))
    throw FitError("fitted amplitude vanishes");
  if (!(best(1) > 0.0)) throw FitError("series does not decay");
  // Beyond this A and T trade off against C and only the slope is known.
  if (best(1) * (times.back() - times.front()) < 1e-3)
    throw FitError("decay time exceeds the sampled window by over 1000x");
  return ExpFit{best(0), 1.0 / best(1), best(2), best_rms};
}

DampedCosineFit fit_damped_cosine(const std::vector<double>& times,
                                  const std::vector<double>& values) {
  check_input(times, values);
  const int n = static_cast<int>(times.size());
  const double span = times.back() - times.front();
  if (!(span > 0.0)) throw FitError("time span must be positive");

  // resample onto a uniform grid for the FFT seed
  const int pad = 16;
  const int m = n * pad;
  std::vector<double> buf(m, 0.0);
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  const double dt = span / (n - 1);
  for (int i = 0; i < n; ++i)
    buf[i] = interpolate(times, values, times.front() + i * dt) - mean;
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, buf);
  int peak = 1;
  for (int k = 1; k < m / 2; ++k)
    if (std::abs(spec[k]) > std::abs(spec[peak])) peak = k;
  const double w0 = 2.0 * std::numbers::pi * peak / (m * dt);

  const CosModel model{{times, values, 5}};
  double amp0 = 0.0;
  for (double v : values) amp0 = std::max(amp0, std::abs(v - mean));
  VectorXd best(5);
  double best_rms = 0.0;
  bool ok = false;
  for (double tscale : {0.3, 1.0, 5.0}) {
    for (double phi : {0.0, 0.5 * std::numbers::pi, std::numbers::pi,
                       -0.5 * std::numbers::pi}) {
      VectorXd x(5);
      x << amp0, 1.0 / (tscale * span), w0, phi, mean;
      if (!refine(model, x)) continue;
      const double r = rms(model, x);
      if (!ok || r < best_rms) {
        best = x;
        best_rms = r;
        ok = true;
      }
    }
  }
  if (!ok) throw FitError("damped-cosine refinement did not converge");
  DampedCosineFit f;
  f.amplitude = best(0);
  f.phase = best(3);
  if (f.amplitude < 0.0) {
    f.amplitude = -f.amplitude;
    f.phase += std::numbers::pi;
  }
  f.omega = best(2);
  if (f.omega < 0.0) {
    f.omega = -f.omega;
    f.phase = -f.phase;
  }
  f.phase = std::remainder(f.phase, 2.0 * std::numbers::pi);
  f.T = best(1) > 0.0 ? 1.0 / best(1) : INFINITY;
  f.offset = best(4);
  f.residual = best_rms;
  return f;
}

}  // namespace kerrlab
