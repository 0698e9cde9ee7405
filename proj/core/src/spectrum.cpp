#include "kerrlab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kerrlab/errors.hpp"

namespace kerrlab {

void validate(const SKParams& params) {
  if (!(params.kerr > 0.0)) throw ParameterError("kerr must be > 0");
  if (!(params.eps2 >= 0.0))
    throw ParameterError("eps2 must be real and >= 0 (canonical gauge)");
}

SKParams to_sk_params(const EffectiveCoefficients& c) {
  const double phi = std::arg(c.total_eps2);
  const Complex rot = std::polar(1.0, -phi);  // a -> a e^{i phi/2}
  SKParams p;
  p.delta = c.total_Delta;
  p.kerr = c.total_K;
  p.eps2 = std::abs(c.total_eps2);
  p.lambda = c.lambda4;
  p.eps2_prime = c.eps2_prime * rot;
  p.eps4 = c.eps4 * rot * rot;
  return p;
}

double well_alpha2(const SKParams& params) {
  return std::max(0.0, (params.eps2 - 0.5 * params.delta) / params.kerr);
}

int minimum_dim(const SKParams& params) {
  if (params.eps2 == 0.0 && params.eps4 == 0.0 && params.eps2_prime == 0.0)
    return 2;
  const double a2 = std::max(params.alpha2(), well_alpha2(params));
  return static_cast<int>(std::ceil(a2 + 3.0 * std::sqrt(a2) + 4.0));
}

Operator build_hamiltonian(const SKParams& params, HilbertSpace space) {
  validate(params);
  if (space.dim() < minimum_dim(params)) {
    std::ostringstream os;
    os << "dim " << space.dim() << " too small for eps2/K = "
       << params.alpha2() << " (need >= " << minimum_dim(params) << ")";
    throw TruncationError(os.str());
  }
  const int d = space.dim();
  CMatrix h = CMatrix::Zero(d, d);
  for (int n = 0; n < d; ++n) {
    const double nn = n;
    h(n, n) = -params.delta * nn - params.kerr * nn * (nn - 1.0) -
              params.lambda * nn * (nn - 1.0) * (nn - 2.0);
  }
  for (int n = 2; n < d; ++n) {
    const double s = std::sqrt(double(n) * double(n - 1));
    h(n, n - 2) += params.eps2 * s;  // a+^2
    h(n - 2, n) += params.eps2 * s;  // a^2
  }
  if (params.eps2_prime != 0.0) {
    // (a+^3 a)_{n+2,n} = n sqrt((n+1)(n+2))
    for (int n = 1; n + 2 < d; ++n) {
      const double s = n * std::sqrt(double(n + 1) * double(n + 2));
      h(n + 2, n) += params.eps2_prime * s;
      h(n, n + 2) += std::conj(params.eps2_prime) * s;
    }
  }
  if (params.eps4 != 0.0) {
    for (int n = 0; n + 4 < d; ++n) {
      const double s = std::sqrt(double(n + 1) * (n + 2) * (n + 3) * (n + 4));
      h(n + 4, n) += params.eps4 * s;
      h(n, n + 4) += std::conj(params.eps4) * s;
    }
  }
  return Operator(space, std::move(h));
}

// --------------------------------------------------------------- spectrum

const Ket& SpectrumResult::ket(int parity, int n) const {
  for (std::size_t k = 0; k < levels.size(); ++k)
    if (levels[k].parity == parity && levels[k].index == n) return eigenkets[k];
  throw ParameterError("no level with the requested parity and index");
}

double SpectrumResult::energy(int parity, int n) const {
  for (const auto& l : levels)
    if (l.parity == parity && l.index == n) return l.energy;
  throw ParameterError("no level with the requested parity and index");
}

int SpectrumResult::sector_size(int parity) const {
  return static_cast<int>(std::count_if(
      levels.begin(), levels.end(),
      [parity](const Level& l) { return l.parity == parity; }));
}

SpectrumResult diagonalize(const SKParams& params, HilbertSpace space) {
  const Operator H = build_hamiltonian(params, space);
  const int d = space.dim();
  SpectrumResult r{params, space, {}, {}, {}};
  std::vector<double> top_even, top_odd;  // energies by excitation index
  for (int parity : {+1, -1}) {
    std::vector<int> idx;
    for (int n = (parity > 0 ? 0 : 1); n < d; n += 2) idx.push_back(n);
    const int m = static_cast<int>(idx.size());
    CMatrix block(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) block(i, j) = H(idx[i], idx[j]);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(block);
    if (es.info() != Eigen::Success)
      throw EigsolverError("sector diagonalization did not converge");
    auto& tops = parity > 0 ? top_even : top_odd;
    tops.assign(m, 0.0);
    for (int k = 0; k < m; ++k) {
      CVector v = CVector::Zero(d);
      const auto col = es.eigenvectors().col(k);
      int arg = 0;
      for (int i = 1; i < m; ++i)
        if (std::abs(col(i)) > std::abs(col(arg))) arg = i;
      const Complex phase = std::conj(col(arg)) / std::abs(col(arg));
      for (int i = 0; i < m; ++i) v(idx[i]) = col(i) * phase;
      v(idx[arg]) = std::abs(v(idx[arg]));
      const int n = m - 1 - k;
      r.levels.push_back(Level{es.eigenvalues()(k), parity, n});
      r.eigenkets.emplace_back(space, std::move(v));
      tops[n] = es.eigenvalues()(k);
    }
  }
  const std::size_t np = std::min(top_even.size(), top_odd.size());
  for (std::size_t n = 0; n < np; ++n)
    r.pairs.push_back(LevelPair{static_cast<int>(n), top_even[n], top_odd[n],
                                top_even[n] - top_odd[n]});
  return r;
}

std::vector<double> eigenvalues_full(const SKParams& params,
                                     HilbertSpace space) {
  const Operator H = build_hamiltonian(params, space);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(H.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw EigsolverError("full diagonalization did not converge");
  return std::vector<double>(es.eigenvalues().data(),
                             es.eigenvalues().data() + space.dim());
}

GapResult excitation_gap(const SKParams& params, HilbertSpace space) {
  const SpectrumResult s = diagonalize(params, space);
  if (s.pairs.size() < 2) throw TruncationError("need at least two pairs");
  const auto& p0 = s.pairs[0];
  const auto& p1 = s.pairs[1];
  GapResult g;
  g.mean = 0.5 * ((p0.e_plus - p1.e_plus) + (p0.e_minus - p1.e_minus));
  g.nearest =
      std::min(p0.e_plus, p0.e_minus) - std::max(p1.e_plus, p1.e_minus);
  g.asymptotic = 4.0 * params.kerr * well_alpha2(params);
  return g;
}

// ------------------------------------------------------------ Bohr count

double bohr_count(const SKParams& params) {
  if (!(params.kerr > 0.0)) throw ParameterError("kerr must be > 0");
  return params.eps2 / (std::numbers::pi * params.kerr) -
         params.delta / (8.0 * params.kerr);
}

namespace {

struct ClassicalH {
  double delta, kerr, eps2;

  double value(double x, double p) const {
    const double r2 = x * x + p * p;
    return -0.5 * delta * r2 - 0.25 * kerr * r2 * r2 + eps2 * (x * x - p * p);
  }
  void grad(double x, double p, double& hx, double& hp) const {
    const double r2 = x * x + p * p;
    hx = -delta * x - kerr * r2 * x + 2.0 * eps2 * x;
    hp = -delta * p - kerr * r2 * p - 2.0 * eps2 * p;
  }
};

void require_lobes(const SKParams& params) {
  if (!(params.kerr > 0.0)) throw ParameterError("kerr must be > 0");
  if (!(params.eps2 > 0.5 * std::abs(params.delta)))
    throw NoWellError("no separatrix loop: need eps2 > |Delta|/2");
}

// Polygon area of the right lobe traced with step h.
double marched_area(const ClassicalH& H, double h, double start) {
  const double c = H.delta / (2.0 * H.eps2);
  const double theta0 = 0.5 * std::acos(c);
  double x = start * std::cos(theta0), p = -start * std::sin(theta0);

  auto project = [&](double& px, double& pp) {
    for (int it = 0; it < 6; ++it) {
      double gx, gp;
      H.grad(px, pp, gx, gp);
      const double g2 = gx * gx + gp * gp;
      const double f = H.value(px, pp);
      px -= f * gx / g2;
      pp -= f * gp / g2;
      if (std::abs(f) < 1e-15 * (1.0 + std::abs(H.eps2))) break;
    }
  };
  auto tangent = [&](double px, double pp, double ref_x, double ref_p,
                     double& tx, double& tp) {
    double gx, gp;
    H.grad(px, pp, gx, gp);
    const double g = std::hypot(gx, gp);
    tx = gp / g;
    tp = -gx / g;
    if (tx * ref_x + tp * ref_p < 0.0) {
      tx = -tx;
      tp = -tp;
    }
  };

  project(x, p);
  double tx, tp;
  tangent(x, p, x, p, tx, tp);  // initially point away from the saddle
  double area2 = 0.0;           // twice the signed area, origin as vertex
  double travelled = 0.0;
  const int max_steps = 50'000'000;
  for (int s = 0; s < max_steps; ++s) {
    // midpoint predictor along the level-set tangent, then projection
    double mx = x + 0.5 * h * tx, mp = p + 0.5 * h * tp;
    double mtx, mtp;
    tangent(mx, mp, tx, tp, mtx, mtp);
    double nx = x + h * mtx, np = p + h * mtp;
    project(nx, np);
    area2 += x * np - nx * p;
    travelled += h;
    double ntx, ntp;
    tangent(nx, np, mtx, mtp, ntx, ntp);
    x = nx;
    p = np;
    tx = ntx;
    tp = ntp;
    // Close on the saddle: the last chord to the origin lies along a
    // nearly straight branch, so the dropped sliver is O(h^3).
    if (travelled > 8.0 * h && std::hypot(x, p) < 2.0 * h &&
        x * tx + p * tp < 0.0)
      break;
    if (s + 1 == max_steps) throw ConvergenceError("separatrix march did not close");
  }
  return 0.5 * std::abs(area2);
}

}  // namespace

double lemniscate_area(const SKParams& params) {
  require_lobes(params);
  const ClassicalH H{params.delta, params.kerr, params.eps2};
  const double scale =
      std::sqrt(4.0 * (params.eps2 + 0.5 * std::abs(params.delta)) /
                params.kerr);
  const double start = 1e-5 * scale;
  const double h = 2e-4 * scale;
  const double a1 = marched_area(H, h, start);
  const double a2 = marched_area(H, 0.5 * h, start);
  return (4.0 * a2 - a1) / 3.0 / (2.0 * std::numbers::pi);
}

double lemniscate_area_exact(const SKParams& params) {
  require_lobes(params);
  const double c = params.delta / (2.0 * params.eps2);
  const double t = 0.5 * std::acos(c);
  return (params.eps2 * std::sin(2.0 * t) - params.delta * t) /
         (std::numbers::pi * params.kerr);
}

// ------------------------------------------------------------- kissing

double sigmoid_inflection(const std::vector<double>& x,
                          const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  if (n < 4 || static_cast<int>(y.size()) != n)
    throw ParameterError("need >= 4 matching samples for a spline");
  // natural cubic spline: solve for second derivatives M
  std::vector<double> h(n - 1), M(n, 0.0);
  for (int i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    if (!(h[i] > 0.0)) throw ParameterError("sweep must be increasing");
  }
  std::vector<double> diag(n, 1.0), upper(n, 0.0), lower(n, 0.0), rhs(n, 0.0);
  for (int i = 1; i + 1 < n; ++i) {
    lower[i] = h[i - 1];
    diag[i] = 2.0 * (h[i - 1] + h[i]);
    upper[i] = h[i];
    rhs[i] = 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]);
  }
  for (int i = 1; i < n; ++i) {  // Thomas algorithm
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  M[n - 1] = rhs[n - 1] / diag[n - 1];
  for (int i = n - 2; i >= 0; --i)
    M[i] = (rhs[i] - upper[i] * M[i + 1]) / diag[i];

  auto slope = [&](int i, double xx) {
    const double a = x[i + 1] - xx, b = xx - x[i];
    return -M[i] * a * a / (2.0 * h[i]) + M[i + 1] * b * b / (2.0 * h[i]) +
           (y[i + 1] - y[i]) / h[i] - h[i] * (M[i + 1] - M[i]) / 6.0;
  };

  // Ignore curvature at round-off level, e.g. from nearly linear data.
  double ymin = y[0], ymax = y[0];
  for (double v : y) {
    ymin = std::min(ymin, v);
    ymax = std::max(ymax, v);
  }
  const double tol =
      1e-9 * (ymax - ymin + 1e-300) / ((x[n - 1] - x[0]) * (x[n - 1] - x[0]));

  bool found = false;
  double best_x = 0.0, best_slope = 0.0;
  int last_neg = -1;
  for (int i = 0; i < n; ++i) {
    if (M[i] < -tol) {
      last_neg = i;
    } else if (M[i] > tol && last_neg >= 0) {
      // S'' is linear on each interval, so the root is exact
      int k = last_neg;
      while (k + 1 < i && M[k + 1] <= 0.0) ++k;
      const double xr = x[k] + h[k] * (-M[k]) / (M[k + 1] - M[k]);
      const double s = slope(k, xr);
      if (!found || s < best_slope) {
        found = true;
        best_x = xr;
        best_slope = s;
      }
      last_neg = -1;
    } else if (M[i] > tol) {
      last_neg = -1;
    }
  }
  if (!found || !(best_slope < 0.0))
    throw NotFoundError("no descending inflection inside the sweep");
  return best_x;
}

std::vector<KissingPoint> kissing_points(const std::vector<double>& sweep,
                                         const SKParams& templ, int n_pairs,
                                         HilbertSpace space) {
  if (n_pairs < 1) throw ParameterError("n_pairs must be >= 1");
  std::vector<std::vector<double>> split(n_pairs + 1,
                                         std::vector<double>(sweep.size()));
  for (std::size_t k = 0; k < sweep.size(); ++k) {
    SKParams p = templ;
    p.eps2 = sweep[k] * templ.kerr;
    const SpectrumResult s = diagonalize(p, space);
    if (static_cast<int>(s.pairs.size()) <= n_pairs)
      throw TruncationError("space holds too few pairs for the request");
    for (int n = 1; n <= n_pairs; ++n)
      split[n][k] = std::abs(s.pairs[n].delta) / templ.kerr;
  }
  std::vector<KissingPoint> out;
  for (int n = 1; n <= n_pairs; ++n)
    out.push_back(KissingPoint{n, sigmoid_inflection(sweep, split[n])});
  return out;
}

// ------------------------------------------------------------- no-jump

NoJumpWells nojump_wells(const SKParams& params, double kappa1,
                         double kappa2) {
  const double D = params.delta, K = params.kerr, e2 = params.eps2;
  if (e2 * e2 < 0.25 * (D * D + 0.25 * kappa1 * kappa1))
    throw BelowThresholdError("eps2 below the parametric threshold");
  const double kt2 = K * K + 0.25 * kappa2 * kappa2;  // |K~|^2
  const double skew = (K * kappa1 - D * kappa2) / (4.0 * kt2);
  const double arg = e2 * e2 / kt2 - skew * skew;
  if (arg < 0.0) throw BelowThresholdError("no real well solution");
  NoJumpWells w;
  w.alpha2 = (-D * K + 0.25 * kappa1 * kappa2) / (2.0 * kt2) + std::sqrt(arg);
  w.sin_2phi = (K * kappa1 - D * kappa2) / (4.0 * e2 * std::sqrt(kt2));
  return w;
}

FloquetComparison compare_floquet_effective(const CircuitParams& params,
                                            int order, HilbertSpace floquet_space,
                                            HilbertSpace heff_space, int n_levels) {
  if (n_levels < 2) throw ParameterError("n_levels must be at least 2");
  if (n_levels > heff_space.dim())
    throw SizeError("n_levels exceeds the H_eff dimension");
  const FloquetResult fl = floquet_spectrum(params, floquet_space, n_levels);

  const SKParams sk = to_sk_params(effective_coefficients(params, order));
  const Operator H = build_hamiltonian(sk, heff_space);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(H.matrix());
  if (es.info() != Eigen::Success) throw EigsolverError("H_eff diagonalization failed");
  const int d = heff_space.dim();
  std::vector<std::pair<double, double>> heff(d);
  for (int k = 0; k < d; ++k) {
    double nb = 0.0;
    for (int j = 0; j < d; ++j) nb += j * std::norm(es.eigenvectors()(j, k));
    heff[k] = {nb, es.eigenvalues()(k)};
  }
  std::sort(heff.begin(), heff.end());

  std::vector<std::pair<double, double>> flo;
  for (std::size_t k = 0; k < fl.quasienergies.size(); ++k)
    flo.push_back({fl.photon_numbers[k], fl.quasienergies[k]});
  std::sort(flo.begin(), flo.end());

  FloquetComparison out;
  for (int k = 0; k < n_levels; ++k) {
    out.floquet_photons.push_back(flo[k].first);
    out.heff_photons.push_back(heff[k].first);
  }
  for (int k = 0; k + 1 < n_levels; ++k) {
    const double gf = flo[k + 1].second - flo[k].second;
    const double gh = heff[k + 1].second - heff[k].second;
    out.floquet_gaps.push_back(gf);
    out.heff_gaps.push_back(gh);
    const double r = std::abs(gf - gh) / std::abs(gh);
    out.rel_error.push_back(r);
    out.max_rel_error = std::max(out.max_rel_error, r);
  }
  return out;
}

}  // namespace kerrlab
