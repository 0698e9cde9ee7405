#include "kerrlab/effham.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kerrlab/errors.hpp"

namespace kerrlab {

namespace {

OrderTerms terms(std::vector<double> pieces, double pi2) {
  OrderTerms t;
  double w = 1.0;
  for (double v : pieces) {
    t.total += v * w;
    w *= pi2;
  }
  t.pieces = std::move(pieces);
  return t;
}

}  // namespace

std::vector<std::string> validate(const CircuitParams& params) {
  if (!(params.omega_o > 0.0)) throw ParameterError("omega_o must be > 0");
  if (!(params.omega_d > 0.0)) throw ParameterError("omega_d must be > 0");
  std::vector<std::string> warnings;
  const double gs[] = {params.g3, params.g4, params.g5, params.g6};
  for (int m = 0; m < 4; ++m) {
    const double ratio = std::abs(gs[m]) / params.omega_o;
    if (ratio >= 0.2) {
      std::ostringstream os;
      os << "|g" << m + 3 << "|/omega_o = " << ratio << " is not small";
      throw ParameterError(os.str());
    }
    if (ratio > 0.05) {
      std::ostringstream os;
      os << "|g" << m + 3 << "|/omega_o = " << ratio
         << " exceeds 0.05; expansion may be inaccurate";
      warnings.push_back(os.str());
    }
  }
  if (params.g3 != 0.0 && std::abs(params.detuning()) > std::abs(params.g3)) {
    warnings.push_back("|omega_d/2 - omega_o| exceeds |g3|");
  }
  return warnings;
}

double displacement_amplitude(const CircuitParams& params) {
  if (!(params.omega_d > 0.0)) throw ParameterError("omega_d must be > 0");
  return 4.0 * params.Omega_d / (3.0 * params.omega_d);
}

EffectiveCoefficients effective_coefficients(const CircuitParams& params,
                                             int order) {
  if (order < 1 || order > 4)
    throw OrderError("expansion order must be 1..4, got " +
                     std::to_string(order));
  const double wa = params.shifted_frequency();
  const double g3 = params.g3, g4 = params.g4, g5 = params.g5, g6 = params.g6;
  const double absPi = displacement_amplitude(params);
  const Complex Pi = std::polar(absPi, params.drive_phase);
  const double pi2 = absPi * absPi;

  EffectiveCoefficients c;
  c.order = order;
  c.Pi = Pi;

  c.Delta_by_order[1] = terms({params.detuning()}, pi2);
  c.K_by_order[1] = terms({0.0}, pi2);
  c.eps2_by_order[1] = g3 * Pi;

  if (order >= 2) {
    c.Delta_by_order[2] = terms({-(3.0 * g4 + 10.0 / 3.0 * g3 * g3 / wa),
                                 -(6.0 * g4 + 4.5 * g3 * g3 / wa)},
                                pi2);
    c.K_by_order[2] = terms({-(1.5 * g4 + 5.0 / 3.0 * g3 * g3 / wa)}, pi2);
    c.eps2_by_order[2] = 0.0;
  }
  if (order >= 3) {
    c.Delta_by_order[3] = terms({0.0}, pi2);
    c.K_by_order[3] = terms({0.0}, pi2);
    c.eps2_by_order[3] =
        (6.0 * g5 + 141.0 / 20.0 * g3 * g4 / wa) * pi2 * std::conj(Pi) +
        (6.0 * g5 + 63.0 / 8.0 * g3 * g4 / wa) * Pi;
    c.eps2_prime = (4.0 * g5 + 21.0 / 4.0 * g3 * g4 / wa) * Pi;
  }
  if (order >= 4) {
    const double wa2 = wa * wa, wa3 = wa2 * wa;
    const double g33 = g3 * g3, g3_4 = g33 * g33;
    c.Delta_by_order[4] = terms(
        {-(15.0 * g6 + 9.0 * g4 * g4 / wa + 110.0 / 3.0 * g3 * g5 / wa +
           47.0 * g33 * g4 / wa2 - 6269.0 / 324.0 * g3_4 / wa3),
         -(60.0 * g6 + 54.0 / 5.0 * g4 * g4 / wa + 116.0 * g3 * g5 / wa +
           671.0 / 10.0 * g33 * g4 / wa2 + 113.0 / 360.0 * g3_4 / wa3),
         -(30.0 * g6 - 4.5 * g4 * g4 / wa + 322.0 / 5.0 * g3 * g5 / wa +
           15113.0 / 600.0 * g33 * g4 / wa2 -
           297947.0 / 32400.0 * g3_4 / wa3)},
        pi2);
    c.K_by_order[4] = terms(
        {-(15.0 * g6 + 153.0 / 16.0 * g4 * g4 / wa + 42.0 * g3 * g5 / wa +
           225.0 / 4.0 * g33 * g4 / wa2 + 805.0 / 36.0 * g3_4 / wa3),
         -(30.0 * g6 + 27.0 / 5.0 * g4 * g4 / wa + 58.0 * g3 * g5 / wa +
           671.0 / 20.0 * g33 * g4 / wa2 + 113.0 / 720.0 * g3_4 / wa3)},
        pi2);
    c.lambda4 = -(10.0 / 6.0 * g6 + 17.0 / 8.0 * g4 * g4 / wa +
                  28.0 / 3.0 * g3 * g5 / wa + 12.5 * g33 * g4 / wa2 +
                  805.0 / 162.0 * g3_4 / wa3);
    c.eps4 = (2.5 * g6 + 33.0 / 8.0 * g4 * g4 / wa - g3 * g5 / (15.0 * wa) -
              101.0 / 96.0 * g33 * g4 / wa2 - 2009.0 / 1296.0 * g3_4 / wa3) *
             Pi * Pi;
    c.eps2_by_order[4] = 0.0;
  }

  for (const auto& [n, t] : c.Delta_by_order) c.total_Delta += t.total;
  for (const auto& [n, t] : c.K_by_order) c.total_K += t.total;
  for (const auto& [n, e] : c.eps2_by_order) c.total_eps2 += e;
  return c;
}

double leading_order_kerr_alternative(const CircuitParams& params) {
  const double wa = params.shifted_frequency();
  return -1.5 * params.g4 + 10.0 * params.g3 * params.g3 / (3.0 * wa);
}

double ncrit(double M, double p, double phi_zps) {
  if (!(p > 0.0) || !(phi_zps > 0.0))
    throw ParameterError("ncrit needs p > 0 and phi_zps > 0");
  return 15.0 * M * M / (p * p * phi_zps * phi_zps);
}

// ------------------------------------------------------------------ Floquet

namespace {

class RotatingFrameHamiltonian {
 public:
  RotatingFrameHamiltonian(const CircuitParams& params, HilbertSpace space)
      : p_(params),
        a_(annihilation(space).matrix()),
        n_(number(space).matrix()),
        Pi_(std::polar(displacement_amplitude(params), params.drive_phase)) {
    g_[0] = params.g3 / 3.0;
    g_[1] = params.g4 / 4.0;
    g_[2] = params.g5 / 5.0;
    g_[3] = params.g6 / 6.0;
    top_ = 0;
    for (int m = 0; m < 4; ++m)
      if (g_[m] != 0.0) top_ = m + 1;
  }

  CMatrix at(double t) const {
    const double w = p_.omega_d;
    const Complex ph = std::polar(1.0, -0.5 * w * t);
    const double c = 2.0 * (Pi_ * std::polar(1.0, -w * t)).real();
    CMatrix x = a_ * ph + a_.adjoint() * std::conj(ph);
    x.diagonal().array() += c;
    CMatrix h = -p_.detuning() * n_;
    if (top_ == 0) return h;
    CMatrix pw = x * x;  // x^2
    for (int m = 0; m < top_; ++m) {
      pw = pw * x;  // x^(m+3)
      if (g_[m] != 0.0) h += g_[m] * pw;
    }
    return h;
  }

 private:
  CircuitParams p_;
  CMatrix a_;
  CMatrix n_;
  Complex Pi_;
  double g_[4];
  int top_;
};

CMatrix monodromy(const RotatingFrameHamiltonian& H, double period, int steps) {
  const int d = static_cast<int>(H.at(0.0).rows());
  const Complex mi(0.0, -1.0);
  CMatrix u = CMatrix::Identity(d, d);
  const double h = period / steps;
  for (int s = 0; s < steps; ++s) {
    const double t = s * h;
    const CMatrix h0 = H.at(t);
    const CMatrix hm = H.at(t + 0.5 * h);
    const CMatrix h1 = H.at(t + h);
    const CMatrix k1 = mi * (h0 * u);
    const CMatrix k2 = mi * (hm * (u + 0.5 * h * k1));
    const CMatrix k3 = mi * (hm * (u + 0.5 * h * k2));
    const CMatrix k4 = mi * (h1 * (u + h * k3));
    u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return u;
}

FloquetResult analyze(const CMatrix& u, double period, int n_levels) {
  Eigen::ComplexEigenSolver<CMatrix> es(u);
  if (es.info() != Eigen::Success)
    throw EigsolverError("monodromy diagonalization failed");
  const int d = static_cast<int>(u.rows());
  std::vector<double> eps(d), nbar(d);
  for (int j = 0; j < d; ++j) {
    eps[j] = -std::arg(es.eigenvalues()(j)) / period;
    const CVector v = es.eigenvectors().col(j);
    double nn = 0.0;
    for (int k = 0; k < d; ++k) nn += k * std::norm(v(k));
    nbar[j] = nn / v.squaredNorm();
  }
  std::vector<int> idx(d);
  for (int j = 0; j < d; ++j) idx[j] = j;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return nbar[a] < nbar[b]; });
  const int keep = std::min(n_levels, d);
  const double zone = 2.0 * std::numbers::pi / period;
  const double ref = eps[idx[0]];
  std::vector<std::pair<double, double>> sel;
  for (int j = 0; j < keep; ++j) {
    double e = eps[idx[j]] - ref;
    e -= zone * std::round(e / zone);
    sel.emplace_back(ref + e, nbar[idx[j]]);
  }
  std::sort(sel.begin(), sel.end());
  FloquetResult r;
  for (const auto& [e, n] : sel) {
    r.quasienergies.push_back(e);
    r.photon_numbers.push_back(n);
  }
  for (std::size_t j = 1; j < r.quasienergies.size(); ++j)
    r.gaps.push_back(r.quasienergies[j] - r.quasienergies[j - 1]);
  return r;
}

}  // namespace

FloquetResult floquet_spectrum(const CircuitParams& params, HilbertSpace space,
                               int n_levels, FloquetOptions options) {
  if (n_levels < 2) throw ParameterError("n_levels must be >= 2");
  if (!(params.omega_d > 0.0)) throw ParameterError("omega_d must be > 0");
  const RotatingFrameHamiltonian H(params, space);
  const double period = 4.0 * std::numbers::pi / params.omega_d;
  int steps = std::max(options.steps_per_period, 16);
  FloquetResult prev = analyze(monodromy(H, period, steps), period, n_levels);
  prev.steps_per_period = steps;
  const double floor = 1e-12 * params.omega_d;
  for (int k = 0; k < options.max_doublings; ++k) {
    steps *= 2;
    FloquetResult cur = analyze(monodromy(H, period, steps), period, n_levels);
    cur.steps_per_period = steps;
    bool ok = cur.gaps.size() == prev.gaps.size();
    for (std::size_t j = 0; ok && j < cur.gaps.size(); ++j) {
      const double scale = std::max(std::abs(cur.gaps[j]), floor);
      ok = std::abs(cur.gaps[j] - prev.gaps[j]) <= options.rel_tol * scale;
    }
    if (ok) return cur;
    prev = std::move(cur);
  }
  throw ConvergenceError("quasienergy gaps not stable after " +
                         std::to_string(options.max_doublings) +
                         " step doublings");
}

std::vector<double> floquet_quasienergies(const CircuitParams& params,
                                          HilbertSpace space, int n_levels) {
  return floquet_spectrum(params, space, n_levels).gaps;
}

}  // namespace kerrlab
