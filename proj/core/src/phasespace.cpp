#include "kerrlab/phasespace.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "kerrlab/errors.hpp"

namespace kerrlab {
namespace {

// Phase-space functions cover the core H_SK; higher-order terms would need
// their own Weyl symbols.
void require_core(const SKParams& params) {
  validate(params);
  if (params.lambda != 0.0 || params.eps4 != 0.0 || params.eps2_prime != 0.0)
    throw ParameterError(
        "phase-space functions support Delta, K and eps2 only");
}

struct Gradient {
  double hx, hp;
};

// Classical Hamiltonian and its derivatives.
double h_classical(const SKParams& s, double x, double p) {
  const double r2 = x * x + p * p;
  return -0.5 * s.delta * r2 - 0.25 * s.kerr * r2 * r2 +
         s.eps2 * (x * x - p * p);
}

Gradient grad(const SKParams& s, double x, double p) {
  const double r2 = x * x + p * p;
  return {(-s.delta - s.kerr * r2 + 2.0 * s.eps2) * x,
          (-s.delta - s.kerr * r2 - 2.0 * s.eps2) * p};
}

// Sum of the magnitudes of the terms of H, the yardstick for relative drift.
double energy_scale(const SKParams& s, double x, double p) {
  const double r2 = x * x + p * p;
  return 0.5 * std::abs(s.delta) * r2 + 0.25 * s.kerr * r2 * r2 +
         s.eps2 * r2;
}

// Bound on the local linearized frequency.
double rate_bound(const SKParams& s, double r2) {
  return std::abs(s.delta) + 3.0 * s.kerr * r2 + 2.0 * s.eps2 + 1e-12;
}

double max_step(const SKParams& s, const ClassicalEnsemble& e,
                const LiouvilleOptions& opt) {
  double r2 = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i)
    r2 = std::max(r2, e.x[i] * e.x[i] + e.p[i] * e.p[i]);
  return opt.step_fraction * 2.0 * std::numbers::pi / rate_bound(s, r2);
}

void rk4_step(const SKParams& s, double& x, double& p, double h) {
  const auto f = [&](double xx, double pp) {
    const Gradient g = grad(s, xx, pp);
    return std::array<double, 2>{g.hp, -g.hx};
  };
  const auto k1 = f(x, p);
  const auto k2 = f(x + 0.5 * h * k1[0], p + 0.5 * h * k1[1]);
  const auto k3 = f(x + 0.5 * h * k2[0], p + 0.5 * h * k2[1]);
  const auto k4 = f(x + h * k3[0], p + h * k3[1]);
  x += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
  p += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
}

// 8th-order central stencils.
constexpr std::array<double, 4> kD1 = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0,
                                       -1.0 / 280.0};
constexpr double kD2Center = -205.0 / 72.0;
constexpr std::array<double, 4> kD2 = {8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0,
                                       -1.0 / 560.0};
constexpr int kHalf = 4;

// Derivative along rows (axis 0, x) or columns (axis 1, p). Points closer
// than kHalf to the edge are left at zero.
RMatrix diff(const RMatrix& w, int axis, int order, double h) {
  RMatrix out = RMatrix::Zero(w.rows(), w.cols());
  const int n = axis == 0 ? static_cast<int>(w.rows())
                          : static_cast<int>(w.cols());
  const auto at = [&](int k, int other) {
    return axis == 0 ? w(k, other) : w(other, k);
  };
  const int m = axis == 0 ? static_cast<int>(w.cols())
                          : static_cast<int>(w.rows());
  for (int o = 0; o < m; ++o) {
    for (int k = kHalf; k < n - kHalf; ++k) {
      double v = 0.0;
      if (order == 1) {
        for (int j = 1; j <= kHalf; ++j)
          v += kD1[j - 1] * (at(k + j, o) - at(k - j, o));
        v /= h;
      } else {
        v = kD2Center * at(k, o);
        for (int j = 1; j <= kHalf; ++j)
          v += kD2[j - 1] * (at(k + j, o) + at(k - j, o));
        v /= h * h;
      }
      if (axis == 0)
        out(k, o) = v;
      else
        out(o, k) = v;
    }
  }
  return out;
}

double interior_max_abs(const RMatrix& m, int margin) {
  const int r = static_cast<int>(m.rows()) - 2 * margin;
  const int c = static_cast<int>(m.cols()) - 2 * margin;
  if (r <= 0 || c <= 0) return 0.0;
  return m.block(margin, margin, r, c).cwiseAbs().maxCoeff();
}

void require_uniform(const std::vector<double>& v, int min_points,
                     const char* axis) {
  if (static_cast<int>(v.size()) < min_points) {
    std::ostringstream os;
    os << "finite differences need at least " << min_points
       << " points along " << axis;
    throw GridError(os.str());
  }
  const double h = v[1] - v[0];
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs((v[i] - v[i - 1]) - h) > 1e-9 * std::abs(h))
      throw GridError(std::string("non-uniform grid along ") + axis);
}

}  // namespace

double metapotential_at(const SKParams& params, double x, double p,
                        MetapotentialVariant variant) {
  const double h = h_classical(params, x, p);
  if (variant == MetapotentialVariant::Classical) return h;
  return h + params.kerr * (x * x + p * p);
}

MetapotentialSurface metapotential(const SKParams& params, const PhaseGrid& grid,
                                   MetapotentialVariant variant) {
  require_core(params);
  MetapotentialSurface s{grid,
                         RMatrix(grid.x.size(), grid.p.size()), variant};
  for (std::size_t i = 0; i < grid.x.size(); ++i)
    for (std::size_t j = 0; j < grid.p.size(); ++j)
      s.values(i, j) = metapotential_at(params, grid.x[i], grid.p[j], variant);
  return s;
}

ClassicalEnsemble gaussian_ensemble(const SKParams& params, double x0, double p0,
                                    double spread, int n, std::uint64_t seed) {
  require_core(params);
  if (n < 1 || !(spread >= 0.0))
    throw ParameterError("ensemble needs n >= 1 and spread >= 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ClassicalEnsemble e;
  e.x.resize(n);
  e.p.resize(n);
  e.energy.resize(n);
  for (int i = 0; i < n; ++i) {
    e.x[i] = x0 + spread * gauss(rng);
    e.p[i] = p0 + spread * gauss(rng);
    e.energy[i] = h_classical(params, e.x[i], e.p[i]);
  }
  return e;
}

double ensemble_anisotropy(const ClassicalEnsemble& e) {
  double xx = 0.0, pp = 0.0, xp = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    xx += e.x[i] * e.x[i];
    pp += e.p[i] * e.p[i];
    xp += e.x[i] * e.p[i];
  }
  const double total = xx + pp;
  if (total == 0.0) return 0.0;
  return std::hypot(xx - pp, 2.0 * xp) / total;
}

std::vector<ClassicalEnsemble> liouville_evolve(const ClassicalEnsemble& start,
                                                const SKParams& params,
                                                const std::vector<double>& t_grid,
                                                const LiouvilleOptions& options) {
  require_core(params);
  if (start.x.size() != start.p.size())
    throw ShapeError("ensemble x and p lengths differ");
  for (std::size_t k = 1; k < t_grid.size(); ++k)
    if (t_grid[k] < t_grid[k - 1])
      throw ParameterError("time grid must be non-decreasing");
  if (!t_grid.empty() && t_grid.front() < 0.0)
    throw ParameterError("time grid must start at or after 0");

  ClassicalEnsemble cur = start;
  cur.energy.resize(cur.size());
  std::vector<double> e0(cur.size()), scale(cur.size());
  for (std::size_t i = 0; i < cur.size(); ++i) {
    e0[i] = h_classical(params, cur.x[i], cur.p[i]);
    cur.energy[i] = e0[i];
    scale[i] = energy_scale(params, cur.x[i], cur.p[i]);
  }
  const double hmax = max_step(params, cur, options);

  std::vector<ClassicalEnsemble> out;
  out.reserve(t_grid.size());
  double t = 0.0;
  for (double target : t_grid) {
    const double span = target - t;
    if (span > 0.0) {
      const auto steps = static_cast<long>(std::ceil(span / hmax));
      const double h = span / static_cast<double>(steps);
      for (std::size_t i = 0; i < cur.size(); ++i)
        for (long k = 0; k < steps; ++k) rk4_step(params, cur.x[i], cur.p[i], h);
      t = target;
    }
    for (std::size_t i = 0; i < cur.size(); ++i) {
      cur.energy[i] = h_classical(params, cur.x[i], cur.p[i]);
      const double drift = std::abs(cur.energy[i] - e0[i]);
      if (drift > options.energy_tolerance * scale[i]) {
        std::ostringstream os;
        os << "classical energy drifted by " << drift / scale[i]
           << " (relative) at t = " << t;
        throw ToleranceError(os.str());
      }
    }
    out.push_back(cur);
  }
  return out;
}

Eigen::Matrix2d flow_jacobian(const SKParams& params, double x0, double p0,
                              double t, const LiouvilleOptions& options) {
  require_core(params);
  if (t < 0.0) throw ParameterError("flow time must be non-negative");
  using State = Eigen::Matrix<double, 6, 1>;  // x, p, J (column-major)
  const auto f = [&](const State& y) {
    const double x = y(0), p = y(1);
    const double r2 = x * x + p * p;
    const double hxx = -params.delta - params.kerr * (r2 + 2.0 * x * x) +
                       2.0 * params.eps2;
    const double hpp = -params.delta - params.kerr * (r2 + 2.0 * p * p) -
                       2.0 * params.eps2;
    const double hxp = -2.0 * params.kerr * x * p;
    Eigen::Matrix2d a;
    a << hxp, hpp, -hxx, -hxp;
    const Gradient g = grad(params, x, p);
    Eigen::Matrix2d j = Eigen::Map<const Eigen::Matrix2d>(y.data() + 2);
    State dy;
    dy(0) = g.hp;
    dy(1) = -g.hx;
    Eigen::Map<Eigen::Matrix2d>(dy.data() + 2) = a * j;
    return dy;
  };
  State y;
  y << x0, p0, 1.0, 0.0, 0.0, 1.0;
  const double r2 = x0 * x0 + p0 * p0;
  const double hmax =
      options.step_fraction * 2.0 * std::numbers::pi / rate_bound(params, r2);
  const long steps = std::max(1L, static_cast<long>(std::ceil(t / hmax)));
  const double h = t / static_cast<double>(steps);
  for (long k = 0; k < steps; ++k) {
    const State k1 = f(y);
    const State k2 = f(y + 0.5 * h * k1);
    const State k3 = f(y + 0.5 * h * k2);
    const State k4 = f(y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return Eigen::Map<const Eigen::Matrix2d>(y.data() + 2);
}

double moyal_rhs_check(const DensityMatrix& rho, const DissipationParams& diss,
                       const PhaseGrid& grid) {
  validate(diss);
  if (diss.kappa_phi != 0.0)
    throw ParameterError("the phase-space drift/diffusion form has no "
                         "dephasing term; set kappa_phi = 0");
  require_uniform(grid.x, 2 * kHalf + 1, "x");
  require_uniform(grid.p, 2 * kHalf + 1, "p");

  const WignerGrid w = wigner_of(rho, grid);  // also rejects coarse grids
  const Operator zero(rho.space(),
                      CMatrix::Zero(rho.dim(), rho.dim()));
  DissipationParams d = diss;
  d.sigma_delta = 0.0;
  const CMatrix lr = lindbladian_apply(rho.matrix(), zero.matrix(), d);
  const WignerGrid w_me =
      wigner_of(DensityMatrix::unchecked(rho.space(), lr), grid);

  const double hx = grid.dx(), hp = grid.dp();
  RMatrix xw = w.values, pw = w.values;
  for (std::size_t i = 0; i < grid.x.size(); ++i)
    for (std::size_t j = 0; j < grid.p.size(); ++j) {
      xw(i, j) *= grid.x[i];
      pw(i, j) *= grid.p[j];
    }
  const RMatrix drift = diff(xw, 0, 1, hx) + diff(pw, 1, 1, hp);
  const RMatrix lap = diff(w.values, 0, 2, hx) + diff(w.values, 1, 2, hp);
  const double a = 0.5 * diss.kappa1 * (1.0 + diss.n_th);
  const double b = 0.5 * diss.kappa1 * diss.n_th;
  const RMatrix rhs = (a - b) * drift + 0.5 * (a + b) * lap;

  const double residual = interior_max_abs(w_me.values - rhs, kHalf);
  const double norm = std::max(interior_max_abs(w_me.values, kHalf),
                               diss.kappa1 * w.max_abs());
  if (norm == 0.0) return residual;
  return residual / norm;
}

QuantumnessBudget quantumness_budget(const SKParams& params,
                                     const DissipationParams& diss,
                                     const DensityMatrix& rho,
                                     const PhaseGrid& grid) {
  require_core(params);
  validate(diss);
  require_uniform(grid.x, 4 * kHalf + 1, "x");
  require_uniform(grid.p, 4 * kHalf + 1, "p");
  const WignerGrid w = wigner_of(rho, grid);
  const double hx = grid.dx(), hp = grid.dp();

  const RMatrix wxx = diff(w.values, 0, 2, hx);
  const RMatrix wpp = diff(w.values, 1, 2, hp);
  const RMatrix wxxx = diff(wxx, 0, 1, hx);
  const RMatrix wppp = diff(wpp, 1, 1, hp);
  const RMatrix wxpp = diff(wpp, 0, 1, hx);
  const RMatrix wxxp = diff(wxx, 1, 1, hp);

  // Third derivatives of H: H_xxx = -6Kx, H_xxp = -2Kp, H_xpp = -2Kx,
  // H_ppp = -6Kp. Quadratic terms (Delta, eps2, Lamb shift) drop out.
  const double k = params.kerr;
  RMatrix third(w.values.rows(), w.values.cols());
  for (std::size_t i = 0; i < grid.x.size(); ++i)
    for (std::size_t j = 0; j < grid.p.size(); ++j) {
      const double x = grid.x[i], p = grid.p[j];
      third(i, j) = (-6.0 * k * x * wppp(i, j) + 6.0 * k * p * wxpp(i, j) -
                     6.0 * k * x * wxxp(i, j) + 6.0 * k * p * wxxx(i, j)) /
                    24.0;
    }
  QuantumnessBudget b;
  b.nonlinear_side = interior_max_abs(third, 2 * kHalf);
  b.dissipative_side =
      diss.kappa1 * std::max(interior_max_abs(wxx, kHalf),
                             interior_max_abs(wpp, kHalf));
  b.ratio = b.dissipative_side > 0.0
                ? b.nonlinear_side / b.dissipative_side
                : std::numeric_limits<double>::infinity();
  return b;
}

}  // namespace kerrlab
