#include <cmath>
#include <numbers>
#include <sstream>

#include "kerrlab/errors.hpp"
#include "kerrlab/fock.hpp"

namespace kerrlab {

namespace {

// Sum over rho_mn of the displaced-parity matrix elements, generated by the
// Laguerre three-term recurrence in scaled form (no overflow for large m).
double wigner_point(const CMatrix& rho, const std::vector<double>& sq,
                    std::vector<Complex>& wl, double x, double p) {
  const int dim = static_cast<int>(rho.rows());
  const Complex a = Complex(x, p) / std::numbers::sqrt2;
  const Complex two_a = 2.0 * a;
  const Complex two_ac = 2.0 * std::conj(a);

  wl[0] = std::exp(-2.0 * std::norm(a)) / std::numbers::pi;
  double w = rho(0, 0).real() * wl[0].real();
  for (int n = 1; n < dim; ++n) {
    wl[n] = two_a * wl[n - 1] / sq[n];
    w += 2.0 * (rho(0, n) * wl[n]).real();
  }
  for (int m = 1; m < dim; ++m) {
    Complex temp = wl[m];
    wl[m] = (two_ac * temp - sq[m] * wl[m - 1]) / sq[m];
    w += (rho(m, m) * wl[m]).real();
    for (int n = m + 1; n < dim; ++n) {
      const Complex next = (two_a * wl[n - 1] - sq[m] * temp) / sq[n];
      temp = wl[n];
      wl[n] = next;
      w += 2.0 * (rho(m, n) * wl[n]).real();
    }
  }
  return w;
}

std::vector<double> sqrt_table(int dim) {
  std::vector<double> sq(dim + 1);
  for (int n = 0; n <= dim; ++n) sq[n] = std::sqrt(double(n));
  return sq;
}

double step_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  return (v.back() - v.front()) / double(v.size() - 1);
}

}  // namespace

PhaseGrid PhaseGrid::uniform(double x_min, double x_max, int nx, double p_min,
                             double p_max, int np) {
  if (nx < 2 || np < 2 || !(x_max > x_min) || !(p_max > p_min))
    throw GridError("phase grid needs at least 2 points per axis and a "
                    "positive extent");
  PhaseGrid g;
  g.x.resize(nx);
  g.p.resize(np);
  for (int i = 0; i < nx; ++i)
    g.x[i] = x_min + (x_max - x_min) * double(i) / double(nx - 1);
  for (int j = 0; j < np; ++j)
    g.p[j] = p_min + (p_max - p_min) * double(j) / double(np - 1);
  return g;
}

PhaseGrid PhaseGrid::square(double extent, int n) {
  return uniform(-extent, extent, n, -extent, extent, n);
}

double PhaseGrid::dx() const { return step_of(x); }
double PhaseGrid::dp() const { return step_of(p); }

double WignerGrid::integral() const {
  const int nx = static_cast<int>(grid.x.size());
  const int np = static_cast<int>(grid.p.size());
  double s = 0.0;
  for (int i = 0; i < nx; ++i) {
    const double wi = (i == 0 || i == nx - 1) ? 0.5 : 1.0;
    for (int j = 0; j < np; ++j) {
      const double wj = (j == 0 || j == np - 1) ? 0.5 : 1.0;
      s += wi * wj * values(i, j);
    }
  }
  return s * grid.dx() * grid.dp();
}

double WignerGrid::max_abs() const { return values.cwiseAbs().maxCoeff(); }

double min_fringe_period(double nbar) {
  return std::numbers::pi / std::sqrt(2.0 * (std::max(nbar, 0.0) + 1.0));
}

WignerGrid wigner_of(const DensityMatrix& rho, const PhaseGrid& grid) {
  if (grid.x.size() < 2 || grid.p.size() < 2)
    throw GridError("Wigner grid needs at least 2 points per axis");
  const double nbar = rho.expectation(number(rho.space())).real();
  const double limit = 0.25 * min_fringe_period(nbar);
  if (grid.dx() > limit || grid.dp() > limit) {
    std::ostringstream os;
    os << "grid step (" << grid.dx() << ", " << grid.dp()
       << ") too coarse for fringes of period " << 4.0 * limit;
    throw GridError(os.str());
  }
  const CMatrix& m = rho.matrix();
  const auto sq = sqrt_table(rho.dim());
  std::vector<Complex> wl(rho.dim());
  WignerGrid out{grid, RMatrix(grid.x.size(), grid.p.size())};
  for (std::size_t i = 0; i < grid.x.size(); ++i)
    for (std::size_t j = 0; j < grid.p.size(); ++j)
      out.values(i, j) = wigner_point(m, sq, wl, grid.x[i], grid.p[j]);
  return out;
}

double wigner_at(const DensityMatrix& rho, double x, double p) {
  const auto sq = sqrt_table(rho.dim());
  std::vector<Complex> wl(rho.dim());
  return wigner_point(rho.matrix(), sq, wl, x, p);
}

}  // namespace kerrlab
