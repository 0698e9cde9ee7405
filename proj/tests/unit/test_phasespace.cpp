#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kerrlab/errors.hpp"
#include "kerrlab/phasespace.hpp"

using namespace kerrlab;

namespace {

SKParams sk(double eps2, double delta = 0.0) {
  SKParams p;
  p.eps2 = eps2;
  p.delta = delta;
  return p;
}

ClassicalEnsemble single(const SKParams& s, double x, double p) {
  return gaussian_ensemble(s, x, p, 0.0, 1, 0);
}

}  // namespace

TEST_CASE("quantum and classical metapotentials differ by K r^2") {
  SKParams s = sk(2.3, -0.4);
  s.kerr = 1.7;
  const auto grid = PhaseGrid::square(4.0, 41);
  const auto q = metapotential(s, grid, MetapotentialVariant::Quantum);
  const auto c = metapotential(s, grid, MetapotentialVariant::Classical);
  for (std::size_t i = 0; i < grid.x.size(); ++i)
    for (std::size_t j = 0; j < grid.p.size(); ++j) {
      const double r2 = grid.x[i] * grid.x[i] + grid.p[j] * grid.p[j];
      CHECK(q.values(i, j) - c.values(i, j) ==
            doctest::Approx(s.kerr * r2).epsilon(1e-12));
    }
}

TEST_CASE("classical wells and barrier") {
  const SKParams s = sk(3.0);
  CHECK(metapotential_at(s, 0.0, 0.0, MetapotentialVariant::Classical) == 0.0);

  // Newton on the numerical gradient along p = 0, started off the root.
  const auto h = [&](double x) {
    return metapotential_at(s, x, 0.0, MetapotentialVariant::Classical);
  };
  double x = 2.0;
  for (int it = 0; it < 50; ++it) {
    const double e = 1e-4;
    const double d1 = (h(x + e) - h(x - e)) / (2 * e);
    const double d2 = (h(x + e) - 2 * h(x) + h(x - e)) / (e * e);
    x -= d1 / d2;
  }
  CHECK(x == doctest::Approx(std::sqrt(2.0 * s.eps2 / s.kerr)).epsilon(1e-8));
  CHECK(h(x) == doctest::Approx(s.eps2 * s.eps2 / s.kerr));

  // Transverse direction is also stationary.
  const double e = 1e-5;
  const double dp = (metapotential_at(s, x, e, MetapotentialVariant::Classical) -
                     metapotential_at(s, x, -e, MetapotentialVariant::Classical)) /
                    (2 * e);
  CHECK(std::abs(dp) < 1e-8);
}

TEST_CASE("phase-space functions reject higher-order terms") {
  SKParams s = sk(1.0);
  s.lambda = 0.01;
  CHECK_THROWS_AS(metapotential(s, PhaseGrid::square(2.0, 5),
                                MetapotentialVariant::Quantum),
                  ParameterError);
}

TEST_CASE("particle at a well top stays put") {
  const SKParams s = sk(2.0, 0.5);
  const double x0 = std::sqrt((2.0 * s.eps2 - s.delta) / s.kerr);
  const auto out = liouville_evolve(single(s, x0, 0.0), s, {5.0, 20.0});
  CHECK(std::abs(out.back().x[0] - x0) < 1e-10);
  CHECK(std::abs(out.back().p[0]) < 1e-10);
}

TEST_CASE("energy is conserved to 1e-6") {
  const SKParams s = sk(2.0, -0.3);
  const auto e0 = gaussian_ensemble(s, -2.0, 0.0, 0.6, 50, 7);
  const auto out = liouville_evolve(e0, s, {1.0, 10.0});
  for (std::size_t i = 0; i < e0.size(); ++i) {
    const double r2 = e0.x[i] * e0.x[i] + e0.p[i] * e0.p[i];
    const double scale = 0.15 * r2 + 0.25 * r2 * r2 + 2.0 * r2;
    CHECK(std::abs(out.back().energy[i] - e0.energy[i]) < 1e-6 * scale);
  }
}

TEST_CASE("coarse steps trip the energy audit") {
  const SKParams s = sk(2.0);
  LiouvilleOptions opt;
  opt.step_fraction = 0.6;
  CHECK_THROWS_AS(liouville_evolve(gaussian_ensemble(s, 2.5, 0.3, 0.5, 20, 1), s,
                                   {50.0}, opt),
                  ToleranceError);
}

TEST_CASE("Kerr-only angular velocity equals K r^2") {
  const SKParams s = sk(0.0);
  double previous = 0.0;
  for (double r : {0.8, 1.5, 2.5}) {
    const double dt = 1e-3;
    const auto out = liouville_evolve(single(s, r, 0.0), s, {dt});
    const double theta = std::atan2(out[0].p[0], out[0].x[0]);
    const double omega = theta / dt;
    CHECK(omega == doctest::Approx(s.kerr * r * r).epsilon(1e-6));
    CHECK(omega > previous);
    previous = omega;
  }
}

TEST_CASE("Kerr-only ensemble becomes a doughnut") {
  const SKParams s = sk(0.0);
  const auto e0 = gaussian_ensemble(s, -std::sqrt(2.0) * 2.0, 0.0, 0.5, 400, 3);
  const double a0 = ensemble_anisotropy(e0);
  const auto out = liouville_evolve(e0, s, {60.0});
  CHECK(a0 > 0.8);
  CHECK(ensemble_anisotropy(out.back()) < 0.05 * a0);
}

TEST_CASE("flow map is area preserving") {
  const SKParams s = sk(2.5, 0.4);
  for (auto [x, p] : {std::pair{1.0, 0.5}, {-2.1, 0.3}, {0.2, -1.7}}) {
    const auto j = flow_jacobian(s, x, p, 3.0);
    CHECK(j.determinant() == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("no separatrix crossing from inside a well") {
  const SKParams s = sk(3.0);
  auto e0 = gaussian_ensemble(s, std::sqrt(6.0), 0.0, 0.4, 100, 11);
  // Keep only particles strictly inside the right-hand loop (E above the
  // saddle value 0, x > 0).
  ClassicalEnsemble in;
  for (std::size_t i = 0; i < e0.size(); ++i)
    if (e0.energy[i] > 0.05 && e0.x[i] > 0) {
      in.x.push_back(e0.x[i]);
      in.p.push_back(e0.p[i]);
      in.energy.push_back(e0.energy[i]);
    }
  REQUIRE(in.size() > 20);
  std::vector<double> t;
  for (int k = 1; k <= 40; ++k) t.push_back(0.5 * k);
  for (const auto& snap : liouville_evolve(in, s, t))
    for (double x : snap.x) CHECK(x > 0.0);
}

TEST_CASE("dissipative Wigner flow matches the master equation") {
  const auto grid = PhaseGrid::square(6.0, 201);
  DissipationParams d;
  d.kappa1 = 0.3;

  const DensityMatrix vac(fock_state(HilbertSpace(20), 0));
  CHECK(moyal_rhs_check(vac, d, grid) < 1e-6);

  DissipationParams th = d;
  th.n_th = 0.4;
  CHECK(moyal_rhs_check(vac, th, grid) < 0.02);

  const DensityMatrix coh(coherent(HilbertSpace(30), Complex(1.2, 0.5)));
  CHECK(moyal_rhs_check(coh, d, grid) < 0.02);
  CHECK(moyal_rhs_check(coh, th, grid) < 0.02);
}

TEST_CASE("Wigner flow check guards") {
  const DensityMatrix vac(fock_state(HilbertSpace(10), 0));
  DissipationParams d;
  d.kappa1 = 0.1;
  CHECK_THROWS_AS(moyal_rhs_check(vac, d, PhaseGrid::square(6.0, 7)), GridError);
  CHECK_THROWS_AS(moyal_rhs_check(vac, d, PhaseGrid::square(6.0, 21)), GridError);
  d.kappa_phi = 0.01;
  CHECK_THROWS_AS(moyal_rhs_check(vac, d, PhaseGrid::square(6.0, 101)),
                  ParameterError);
}

TEST_CASE("quantumness budget") {
  const SKParams s = sk(4.0);
  const auto grid = PhaseGrid::square(6.0, 161);
  DissipationParams d;
  d.kappa1 = 0.01;

  const DensityMatrix vac(fock_state(HilbertSpace(20), 0));
  const auto g = quantumness_budget(s, d, vac, grid);
  CHECK(g.nonlinear_side < 1e-6 * g.dissipative_side / d.kappa1);

  const DensityMatrix c(cat(HilbertSpace(40), 2.0, CatParity::Even));
  const auto b1 = quantumness_budget(s, d, c, grid);
  CHECK(b1.ratio > 1.0);
  DissipationParams d2 = d;
  d2.kappa1 = 2.0 * d.kappa1;
  const auto b2 = quantumness_budget(s, d2, c, grid);
  CHECK(b2.dissipative_side == 2.0 * b1.dissipative_side);
  CHECK(b2.nonlinear_side == b1.nonlinear_side);
}
