#include <doctest.h>

#include <cmath>
#include <random>

#include "kerrlab/errors.hpp"
#include "kerrlab/lindblad.hpp"

using namespace kerrlab;

namespace {

SKParams sk(double eps2, double delta = 0.0) {
  SKParams p;
  p.eps2 = eps2;
  p.delta = delta;
  return p;
}

DensityMatrix random_state(HilbertSpace s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CMatrix m(s.dim(), s.dim());
  for (int i = 0; i < s.dim(); ++i)
    for (int j = 0; j < s.dim(); ++j) m(i, j) = Complex(g(rng), g(rng));
  CMatrix r = m * m.adjoint();
  r /= r.trace().real();
  return DensityMatrix(s, r);
}

Operator zero(HilbertSpace s) { return Operator(s, CMatrix::Zero(s.dim(), s.dim())); }

DissipationParams channel(double k1, double nth = 0.0, double kphi = 0.0) {
  DissipationParams d;
  d.kappa1 = k1;
  d.n_th = nth;
  d.kappa_phi = kphi;
  return d;
}

}  // namespace

TEST_CASE("Lindbladian is trace-free") {
  const HilbertSpace s(12);
  const auto H = build_hamiltonian(sk(1.5, 0.3), s);
  const auto L = lindbladian_apply(random_state(s, 1), H, channel(0.2, 0.3, 0.05));
  CHECK(std::abs(L.matrix().trace()) < 1e-12);
}

TEST_CASE("thermal state is the fixed point of the bare channel") {
  const HilbertSpace s(40);
  const auto rho = DensityMatrix::thermal(s, 0.2);
  const auto L = lindbladian_apply(rho, zero(s), channel(0.3, 0.2));
  CHECK(L.matrix().norm() < 1e-10);
}

TEST_CASE("pure dephasing law") {
  const HilbertSpace s(8);
  const auto rho = random_state(s, 2);
  const double kphi = 0.17;
  const auto L = lindbladian_apply(rho, zero(s), channel(0.0, 0.0, kphi));
  for (int m = 0; m < 8; ++m)
    for (int n = 0; n < 8; ++n) {
      const Complex expect = -0.5 * kphi * (m - n) * (m - n) * rho.matrix()(m, n);
      CHECK(std::abs(L(m, n) - expect) < 1e-14);
    }
}

TEST_CASE("closed evolution conserves energy") {
  const HilbertSpace s(30);
  const auto H = build_hamiltonian(sk(2.0, 0.2), s);
  const DensityMatrix rho(coherent(s, Complex(1.0, 0.4)));
  const auto tr = evolve(rho, H, DissipationParams{}, {0.0, 1.0, 3.0},
                         {{"H", H}});
  const auto& e = tr.series("H");
  for (double v : e) CHECK(v == doctest::Approx(e[0]).epsilon(1e-8));
  CHECK(tr.max_trace_drift < 1e-6);
  CHECK(tr.max_hermiticity_drift < 1e-8);
}

TEST_CASE("free cat parity and coherence decay") {
  const HilbertSpace s(40);
  const double a2 = 3.0, k1 = 0.1;
  const DensityMatrix rho(cat(s, std::sqrt(a2), CatParity::Even));
  const auto P = parity(s);

  // Initial slope of <P> is -2 kappa1 nbar.
  const double nbar = rho.expectation(number(s)).real();
  const auto dL = lindbladian_apply(rho, zero(s), channel(k1));
  CHECK(-(P.matrix() * dL.matrix()).trace().real() ==
        doctest::Approx(2.0 * k1 * nbar).epsilon(1e-10));

  // <P>(t) for the decaying cat: amplitudes shrink as alpha e^{-k t/2}, the
  // interference term as exp(-2|alpha|^2 (1 - e^{-k t})).
  std::vector<double> t;
  for (int k = 0; k <= 10; ++k) t.push_back(0.3 / k1 * k / 10.0);
  EvolveOptions opt;
  opt.integrator = Integrator::Adaptive;
  const auto tr = evolve(rho, zero(s), channel(k1), t, {{"P", P}}, opt);
  const double n2 = 1.0 / (2.0 * (1.0 + std::exp(-2.0 * a2)));
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double b2 = a2 * std::exp(-k1 * t[k]);
    const double c = std::exp(-2.0 * a2 * (1.0 - std::exp(-k1 * t[k])));
    const double expect = 2.0 * n2 * (std::exp(-2.0 * b2) + c);
    CHECK(tr.series("P")[k] == doctest::Approx(expect).epsilon(1e-6));
  }
  CHECK(tr.max_trace_drift < 1e-6);
  CHECK(tr.min_eigenvalue > -1e-6);
}

TEST_CASE("exact and adaptive integrators agree") {
  const HilbertSpace s(20);
  const auto H = build_hamiltonian(sk(2.0, -0.5), s);
  const auto d = channel(0.05, 0.1, 0.01);
  const DensityMatrix rho(coherent(s, 1.3));
  EvolveOptions a, e;
  a.integrator = Integrator::Adaptive;
  e.integrator = Integrator::Exact;
  const std::vector<double> t = {0.0, 0.7, 2.0, 5.0};
  const auto ta = evolve(rho, H, d, t, {{"n", number(s)}}, a);
  const auto te = evolve(rho, H, d, t, {{"n", number(s)}}, e);
  for (std::size_t k = 0; k < t.size(); ++k) {
    CHECK(ta.series("n")[k] == doctest::Approx(te.series("n")[k]).epsilon(1e-6));
    CHECK(ta.series("purity")[k] ==
          doctest::Approx(te.series("purity")[k]).epsilon(1e-6));
  }
}

TEST_CASE("parity blocks of the generator decouple") {
  const HilbertSpace s(14);
  const auto H = build_hamiltonian(sk(2.5, 0.4), s);
  const auto rho = random_state(s, 5).matrix();
  CMatrix even = rho;
  for (int m = 0; m < 14; ++m)
    for (int n = 0; n < 14; ++n)
      if ((m + n) % 2) even(m, n) = 0.0;
  const CMatrix out = lindbladian_apply(even, H.matrix(), channel(0.3, 0.2, 0.1));
  double leak = 0.0;
  for (int m = 0; m < 14; ++m)
    for (int n = 0; n < 14; ++n)
      if ((m + n) % 2) leak = std::max(leak, std::abs(out(m, n)));
  CHECK(leak < 1e-10);
}

TEST_CASE("superoperator matches the direct action") {
  const HilbertSpace s(8);
  const auto H = build_hamiltonian(sk(1.0, 0.2), s);
  const auto d = channel(0.4, 0.3, 0.2);
  const auto rho = random_state(s, 9);
  const CMatrix sup = superoperator(H, d);
  const CVector v = Eigen::Map<const CVector>(rho.matrix().data(), 64);
  const CVector lv = sup * v;
  const auto L = lindbladian_apply(rho, H, d);
  CHECK((Eigen::Map<const CMatrix>(lv.data(), 8, 8) - L.matrix()).norm() < 1e-12);
}

TEST_CASE("stratified samples") {
  const auto a = stratified_normal(0.5, 0.2, 33, 7);
  const auto b = stratified_normal(0.5, 0.2, 33, 7);
  CHECK(a == b);
  double mean = 0.0;
  for (double v : a) mean += v / 33.0;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.02));
  CHECK(stratified_normal(0.5, 0.0, 4, 1) == std::vector<double>(4, 0.5));
}

TEST_CASE("Gaussian detuning noise on a Fock qubit") {
  // eps2 = 0: X = 2 Re rho_01, and each sample gives e^{-k t/2} cos(Delta t).
  DissipationParams d = channel(0.02);
  d.sigma_delta = 0.01;
  d.n_samples = 33;
  d.seed = 4;
  const auto tr = coherent_lifetime(sk(0.0), d, HilbertSpace(6), 4.0);
  const auto deltas = stratified_normal(0.0, d.sigma_delta, d.n_samples, d.seed);
  const auto& x = tr.series("X");
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const double t = tr.times[k];
    double avg = 0.0;
    for (double dl : deltas) avg += std::cos(dl * t) / deltas.size();
    CHECK(std::abs(x[k] - std::exp(-0.5 * d.kappa1 * t) * avg) < 1e-6);
  }
  REQUIRE(tr.fit);
  std::vector<double> analytic;
  for (double t : tr.times)
    analytic.push_back(std::exp(-0.5 * d.kappa1 * t) *
                       std::exp(-0.5 * d.sigma_delta * d.sigma_delta * t * t));
  // 33 stratified draws approximate the continuous average to a few percent.
  const auto f = fit_exponential(tr.times, analytic);
  CHECK(tr.fit->T == doctest::Approx(f.T).epsilon(0.05));
}

TEST_CASE("thermal plateau of the well-flip time") {
  DissipationParams d = channel(0.025, 0.01);
  const auto tr = coherent_lifetime(sk(4.5), d, HilbertSpace(24), 500.0);
  REQUIRE(tr.fit);
  CHECK(tr.fit->T == doctest::Approx(4000.0).epsilon(0.25));
  CHECK(tr.max_trace_drift < 1e-6);
}

TEST_CASE("lifetime grows with eps2 at zero temperature") {
  DissipationParams d = channel(0.025);
  double previous = 0.0;
  for (double e2 : {0.3, 0.8, 1.3}) {
    const auto tr = coherent_lifetime(sk(e2), d, HilbertSpace(20), 50.0);
    REQUIRE(tr.fit);
    CHECK(tr.fit->T > previous);
    previous = tr.fit->T;
  }
}

TEST_CASE("full Lindbladian spectrum") {
  const SKParams p = sk(3.0);
  const auto d = channel(0.025, 0.01);
  const HilbertSpace s(18);
  const auto spec = lindbladian_spectrum_full(p, d, s);
  int zeros = 0;
  double max_re = -1.0;
  for (const auto& l : spec.eigenvalues) {
    if (std::abs(l) < 1e-9 * d.kappa1) ++zeros;
    max_re = std::max(max_re, l.real());
  }
  CHECK(zeros == 1);
  CHECK(max_re <= 1e-9 * d.kappa1);

  // Closed under conjugation.
  for (const auto& l : spec.eigenvalues) {
    double best = 1e300;
    for (const auto& m : spec.eigenvalues) best = std::min(best, std::abs(m - std::conj(l)));
    CHECK(best < 1e-9);
  }

  const auto tr = coherent_lifetime(p, d, s, 200.0);
  REQUIRE(tr.fit);
  CHECK(spec.T_X == doctest::Approx(tr.fit->T).epsilon(0.1));
  CHECK_THROWS_AS(lindbladian_spectrum_full(p, d, HilbertSpace(41)), SizeError);
}

TEST_CASE("two-level effective Lindbladian closed form") {
  const SKParams p = sk(6.0);
  const auto d = channel(0.025, 0.05);
  const HilbertSpace s(30);
  const auto spec = diagonalize(p, s);
  const Operator a = annihilation(s);
  const auto& up = spec.ket(+1, 0);
  const auto& um = spec.ket(-1, 0);
  const double A0 = 0.5 * (up.expectation(creation(s) * a).real() +
                           um.expectation(creation(s) * a).real());
  const Complex Bc = um.amplitudes().dot(a.matrix() * up.amplitudes()) *
                     um.amplitudes().dot(creation(s).matrix() * up.amplitudes());
  const double B = Bc.real();
  const double expect = 1.0 / (d.kappa1 * (1 + 2 * d.n_th) * (A0 - B) + d.kappa1 * d.n_th);

  const auto eff = eff_lindbladian(p, d, 1, s);
  CHECK(eff.A_n[0] >= 0.0);
  CHECK(eff.B(0, 0) == doctest::Approx(B).epsilon(1e-8));
  CHECK(eff.T_X_gamma == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("effective and full Lindbladians agree below the first kiss") {
  const auto d = channel(0.025, 0.01);
  const HilbertSpace s(26);
  for (double e2 : {2.0, 2.8}) {
    const auto full = lindbladian_spectrum_full(sk(e2), d, s);
    const auto eff = eff_lindbladian(sk(e2), d, 1, s);
    CHECK(eff.T_X_gamma == doctest::Approx(full.T_X).epsilon(0.1));
  }
}

TEST_CASE("choose_gamma counts small splittings from the ground pair") {
  const auto spec = diagonalize(sk(8.5), HilbertSpace(40));
  CHECK(choose_gamma(spec, 0.025) == 2);
  CHECK(choose_gamma(spec, 1e-20) == 1);
}
