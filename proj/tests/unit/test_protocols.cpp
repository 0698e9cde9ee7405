#include <doctest.h>

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <numbers>

#include "kerrlab/errors.hpp"
#include "kerrlab/protocols.hpp"

using namespace kerrlab;

namespace {

SKParams sk(double eps2, double delta = 0.0) {
  SKParams p;
  p.eps2 = eps2;
  p.delta = delta;
  return p;
}

double gaussian_tail(double z) {
  return boost::math::cdf(boost::math::complement(boost::math::normal(), z));
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) v[k] = a + (b - a) * k / (n - 1);
  return v;
}

}  // namespace

TEST_CASE("parity-less cat photon number") {
  for (double a2 : {0.05, 0.7, 2.0, 6.0}) {
    const double r = cat_ratio(std::sqrt(a2));
    CHECK(nbar_ys(a2) == doctest::Approx(0.5 * a2 * (r * r + 1.0 / (r * r))));
    CHECK(nbar_ys(a2) == doctest::Approx(meridian_nbar(a2)));
  }
  CHECK(nbar_ys(0.0) == 0.5);
  CHECK(nbar_ys(1e-9) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(nbar_ys(1e-3) == doctest::Approx(0.5 + 2.0 / 3.0 * 1e-6).epsilon(1e-10));
}

TEST_CASE("cat Rabi frequency") {
  CHECK(rabi_frequency(0.0, 2.0) == 0.0);
  const Complex ex(0.3, -0.1);
  CHECK(rabi_frequency(ex, 0.0) ==
        doctest::Approx((4.0 * ex / std::sqrt(2.0)).real()));
  const Complex alpha = std::polar(3.0, 0.4);
  CHECK(rabi_frequency(ex, alpha) ==
        doctest::Approx((4.0 * ex * std::conj(alpha)).real()).epsilon(1e-12));

  // One formula, no jump between the small- and large-alpha limits.
  double prev = rabi_frequency(ex, 1e-6);
  for (double a = 1e-3; a < 3.0; a += 1e-3) {
    const double w = rabi_frequency(ex, a);
    CHECK(std::abs(w - prev) < 1e-2);
    prev = w;
  }
}

TEST_CASE("Rabi speed limit") {
  CHECK(rabi_speed_limit(sk(4.0), 0.0) == doctest::Approx(128.0));
  CHECK(rabi_speed_limit(sk(16.0), 0.0) ==
        doctest::Approx(8.0 * rabi_speed_limit(sk(4.0), 0.0)));
  CHECK(rabi_speed_limit(sk(4.0), 2.0) ==
        doctest::Approx(std::sqrt(2.0) * rabi_speed_limit(sk(4.0), 0.0)));
}

TEST_CASE("free Kerr revival and parity-less cat") {
  const HilbertSpace s(60);
  const SKParams p = sk(0.0);
  for (Complex alpha : {Complex(1.7, 0.0), std::polar(2.5, 0.3)}) {
    const auto tr = free_kerr_evolve(alpha, p, DissipationParams{},
                                     {0.0, kerr_gate_time(1.0), std::numbers::pi},
                                     s);
    CHECK(tr.series("return")[2] == doctest::Approx(1.0).epsilon(1e-8));
    const CVector psi = tr.states[1].col(0) / tr.states[1].col(0).norm();
    // The n(n-1) phase is n^2 phase times e^{-i pi n/2}: the legs sit at
    // beta = -i alpha, and the state is |beta> - i|-beta> up to normalization.
    const Complex beta = Complex(0.0, -1.0) * alpha;
    double best = 0.0;
    for (double phi : {std::numbers::pi / 2, -std::numbers::pi / 2}) {
      const CVector c = coherent(s, beta).amplitudes() +
                        std::polar(1.0, phi) * coherent(s, -beta).amplitudes();
      best = std::max(best, std::abs(c.normalized().dot(psi)));
    }
    CHECK(best == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(tr.series("parity")[1] == doctest::Approx(tr.series("parity")[0]));
  }
  CHECK(kerr_gate_time(2.0) == doctest::Approx(std::numbers::pi / 4.0));
  CHECK_THROWS_AS(free_kerr_evolve(1.0, sk(1.0), {}, {0.0}, s), ParameterError);
}

TEST_CASE("free Kerr revival contrast falls with cat size") {
  DissipationParams d;
  d.kappa1 = 0.01;
  d.n_th = 0.05;
  double prev = 1.0;
  for (double a2 : {1.0, 2.0, 4.0}) {
    const auto tr = free_kerr_evolve(std::sqrt(a2), sk(0.0), d,
                                     {0.0, std::numbers::pi}, HilbertSpace(30));
    const double contrast = tr.series("return")[1];
    CHECK(contrast < prev);
    prev = contrast;
  }
}

TEST_CASE("cat Rabi oscillation rate and damping") {
  DissipationParams d;
  d.kappa1 = 0.01;
  for (double a2 : {5.0, 6.0}) {
    const double tyz = 1.0 / (2.0 * d.kappa1 * meridian_nbar(a2));
    const Complex ex = 0.2;
    const auto r = cat_rabi_trace(sk(a2), d, ex, linspace(0.0, 2.5 * tyz, 160),
                                  HilbertSpace(26));
    CHECK(r.omega == doctest::Approx(rabi_frequency(ex, std::sqrt(a2))).epsilon(0.02));
    CHECK(r.T_YZ == doctest::Approx(tyz).epsilon(0.1));
    CHECK(r.trajectory.max_trace_drift < 1e-6);
  }
  CHECK_THROWS_AS(cat_rabi_trace(sk(5.0), d, 0.0, linspace(0.0, 10.0, 20),
                                 HilbertSpace(26)),
                  FitError);
}

TEST_CASE("readout SNR limits") {
  ReadoutParams ro;
  ro.g_bs = Complex(0.0, 0.8);
  ro.kappa_r = 2.0;
  ro.eta = 0.4;
  const Complex alpha = 1.5;
  const double pref = 32.0 * ro.eta * std::norm(ro.g_bs * alpha) / (ro.kappa_r * ro.kappa_r);

  ro.tau = 0.0;
  CHECK(readout_snr(ro, alpha) == 0.0);
  ro.tau = 0.05 / ro.kappa_r;
  CHECK(readout_snr(ro, alpha) ==
        doctest::Approx(pref * std::pow(0.05, 3) / 12.0).epsilon(0.01));
  // Long pulses: the bracket approaches x - 3, so SNR/x reaches its limit
  // within 1% only near x = 300.
  ro.tau = 50.0 / ro.kappa_r;
  CHECK(readout_snr(ro, alpha) == doctest::Approx(pref * 47.0).epsilon(1e-9));
  ro.tau = 300.0 / ro.kappa_r;
  CHECK(readout_snr(ro, alpha) / 300.0 == doctest::Approx(pref).epsilon(0.01));

  // The series and closed-form branches of the bracket meet smoothly.
  ro.tau = 0.4999999 / ro.kappa_r;
  const double below = readout_snr(ro, alpha);
  ro.tau = 0.5000001 / ro.kappa_r;
  CHECK(readout_snr(ro, alpha) == doctest::Approx(below).epsilon(1e-5));

  CHECK(weak_readout_ratio(ro, 1.0, alpha) ==
        doctest::Approx(0.64 / (2.0 * 1.5 * 2.0)));
  ro.eta = 0.0;
  CHECK_THROWS_AS(readout_snr(ro, alpha), ParameterError);
}

namespace {

// SNR from a chosen coupling with kappa_r tau = 50.
ReadoutParams readout_for(double snr_target) {
  ReadoutParams ro;
  ro.kappa_r = 1.0;
  ro.tau = 50.0;
  ro.g_bs = Complex(0.0, 1.0);
  const double unit = readout_snr(ro, 1.0);
  ro.g_bs *= std::sqrt(snr_target / unit);
  return ro;
}

}  // namespace

TEST_CASE("readout fidelity against the Gaussian overlap") {
  const auto ro = readout_for(25.0);
  const int shots = 40000;
  const auto sim = readout_record_sim(INFINITY, ro, 1.0, shots, 1, 3);
  CHECK(sim.snr == doctest::Approx(25.0));
  const double p = gaussian_tail(std::sqrt(25.0 / 2.0));
  const double expect = 1.0 - 2.0 * p;
  const double mc = 2.0 * std::sqrt(p * (1.0 - p) / (shots / 2.0));
  CHECK(std::abs(sim.fidelity - expect) < 4.0 * mc + 1e-12);
  for (std::size_t i = 0; i < sim.record.outcomes.size(); ++i)
    CHECK(sim.record.outcomes[i].label ==
          (sim.record.outcomes[i].I >= sim.record.threshold ? 1 : -1));
}

TEST_CASE("readout QNDness from well flips") {
  const auto ro = readout_for(1e6);
  const double T = 400.0;  // tau / T = 1/8
  const int shots = 5000, repeats = 10;
  const auto sim = readout_record_sim(T, ro, 1.0, shots, repeats, 8);
  const double q = 0.5 * (1.0 + std::exp(-ro.tau / T));
  const double mc = std::sqrt(q * (1 - q) / (shots * (repeats - 1.0)));
  CHECK(std::abs(sim.qndness - q) < 4.0 * mc);
  CHECK(sim.fidelity == 1.0);
}

TEST_CASE("repeated readout decay time") {
  const auto ro = readout_for(40.0);
  const double T = 1000.0;  // tau = T/20
  const auto sim = readout_record_sim(T, ro, 1.0, 20000, 60, 5);
  REQUIRE(sim.decay_time);
  CHECK(*sim.decay_time == doctest::Approx(T).epsilon(0.05));
}

TEST_CASE("readout fidelity grows with SNR") {
  double prev = -1.0;
  for (double snr : {0.5, 2.0, 6.0, 15.0, 40.0}) {
    const auto sim = readout_record_sim(2000.0, readout_for(snr), 1.0, 20000, 2, 9);
    CHECK(sim.fidelity >= prev);
    prev = sim.fidelity;
  }
}

TEST_CASE("readout simulation is seed-deterministic") {
  const auto ro = readout_for(10.0);
  const auto a = readout_record_sim(300.0, ro, 1.0, 50, 5, 77);
  const auto b = readout_record_sim(300.0, ro, 1.0, 50, 5, 77);
  REQUIRE(a.record.outcomes.size() == b.record.outcomes.size());
  for (std::size_t i = 0; i < a.record.outcomes.size(); ++i) {
    CHECK(a.record.outcomes[i].I == b.record.outcomes[i].I);
    CHECK(a.record.truth[i] == b.record.truth[i]);
  }
  CHECK_THROWS_AS(readout_record_sim(0.0, ro, 1.0, 5, 5, 1), ParameterError);
}

TEST_CASE("Bloch-sphere average coherence and gain") {
  CHECK(bloch_average_coherence({4, 4, 4, 4, 4, 4}) == doctest::Approx(0.25));
  CHECK(bloch_average_coherence({1, 2, 3, 4, 5, 6}) ==
        doctest::Approx((1 + 0.5 + 1 / 3.0 + 0.25 + 0.2 + 1 / 6.0) / 6.0));
  CHECK(error_correction_gain(0.3, 0.3) == 1.0);
  CHECK(fock_average_coherence(10.0, 20.0) == doctest::Approx((0.4 + 0.05) / 6.0));
  CHECK_THROWS_AS(bloch_average_coherence({1, 2, 3, 0, 5, 6}), ParameterError);
}

TEST_CASE("well-flip time under a resonant drive") {
  DissipationParams d;
  d.kappa1 = 0.025;
  d.n_th = 0.01;
  const SKParams p = sk(10.0);
  const HilbertSpace s(30);
  const double bare = coherent_lifetime(p, d, s, 2000.0).fit->T;
  const auto with = [&](double omega) {
    LifetimeOptions o;
    o.drive = omega / (4.0 * std::sqrt(nbar_ys(10.0)));
    return coherent_lifetime(p, d, s, 2000.0, o).fit->T;
  };
  // A weak drive leaves T_X alone.
  CHECK(with(1e-3) == doctest::Approx(bare).epsilon(0.1));
  // A drive far above the excited-pair tunnel splittings lifts their
  // degeneracy and lengthens T_X in this model.
  CHECK(with(2.0) > 1.5 * bare);
}
