#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "kerrlab/effham.hpp"
#include "kerrlab/errors.hpp"

using namespace kerrlab;

TEST_CASE("displacement amplitude") {
  CircuitParams p;
  p.omega_d = 2.0;
  CHECK(displacement_amplitude(p) == 0.0);
  p.Omega_d = 0.75 * p.omega_d;
  CHECK(displacement_amplitude(p) == doctest::Approx(1.0));
  p.Omega_d = 150.0;
  p.omega_d = 12000.0;
  CHECK(displacement_amplitude(p) == doctest::Approx(1.0 / 60.0));
}

TEST_CASE("all nonlinearities off leaves only the detuning") {
  CircuitParams p;
  p.omega_d = 2.02;
  p.Omega_d = 0.1;
  const auto c = effective_coefficients(p, 4);
  CHECK(c.total_K == 0.0);
  CHECK(std::abs(c.total_eps2) == 0.0);
  CHECK(c.total_Delta == doctest::Approx(0.01));
  CHECK(c.lambda4 == 0.0);
  CHECK(std::abs(c.eps4) == 0.0);
}

TEST_CASE("order-2 coefficients with g3 only") {
  CircuitParams p;
  p.g3 = 0.01;
  p.Omega_d = 0.03;
  const auto c = effective_coefficients(p, 2);
  const double pi = 4.0 * 0.03 / (3.0 * 2.0);
  CHECK(c.eps2_by_order.at(1).real() == doctest::Approx(0.01 * pi));
  CHECK(c.total_K == doctest::Approx(-5.0 / 3.0 * 1e-4));
  CHECK(leading_order_kerr_alternative(p) == doctest::Approx(10.0 / 3.0 * 1e-4));
}

TEST_CASE("order-4 lambda with only g6") {
  CircuitParams p;
  p.g6 = 1e-3;
  const auto c = effective_coefficients(p, 4);
  CHECK(c.lambda4 == doctest::Approx(-10.0 / 6.0 * 1e-3));
}

TEST_CASE("third-order Kerr and detuning vanish identically") {
  CircuitParams p;
  p.g3 = 0.02;
  p.g4 = -3e-3;
  p.g5 = 1e-3;
  p.Omega_d = 0.2;
  const auto c = effective_coefficients(p, 3);
  CHECK(c.Delta_by_order.at(3).total == 0.0);
  CHECK(c.K_by_order.at(3).total == 0.0);
  CHECK(!c.Delta_by_order.count(4));
}

TEST_CASE("order bounds are enforced") {
  CHECK_THROWS_AS(effective_coefficients(CircuitParams{}, 0), OrderError);
  CHECK_THROWS_AS(effective_coefficients(CircuitParams{}, 5), OrderError);
}

TEST_CASE("coefficient pieces scale with their monomials") {
  CircuitParams p;
  p.g3 = 0.013;
  p.g4 = -2e-3;
  p.g5 = 7e-4;
  p.g6 = 3e-4;
  p.Omega_d = 0.05;
  const auto base = effective_coefficients(p, 4);
  CircuitParams q = p;
  const double s = 1.7;
  q.g6 *= s;
  const auto sc = effective_coefficients(q, 4);
  // only the g6 part of lambda changes, and linearly in s
  const double g6_part = -10.0 / 6.0 * p.g6;
  CHECK(sc.lambda4 - base.lambda4 == doctest::Approx((s - 1.0) * g6_part));

  // eps4 is quadratic in Pi
  CircuitParams r = p;
  r.Omega_d *= 2.0;
  const auto dr = effective_coefficients(r, 4);
  CHECK(std::abs(dr.eps4) == doctest::Approx(4.0 * std::abs(base.eps4)));

  // K^(2) pieces: g3^2 term scales as s^2 with g3
  CircuitParams t;
  t.g3 = 0.01;
  const double k1 = effective_coefficients(t, 2).total_K;
  t.g3 *= s;
  const double k2 = effective_coefficients(t, 2).total_K;
  CHECK(k2 == doctest::Approx(s * s * k1));
}

TEST_CASE("validation limits") {
  CircuitParams p;
  p.g3 = 0.25;
  CHECK_THROWS_AS(validate(p), ParameterError);
  p.g3 = 0.1;
  CHECK(validate(p).size() == 1);
  p.g3 = 0.01;
  CHECK(validate(p).empty());
}

TEST_CASE("ncrit") {
  CHECK(ncrit(1, 1, 1) == doctest::Approx(15.0));
  CHECK(ncrit(2, 0.5, 0.1) == doctest::Approx(24000.0));
  CHECK(ncrit(4, 0.3, 0.2) == doctest::Approx(4.0 * ncrit(2, 0.3, 0.2)));
}

TEST_CASE("Floquet: free rotor gaps are multiples of the detuning") {
  CircuitParams p;
  p.omega_d = 2.0 + 2e-3;  // delta = 1e-3
  const auto g = floquet_quasienergies(p, HilbertSpace(6), 4);
  REQUIRE(g.size() == 3);
  for (double v : g) CHECK(v == doctest::Approx(1e-3).epsilon(1e-8));
}

namespace {

// Second-order van Vleck expansion of the undriven rotating-frame
// Hamiltonian g/m X^m, X = a e^{-it} + a+ e^{it} (omega_d = 2):
// H_eff = H_0 + sum_{q>0} [H_q, H_-q]/q. Returns diagonal energies.
std::vector<double> van_vleck_levels(int m, double g, int dim, int count) {
  const HilbertSpace s(dim);
  const CMatrix a = annihilation(s).matrix();
  const CMatrix ad = a.adjoint();
  std::map<int, CMatrix> parts;
  for (int mask = 0; mask < (1 << m); ++mask) {
    CMatrix prod = CMatrix::Identity(dim, dim);
    int q = 0;
    for (int k = 0; k < m; ++k) {
      const bool up = mask >> k & 1;
      prod = prod * (up ? ad : a);
      q += up ? 1 : -1;
    }
    auto it = parts.find(q);
    if (it == parts.end())
      parts.emplace(q, (g / m) * prod);
    else
      it->second += (g / m) * prod;
  }
  CMatrix h = parts.count(0) ? parts.at(0) : CMatrix::Zero(dim, dim);
  for (const auto& [q, hq] : parts)
    if (q > 0) h += (hq * parts.at(-q) - parts.at(-q) * hq) / double(q);
  std::vector<double> e;
  for (int n = 0; n < count; ++n) e.push_back((h(n, n) - h(0, 0)).real());
  return e;
}

std::vector<double> sorted_gaps(std::vector<double> e) {
  std::sort(e.begin(), e.end());
  std::vector<double> g;
  for (std::size_t k = 1; k < e.size(); ++k) g.push_back(e[k] - e[k - 1]);
  return g;
}

}  // namespace

TEST_CASE("Floquet: undriven g4 oscillator matches the van Vleck ladder") {
  CircuitParams p;
  p.g4 = -1e-4;
  const int levels = 5;
  const auto f = floquet_spectrum(p, HilbertSpace(14), levels);
  const auto ref = sorted_gaps(van_vleck_levels(4, p.g4, 30, levels));
  REQUIRE(f.gaps.size() == ref.size());
  for (std::size_t k = 0; k < ref.size(); ++k)
    CHECK(f.gaps[k] == doctest::Approx(ref[k]).epsilon(1e-6));
}

TEST_CASE("Floquet: undriven g3 oscillator matches the van Vleck ladder") {
  CircuitParams p;
  p.g3 = 2e-3;
  const int levels = 4;
  const auto f = floquet_spectrum(p, HilbertSpace(14), levels);
  const auto ref = sorted_gaps(van_vleck_levels(3, p.g3, 30, levels));
  for (std::size_t k = 0; k < ref.size(); ++k)
    CHECK(f.gaps[k] == doctest::Approx(ref[k]).epsilon(1e-4));
}

TEST_CASE("printed second-order corrections are -1/2 of the van Vleck values") {
  // Characterizes the coefficient tables rather than endorsing them: the
  // quadratic-in-g contributions to Delta and K come out as exactly -1/2 of
  // the brute-force expansion, while the first-order g4 terms agree.
  const double g3 = 1e-3, g4 = -1e-4;
  const auto e3 = van_vleck_levels(3, g3, 30, 4);
  const double d3 = -e3[1], k3 = (-e3[2] - 2.0 * d3) / 2.0;
  CircuitParams p;
  p.g3 = g3;
  const auto c3 = effective_coefficients(p, 2);
  CHECK(c3.total_Delta == doctest::Approx(-0.5 * d3).epsilon(1e-9));
  CHECK(c3.total_K == doctest::Approx(-0.5 * k3).epsilon(1e-9));
  // the alternative leading-order Kerr agrees with the expansion
  CHECK(leading_order_kerr_alternative(p) == doctest::Approx(k3).epsilon(1e-9));

  const auto e4 = van_vleck_levels(4, g4, 30, 4);
  const double d4 = -e4[1], k4 = (-e4[2] - 2.0 * d4) / 2.0;
  p = CircuitParams{};
  p.g4 = g4;
  const auto c4 = effective_coefficients(p, 4);
  CHECK(c4.Delta_by_order.at(2).total == doctest::Approx(-3.0 * g4));
  CHECK(c4.Delta_by_order.at(4).total ==
        doctest::Approx(-0.5 * (d4 + 3.0 * g4)).epsilon(1e-6));
  CHECK(c4.K_by_order.at(4).total ==
        doctest::Approx(-0.5 * (k4 + 1.5 * g4)).epsilon(1e-6));
}

TEST_CASE("Floquet gaps are invariant under a drive phase shift") {
  CircuitParams p;
  p.g3 = 0.01;
  p.g4 = -2e-4;
  p.Omega_d = 0.01;
  p.omega_d = 2.0;
  const auto a = floquet_quasienergies(p, HilbertSpace(10), 3);
  p.drive_phase = 0.9;
  const auto b = floquet_quasienergies(p, HilbertSpace(10), 3);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k)
    CHECK(b[k] == doctest::Approx(a[k]).epsilon(1e-6));
}
