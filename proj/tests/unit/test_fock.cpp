#include <doctest.h>

#include <cmath>

#include "kerrlab/errors.hpp"
#include "kerrlab/fock.hpp"

using namespace kerrlab;

TEST_CASE("ladder operators obey the truncated commutator") {
  const HilbertSpace s(12);
  const Operator c = commutator(annihilation(s), creation(s));
  for (int n = 0; n + 1 < s.dim(); ++n)
    CHECK(std::abs(c(n, n) - 1.0) < 1e-14);
  CHECK(std::abs(c(11, 11) + 11.0) < 1e-12);  // truncation edge
}

TEST_CASE("coherent states are eigenkets of a up to truncation") {
  const HilbertSpace s(40);
  const Complex alpha(1.3, -0.4);
  const Ket k = coherent(s, alpha);
  const Complex ea = k.expectation(annihilation(s));
  CHECK(std::abs(ea - alpha) < 1e-10);
  CHECK(k.amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("coherent rejects amplitudes beyond the truncation budget") {
  CHECK_THROWS_AS(coherent(HilbertSpace(8), Complex(2.0, 0.0)),
                  TruncationError);
}

TEST_CASE("cat states have definite parity and analytic norms") {
  const HilbertSpace s(50);
  const Complex alpha(0.7, 0.2);
  const Ket even = cat(s, alpha, CatParity::Even);
  const Ket odd = cat(s, alpha, CatParity::Odd);
  const Operator P = parity(s);
  CHECK(even.expectation(P).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(odd.expectation(P).real() == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(even.inner(odd)) < 1e-14);

  // overlap <C+|alpha> = N+ (1 + e^{-2|alpha|^2}) (coherent-state algebra)
  const double a2 = std::norm(alpha);
  const Ket coh = coherent(s, alpha);
  const double expected = cat_norm(alpha, CatParity::Even) * (1.0 + std::exp(-2 * a2));
  CHECK(std::abs(even.inner(coh)) == doctest::Approx(expected).epsilon(1e-10));
  CHECK(cat_ratio(alpha) ==
        doctest::Approx(cat_norm(alpha, CatParity::Even) /
                        cat_norm(alpha, CatParity::Odd)));
}

TEST_CASE("odd cat at alpha = 0 is degenerate") {
  CHECK_THROWS_AS(cat(HilbertSpace(6), Complex(0.0, 0.0), CatParity::Odd),
                  DegenerateCatError);
}

TEST_CASE("cat Pauli operators satisfy the qubit algebra on the code space") {
  const HilbertSpace s(40);
  const Complex alpha(1.5, 0.0);
  const CatQubitBasis b = cat_basis(s, alpha);
  const PauliTriple p = cat_pauli(s, alpha);
  CHECK(b.plus_x.expectation(p.X).real() == doctest::Approx(1.0));
  CHECK(b.plus_y.expectation(p.Y).real() == doctest::Approx(1.0));
  CHECK(b.plus_z.expectation(p.Z).real() == doctest::Approx(1.0));
  const Operator xy = p.X * p.Y;
  // XY = iZ
  CHECK((xy.matrix() - Complex(0, 1) * p.Z.matrix()).norm() < 1e-12);
}

TEST_CASE("number operator projects to (nbar) I + ... on the cat qubit") {
  // <C+|n|C+> = |alpha|^2 tanh|alpha|^2 ... = |alpha|^2 r^2 at the even cat
  const HilbertSpace s(50);
  const Complex alpha(1.1, 0.0);
  const CatQubitBasis b = cat_basis(s, alpha);
  const PauliCoefficients c = project_onto_cat_qubit(number(s), b);
  const double a2 = std::norm(alpha);
  const double nplus = a2 * std::tanh(a2);
  const double nminus = a2 / std::tanh(a2);
  CHECK(c.I.real() == doctest::Approx(0.5 * (nplus + nminus)).epsilon(1e-10));
  CHECK(c.Z.real() == doctest::Approx(0.5 * (nplus - nminus)).epsilon(1e-10));
  CHECK(std::abs(c.X) < 1e-12);
  CHECK(std::abs(c.Y) < 1e-12);
}

TEST_CASE("annihilation flips cat parity with the ratio r") {
  const HilbertSpace s(50);
  const Complex alpha(1.2, 0.0);
  const CatQubitBasis b = cat_basis(s, alpha);
  const PauliCoefficients c = project_onto_cat_qubit(annihilation(s), b);
  // a|C+> = alpha r |C->, a|C-> = alpha / r |C+>
  const double r = b.ratio;
  CHECK(c.X.real() == doctest::Approx(0.5 * 1.2 * (r + 1.0 / r)).epsilon(1e-10));
  CHECK(c.Y.real() == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(std::abs(c.Y.imag() - 0.5 * 1.2 * (1.0 / r - r)) < 1e-10);
}

TEST_CASE("density matrices validate their inputs") {
  const HilbertSpace s(4);
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = 0.5;
  CHECK_THROWS_AS(DensityMatrix(s, m), ParameterError);
  m(1, 1) = 0.5;
  CHECK_NOTHROW(DensityMatrix(s, m));
  m(0, 1) = 0.7;
  m(1, 0) = 0.7;
  CHECK_THROWS_AS(DensityMatrix(s, m), ParameterError);  // negative eigenvalue
}

TEST_CASE("thermal state has the requested occupation") {
  const HilbertSpace s(80);
  const DensityMatrix rho = DensityMatrix::thermal(s, 0.8);
  CHECK(rho.expectation(number(s)).real() == doctest::Approx(0.8).epsilon(1e-10));
  CHECK(rho.purity() == doctest::Approx(1.0 / (2 * 0.8 + 1)).epsilon(1e-10));
}

TEST_CASE("hilbert space rejects tiny dimensions") {
  CHECK_THROWS_AS(HilbertSpace(1), ParameterError);
}
