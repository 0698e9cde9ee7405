#include "kerrlab/fock.hpp"

#include <cmath>
#include <sstream>

#include "kerrlab/errors.hpp"

namespace kerrlab {

namespace {

void require_same(const HilbertSpace& a, const HilbertSpace& b) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << "dimension mismatch: " << a.dim() << " vs " << b.dim();
    throw ShapeError(os.str());
  }
}

CVector coherent_amplitudes(int dim, Complex alpha) {
  CVector c(dim);
  c(0) = 1.0;
  for (int n = 1; n < dim; ++n) c(n) = c(n - 1) * alpha / std::sqrt(double(n));
  return c / c.norm();
}

void check_coherent_guard(const HilbertSpace& space, Complex alpha) {
  if (std::norm(alpha) > space.dim() / 4.0) {
    std::ostringstream os;
    os << "|alpha|^2 = " << std::norm(alpha) << " exceeds dim/4 = "
       << space.dim() / 4.0;
    throw TruncationError(os.str());
  }
}

}  // namespace

HilbertSpace::HilbertSpace(int dim) : dim_(dim) {
  if (dim < 2) throw ParameterError("HilbertSpace needs dim >= 2");
}

int recommended_dim(double alpha2_max) {
  const double a2 = std::max(alpha2_max, 0.0);
  return static_cast<int>(std::ceil(a2 + 12.0 * std::sqrt(a2 + 1.0) + 15.0));
}

// ---------------------------------------------------------------- Operator

Operator::Operator(HilbertSpace space, CMatrix entries)
    : space_(space), m_(std::move(entries)) {
  if (m_.rows() != space_.dim() || m_.cols() != space_.dim())
    throw ShapeError("operator entries do not match the Hilbert dimension");
}

Operator Operator::adjoint() const { return Operator(space_, m_.adjoint()); }

bool Operator::is_hermitian(double rel_tol) const {
  const double scale = m_.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() < rel_tol * scale;
}

Operator& Operator::operator+=(const Operator& other) {
  require_same(space_, other.space_);
  m_ += other.m_;
  return *this;
}

Operator& Operator::operator-=(const Operator& other) {
  require_same(space_, other.space_);
  m_ -= other.m_;
  return *this;
}

Operator& Operator::operator*=(Complex s) {
  m_ *= s;
  return *this;
}

Operator operator+(Operator a, const Operator& b) { return a += b; }
Operator operator-(Operator a, const Operator& b) { return a -= b; }

Operator operator*(const Operator& a, const Operator& b) {
  require_same(a.space(), b.space());
  return Operator(a.space(), a.matrix() * b.matrix());
}

Operator operator*(Complex s, Operator a) { return a *= s; }

Operator commutator(const Operator& a, const Operator& b) {
  return a * b - b * a;
}

// --------------------------------------------------------------------- Ket

Ket::Ket(HilbertSpace space, CVector amplitudes)
    : space_(space), v_(std::move(amplitudes)) {
  if (v_.size() != space_.dim())
    throw ShapeError("ket length does not match the Hilbert dimension");
  const double nrm = v_.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm))
    throw ParameterError("cannot normalize a zero or non-finite ket");
  v_ /= nrm;
}

Complex Ket::inner(const Ket& other) const {
  require_same(space_, other.space_);
  return v_.dot(other.v_);
}

Complex Ket::expectation(const Operator& op) const {
  require_same(space_, op.space());
  return v_.dot(op.matrix() * v_);
}

// ----------------------------------------------------------- DensityMatrix

DensityMatrix::DensityMatrix(const Ket& psi)
    : space_(psi.space()),
      m_(psi.amplitudes() * psi.amplitudes().adjoint()) {}

DensityMatrix::DensityMatrix(HilbertSpace space, CMatrix entries)
    : space_(space), m_(std::move(entries)) {
  if (m_.rows() != space_.dim() || m_.cols() != space_.dim())
    throw ShapeError("density matrix does not match the Hilbert dimension");
  const double herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10) throw ParameterError("density matrix is not Hermitian");
  if (std::abs(m_.trace() - Complex(1.0)) > 1e-8)
    throw ParameterError("density matrix trace differs from 1");
  if (min_eigenvalue() < -1e-8)
    throw ParameterError("density matrix has a negative eigenvalue");
}

DensityMatrix::DensityMatrix(HilbertSpace space, CMatrix entries, NoCheck)
    : space_(space), m_(std::move(entries)) {
  if (m_.rows() != space_.dim() || m_.cols() != space_.dim())
    throw ShapeError("density matrix does not match the Hilbert dimension");
}

DensityMatrix DensityMatrix::unchecked(HilbertSpace space, CMatrix entries) {
  return DensityMatrix(space, std::move(entries), NoCheck{});
}

DensityMatrix DensityMatrix::thermal(HilbertSpace space, double n_th) {
  if (n_th < 0.0) throw ParameterError("n_th must be >= 0");
  CMatrix m = CMatrix::Zero(space.dim(), space.dim());
  const double q = n_th / (1.0 + n_th);
  double w = 1.0, total = 0.0;
  for (int n = 0; n < space.dim(); ++n) {
    m(n, n) = w;
    total += w;
    w *= q;
  }
  m /= total;
  return DensityMatrix(space, std::move(m), NoCheck{});
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

double DensityMatrix::min_eigenvalue() const {
  const CMatrix h = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

Complex DensityMatrix::expectation(const Operator& op) const {
  require_same(space_, op.space());
  return (op.matrix().cwiseProduct(m_.transpose())).sum();
}

// --------------------------------------------------------------- builders

Operator annihilation(HilbertSpace space) {
  CMatrix m = CMatrix::Zero(space.dim(), space.dim());
  for (int n = 1; n < space.dim(); ++n) m(n - 1, n) = std::sqrt(double(n));
  return Operator(space, std::move(m));
}

Operator creation(HilbertSpace space) { return annihilation(space).adjoint(); }

Operator number(HilbertSpace space) {
  CMatrix m = CMatrix::Zero(space.dim(), space.dim());
  for (int n = 0; n < space.dim(); ++n) m(n, n) = double(n);
  return Operator(space, std::move(m));
}

Operator parity(HilbertSpace space) {
  CMatrix m = CMatrix::Zero(space.dim(), space.dim());
  for (int n = 0; n < space.dim(); ++n) m(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
  return Operator(space, std::move(m));
}

Operator identity(HilbertSpace space) {
  return Operator(space, CMatrix::Identity(space.dim(), space.dim()));
}

Ket fock_state(HilbertSpace space, int n) {
  if (n < 0 || n >= space.dim())
    throw ParameterError("Fock index outside the truncated space");
  CVector v = CVector::Zero(space.dim());
  v(n) = 1.0;
  return Ket(space, std::move(v));
}

Ket coherent(HilbertSpace space, Complex alpha) {
  check_coherent_guard(space, alpha);
  return Ket(space, coherent_amplitudes(space.dim(), alpha));
}

Ket cat(HilbertSpace space, Complex alpha, CatParity parity) {
  check_coherent_guard(space, alpha);
  CVector c = coherent_amplitudes(space.dim(), alpha);
  const int drop = (parity == CatParity::Even) ? 1 : 0;
  for (int n = drop; n < space.dim(); n += 2) c(n) = 0.0;
  if (c.norm() <= 1e-12)
    throw DegenerateCatError("cat projection vanishes for |alpha| = " +
                             std::to_string(std::abs(alpha)));
  return Ket(space, std::move(c));
}

double cat_norm(Complex alpha, CatParity parity) {
  const double e = std::exp(-2.0 * std::norm(alpha));
  const double s = (parity == CatParity::Even) ? 1.0 : -1.0;
  return 1.0 / std::sqrt(2.0 * (1.0 + s * e));
}

double cat_ratio(Complex alpha) {
  const double a2 = std::norm(alpha);
  // (1 - e)/(1 + e) = tanh(|alpha|^2), accurate for small |alpha|.
  return std::sqrt(std::tanh(a2));
}

CatQubitBasis cat_basis(HilbertSpace space, Complex alpha) {
  Ket cp = cat(space, alpha, CatParity::Even);
  Ket cm = cat(space, alpha, CatParity::Odd);
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  Ket px(space, s * (cp.amplitudes() + cm.amplitudes()));
  Ket mx(space, s * (cp.amplitudes() - cm.amplitudes()));
  Ket py(space, s * (cp.amplitudes() + i * cm.amplitudes()));
  Ket my(space, s * (cp.amplitudes() - i * cm.amplitudes()));
  return CatQubitBasis{alpha,
                       std::move(cp),
                       std::move(cm),
                       std::move(px),
                       std::move(mx),
                       std::move(py),
                       std::move(my),
                       cat_norm(alpha, CatParity::Even),
                       cat_norm(alpha, CatParity::Odd),
                       cat_ratio(alpha)};
}

PauliTriple qubit_pauli(const Ket& plus, const Ket& minus) {
  require_same(plus.space(), minus.space());
  const CVector& u = plus.amplitudes();
  const CVector& v = minus.amplitudes();
  const Complex i(0.0, 1.0);
  const CMatrix uv = u * v.adjoint();
  const CMatrix vu = v * u.adjoint();
  return PauliTriple{
      Operator(plus.space(), uv + vu),
      Operator(plus.space(), -i * uv + i * vu),
      Operator(plus.space(), u * u.adjoint() - v * v.adjoint())};
}

PauliTriple cat_pauli(HilbertSpace space, Complex alpha) {
  const CatQubitBasis b = cat_basis(space, alpha);
  return qubit_pauli(b.plus_z, b.minus_z);
}

PauliCoefficients project_onto_qubit(const Operator& op, const Ket& plus,
                                     const Ket& minus) {
  require_same(op.space(), plus.space());
  require_same(op.space(), minus.space());
  const CVector& u = plus.amplitudes();
  const CVector& v = minus.amplitudes();
  const Complex m00 = u.dot(op.matrix() * u);
  const Complex m01 = u.dot(op.matrix() * v);
  const Complex m10 = v.dot(op.matrix() * u);
  const Complex m11 = v.dot(op.matrix() * v);
  const Complex i(0.0, 1.0);
  return PauliCoefficients{0.5 * (m00 + m11), 0.5 * (m01 + m10),
                           0.5 * i * (m01 - m10), 0.5 * (m00 - m11)};
}

PauliCoefficients project_onto_cat_qubit(const Operator& op,
                                         const CatQubitBasis& basis) {
  return project_onto_qubit(op, basis.plus_z, basis.minus_z);
}

}  // namespace kerrlab
