#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace kerrlab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Truncated single-mode Fock space holding levels |0>..|dim-1>.
class HilbertSpace {
 public:
  explicit HilbertSpace(int dim);

  int dim() const noexcept { return dim_; }

  friend bool operator==(const HilbertSpace&, const HilbertSpace&) = default;

 private:
  int dim_;
};

/// Cutoff for states reaching mean photon number alpha2_max:
/// ceil(alpha2_max + 12 sqrt(alpha2_max + 1) + 15).
int recommended_dim(double alpha2_max);

/// Dense operator on a HilbertSpace. Arithmetic between operators of
/// different dimension throws ShapeError.
class Operator {
 public:
  Operator(HilbertSpace space, CMatrix entries);

  const HilbertSpace& space() const noexcept { return space_; }
  int dim() const noexcept { return space_.dim(); }
  const CMatrix& matrix() const noexcept { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }

  Operator adjoint() const;
  /// max|M - M^dagger| < rel_tol * max|M|.
  bool is_hermitian(double rel_tol = 1e-12) const;

  Operator& operator+=(const Operator& other);
  Operator& operator-=(const Operator& other);
  Operator& operator*=(Complex s);

 private:
  HilbertSpace space_;
  CMatrix m_;
};

Operator operator+(Operator a, const Operator& b);
Operator operator-(Operator a, const Operator& b);
Operator operator*(const Operator& a, const Operator& b);
Operator operator*(Complex s, Operator a);
Operator commutator(const Operator& a, const Operator& b);

/// Normalized state vector. The constructor renormalizes its input.
class Ket {
 public:
  Ket(HilbertSpace space, CVector amplitudes);

  const HilbertSpace& space() const noexcept { return space_; }
  int dim() const noexcept { return space_.dim(); }
  const CVector& amplitudes() const noexcept { return v_; }
  Complex operator[](int n) const { return v_(n); }

  /// <this|other>
  Complex inner(const Ket& other) const;
  Complex expectation(const Operator& op) const;

 private:
  HilbertSpace space_;
  CVector v_;
};

/// Density matrix. The checked constructor enforces Hermiticity (1e-10),
/// unit trace (1e-8) and positivity (smallest eigenvalue >= -1e-8).
class DensityMatrix {
 public:
  explicit DensityMatrix(const Ket& psi);
  DensityMatrix(HilbertSpace space, CMatrix entries);

  /// Skips validation; used for intermediate states of integrators.
  static DensityMatrix unchecked(HilbertSpace space, CMatrix entries);
  /// Thermal state with mean occupation n_th (truncated and renormalized).
  static DensityMatrix thermal(HilbertSpace space, double n_th);

  const HilbertSpace& space() const noexcept { return space_; }
  int dim() const noexcept { return space_.dim(); }
  const CMatrix& matrix() const noexcept { return m_; }

  Complex trace() const { return m_.trace(); }
  double purity() const;
  double min_eigenvalue() const;
  Complex expectation(const Operator& op) const;

 private:
  struct NoCheck {};
  DensityMatrix(HilbertSpace space, CMatrix entries, NoCheck);

  HilbertSpace space_;
  CMatrix m_;
};

Operator annihilation(HilbertSpace space);
Operator creation(HilbertSpace space);
Operator number(HilbertSpace space);
Operator parity(HilbertSpace space);
Operator identity(HilbertSpace space);

Ket fock_state(HilbertSpace space, int n);

/// Coherent state; requires |alpha|^2 <= dim/4 (TruncationError otherwise).
Ket coherent(HilbertSpace space, Complex alpha);

enum class CatParity { Even, Odd };

/// N^pm (|alpha> pm |-alpha>) built by masking the coherent amplitudes.
/// Odd cats with a vanishing odd projection raise DegenerateCatError.
Ket cat(HilbertSpace space, Complex alpha, CatParity parity);

/// Analytic normalization 1/sqrt(2(1 pm exp(-2|alpha|^2))).
double cat_norm(Complex alpha, CatParity parity);
/// r = N^+/N^- = sqrt((1 - exp(-2|alpha|^2))/(1 + exp(-2|alpha|^2))).
double cat_ratio(Complex alpha);

struct CatQubitBasis {
  Complex alpha;
  Ket plus_z;   // |C^+>
  Ket minus_z;  // |C^->
  Ket plus_x;   // (|C^+> + |C^->)/sqrt2
  Ket minus_x;
  Ket plus_y;   // (|C^+> + i|C^->)/sqrt2
  Ket minus_y;
  double norm_plus;
  double norm_minus;
  double ratio;
};

CatQubitBasis cat_basis(HilbertSpace space, Complex alpha);

struct PauliTriple {
  Operator X;
  Operator Y;
  Operator Z;
};

/// Pauli operators built from dyads of two orthonormal kets.
PauliTriple qubit_pauli(const Ket& plus, const Ket& minus);
PauliTriple cat_pauli(HilbertSpace space, Complex alpha);

struct PauliCoefficients {
  Complex I;
  Complex X;
  Complex Y;
  Complex Z;
};

/// Coefficients c_k = Tr(sigma_k M)/2 of the 2x2 block M_ij = <i|op|j>.
PauliCoefficients project_onto_qubit(const Operator& op, const Ket& plus,
                                     const Ket& minus);
PauliCoefficients project_onto_cat_qubit(const Operator& op,
                                         const CatQubitBasis& basis);

// ---------------------------------------------------------------------------
// Wigner function. Convention: x = (a + a^dagger)/sqrt2, p = (a - a^dagger)/(i
// sqrt2), so [x, p] = i and the integral of W over dx dp is 1. In these
// coordinates |W| <= 1/pi. The alpha-plane function W_alpha(alpha) with
// alpha = (x + i p)/sqrt2 and measure d^2 alpha equals 2 W, bounded by 2/pi.
// ---------------------------------------------------------------------------

inline constexpr double kWignerAlphaPlaneFactor = 2.0;

struct PhaseGrid {
  std::vector<double> x;
  std::vector<double> p;

  static PhaseGrid uniform(double x_min, double x_max, int nx, double p_min,
                           double p_max, int np);
  static PhaseGrid square(double extent, int n);

  double dx() const;
  double dp() const;
};

struct WignerGrid {
  PhaseGrid grid;
  RMatrix values;  // values(i, j) = W(x_i, p_j)

  /// Trapezoidal integral over the grid.
  double integral() const;
  double max_abs() const;
};

/// Shortest fringe period expected for a state of mean photon number nbar.
double min_fringe_period(double nbar);

/// W on a grid via closed-form matrix elements of the displaced parity
/// operator. GridError if the step exceeds a quarter of the shortest
/// expected fringe period.
WignerGrid wigner_of(const DensityMatrix& rho, const PhaseGrid& grid);
double wigner_at(const DensityMatrix& rho, double x, double p);

}  // namespace kerrlab
