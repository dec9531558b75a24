#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <unsupported/Eigen/KroneckerProduct>

#include "ncplane/params.hpp"

namespace ncplane::fock {

// A: relative-motion mode (a, alpha, zeta). B: guiding-centre mode (b, beta,
// z0). AB: two-mode tensor product, basis index = n_A * (N+1) + n_B.
enum class Mode { A, B, AB };

// Dense operator on the Fock basis truncated at occupation N (per mode).
//
// `ladder_order` is the number of ladder steps the matrix can move a basis
// state; products add orders. Rows and columns with every mode index in
// 0..N-ladder_order (the trust band) coincide with the untruncated operator.
template <typename Scalar>
class TruncatedOperator {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using RealScalar = typename Eigen::NumTraits<Scalar>::Real;

  TruncatedOperator(Matrix m, int truncation, Mode mode, int ladder_order,
                    bool hermitian = false)
      : matrix_(std::move(m)),
        truncation_(truncation),
        mode_(mode),
        ladder_order_(ladder_order),
        hermitian_(hermitian) {}

  const Matrix& matrix() const { return matrix_; }
  int truncation() const { return truncation_; }
  Mode mode() const { return mode_; }
  int ladder_order() const { return ladder_order_; }
  bool hermitian() const { return hermitian_; }
  Eigen::Index dim() const { return matrix_.rows(); }

  // Largest per-mode index inside the trust band; negative if empty.
  int trust_limit() const { return truncation_ - ladder_order_; }

  Scalar operator()(Eigen::Index i, Eigen::Index j) const { return matrix_(i, j); }

  TruncatedOperator adjoint() const {
    return {matrix_.adjoint(), truncation_, mode_, ladder_order_, hermitian_};
  }

  TruncatedOperator with_hermitian(bool h) const {
    return {matrix_, truncation_, mode_, ladder_order_, h};
  }

 private:
  Matrix matrix_;
  int truncation_;
  Mode mode_;
  int ladder_order_;
  bool hermitian_;
};

using Complex = std::complex<double>;
using Operator = TruncatedOperator<Complex>;
using StateVector = Eigen::VectorXcd;

namespace detail {

template <typename Scalar>
void require_compatible(const TruncatedOperator<Scalar>& a,
                        const TruncatedOperator<Scalar>& b) {
  eigen_assert(a.truncation() == b.truncation() && a.mode() == b.mode() &&
               "operators live on different truncated spaces");
  (void)a;
  (void)b;
}

}  // namespace detail

template <typename Scalar>
TruncatedOperator<Scalar> operator+(const TruncatedOperator<Scalar>& a,
                                    const TruncatedOperator<Scalar>& b) {
  detail::require_compatible(a, b);
  return {a.matrix() + b.matrix(), a.truncation(), a.mode(),
          std::max(a.ladder_order(), b.ladder_order()),
          a.hermitian() && b.hermitian()};
}

template <typename Scalar>
TruncatedOperator<Scalar> operator-(const TruncatedOperator<Scalar>& a,
                                    const TruncatedOperator<Scalar>& b) {
  detail::require_compatible(a, b);
  return {a.matrix() - b.matrix(), a.truncation(), a.mode(),
          std::max(a.ladder_order(), b.ladder_order()),
          a.hermitian() && b.hermitian()};
}

template <typename Scalar>
TruncatedOperator<Scalar> operator*(const TruncatedOperator<Scalar>& a,
                                    const TruncatedOperator<Scalar>& b) {
  detail::require_compatible(a, b);
  return {a.matrix() * b.matrix(), a.truncation(), a.mode(),
          a.ladder_order() + b.ladder_order()};
}

template <typename Scalar>
TruncatedOperator<Scalar> operator*(const Scalar& s, const TruncatedOperator<Scalar>& a) {
  const bool real_factor = std::imag(std::complex<double>(s)) == 0.0;
  return {s * a.matrix(), a.truncation(), a.mode(), a.ladder_order(),
          a.hermitian() && real_factor};
}

template <typename Scalar>
TruncatedOperator<Scalar> operator*(double s, const TruncatedOperator<Scalar>& a)
  requires(!std::is_same_v<Scalar, double>)
{
  return Scalar(s) * a;
}

template <typename Scalar>
TruncatedOperator<Scalar> commutator(const TruncatedOperator<Scalar>& a,
                                     const TruncatedOperator<Scalar>& b) {
  return a * b - b * a;
}

template <typename Scalar>
TruncatedOperator<Scalar> identity(int N, Mode mode = Mode::A) {
  const Eigen::Index d = mode == Mode::AB ? (N + 1) * (N + 1) : N + 1;
  using M = typename TruncatedOperator<Scalar>::Matrix;
  return {M::Identity(d, d), N, mode, 0, true};
}

// Lowering/raising pair on one mode: a|n> = sqrt(n)|n-1>.
template <typename Scalar = Complex>
std::pair<TruncatedOperator<Scalar>, TruncatedOperator<Scalar>> ladder(int N,
                                                                       Mode mode = Mode::A) {
  eigen_assert(N >= 1 && mode != Mode::AB);
  using M = typename TruncatedOperator<Scalar>::Matrix;
  M a = M::Zero(N + 1, N + 1);
  for (int n = 1; n <= N; ++n) a(n - 1, n) = Scalar(std::sqrt(double(n)));
  TruncatedOperator<Scalar> lower{a, N, mode, 1};
  return {lower, lower.adjoint()};
}

template <typename Scalar = Complex, typename F>
TruncatedOperator<Scalar> diagonal(int N, Mode mode, F&& entry) {
  using M = typename TruncatedOperator<Scalar>::Matrix;
  M m = M::Zero(N + 1, N + 1);
  for (int n = 0; n <= N; ++n) m(n, n) = Scalar(entry(n));
  return {m, N, mode, 0, true};
}

template <typename Scalar = Complex>
TruncatedOperator<Scalar> number(int N, Mode mode = Mode::A) {
  return diagonal<Scalar>(N, mode, [](int n) { return double(n); });
}

// Single-mode operator -> two-mode operator (A is the left tensor factor).
template <typename Scalar>
TruncatedOperator<Scalar> lift(const TruncatedOperator<Scalar>& op) {
  if (op.mode() == Mode::AB) return op;
  using M = typename TruncatedOperator<Scalar>::Matrix;
  const M id = M::Identity(op.dim(), op.dim());
  M out = op.mode() == Mode::A ? M(Eigen::kroneckerProduct(op.matrix(), id))
                               : M(Eigen::kroneckerProduct(id, op.matrix()));
  return {std::move(out), op.truncation(), Mode::AB, op.ladder_order(), op.hermitian()};
}

template <typename Scalar>
TruncatedOperator<Scalar> tensor(const TruncatedOperator<Scalar>& a_part,
                                 const TruncatedOperator<Scalar>& b_part) {
  eigen_assert(a_part.truncation() == b_part.truncation());
  using M = typename TruncatedOperator<Scalar>::Matrix;
  return {M(Eigen::kroneckerProduct(a_part.matrix(), b_part.matrix())),
          a_part.truncation(), Mode::AB, a_part.ladder_order() + b_part.ladder_order(),
          a_part.hermitian() && b_part.hermitian()};
}

// Whether basis index i lies in the band 0..limit for every mode.
inline bool in_band(Eigen::Index i, int N, Mode mode, int limit) {
  if (mode != Mode::AB) return i <= limit;
  const Eigen::Index n_a = i / (N + 1), n_b = i % (N + 1);
  return n_a <= limit && n_b <= limit;
}

// max |M_ij - R_ij| over the band 0..limit (defaults to the trust band of `op`).
template <typename Scalar, typename Derived>
double max_abs_deviation(const TruncatedOperator<Scalar>& op,
                         const Eigen::MatrixBase<Derived>& reference, int limit) {
  const int N = op.truncation();
  double worst = 0.0;
  for (Eigen::Index j = 0; j < op.dim(); ++j) {
    if (!in_band(j, N, op.mode(), limit)) continue;
    for (Eigen::Index i = 0; i < op.dim(); ++i) {
      if (!in_band(i, N, op.mode(), limit)) continue;
      worst = std::max(worst, double(std::abs(op(i, j) - Scalar(reference(i, j)))));
    }
  }
  return worst;
}

template <typename Scalar, typename Derived>
double max_abs_deviation(const TruncatedOperator<Scalar>& op,
                         const Eigen::MatrixBase<Derived>& reference) {
  return max_abs_deviation(op, reference, op.trust_limit());
}

template <typename Scalar>
double hermiticity_defect(const TruncatedOperator<Scalar>& op) {
  return (op.matrix() - op.matrix().adjoint()).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Physical operators. Everything below uses complex double entries.

// H = hbar w~ (N + 1/2) on the relative mode.
Operator hamiltonian_symmetric(const DerivedParams& d, int N);

// H = hbar w (a+ a + 1/2) with the Landau-gauge ladder; theta independent.
Operator hamiltonian_landau(const DerivedParams& d, int N);

// J |m,n> = (2n + 1) hbar |m,n>, acting on the relative mode.
Operator angular_momentum(double hbar, int N);

// Z_lambda = sum_{n>=1} scale e^{lambda n/2} sqrt(n) |n-1><n|.
Operator z_lambda(double lambda, int N, double scale = 1.0);

// Guiding-centre and relative-motion operators, all two-mode.
struct CenterRelative {
  Operator x0_1, x0_2;       // centre coordinates
  Operator r_1, r_2;         // relative coordinates, x - x0
  Operator r0_plus, r0_minus;
  Operator r_plus, r_minus;
  Operator P_1, P_2;         // kinematic momenta
  Operator x_1, x_2;         // x0 + r
};

// Throws Error(CriticalRegime) at mu_S = 0.
CenterRelative center_and_relative(const DerivedParams& d, int N);

// Canonical commuting pair (x^i, p_j) as two-mode ladder combinations.
struct PhaseSpaceOperators {
  Operator x_1, x_2, p_1, p_2;
};

PhaseSpaceOperators canonical_operators(const DerivedParams& d, int N);

// q^k = x^k - (theta/2 hbar) eps^{kj} p_j.
std::pair<Operator, Operator> noncommuting_positions(const PhaseSpaceOperators& ops,
                                                     double theta, double hbar);

struct NoncommutingCheck {
  Operator q_1, q_2;
  double commutator_error;  // max |[q1,q2] - i theta| on the band
  double xx_commutator;     // max |[x1,x2]| on the band
  int band;
};

// Builds q from canonical_operators and measures [q1, q2] - i theta on the
// band 0..band_limit (defaults to N - 1).
NoncommutingCheck reconstruct_noncommuting_positions(const DerivedParams& d, int N,
                                                     int band_limit = -1);

// (eB/2c)^2 (x1^2 + x2^2)/2m, the theta = theta_c^S Hamiltonian, with x built
// on the commutative (theta = 0) Fock basis.
Operator hamiltonian_critical_sym(const PhysicalParams& p, int N);

// Landau-gauge position x^1 = sqrt(hbar/2 m w)(a + a+) - mu k2/(m w) at fixed
// p2 eigenvalue k2 (single mode).
Operator landau_position_x1(const DerivedParams& d, int N, double k2);

}  // namespace ncplane::fock
