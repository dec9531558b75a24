#include "ncplane/fock.hpp"

#include "ncplane/error.hpp"

namespace ncplane::fock {

namespace {

const Complex kI{0.0, 1.0};

struct TwoModeLadders {
  Operator a, a_dag, b, b_dag;
};

TwoModeLadders two_mode_ladders(int N) {
  auto [a, a_dag] = ladder(N, Mode::A);
  auto [b, b_dag] = ladder(N, Mode::B);
  return {lift(a), lift(a_dag), lift(b), lift(b_dag)};
}

}  // namespace

Operator hamiltonian_symmetric(const DerivedParams& d, int N) {
  require_regular_symmetric(d);
  const double scale = d.phys.hbar * d.omega_tilde;
  return diagonal(N, Mode::A, [scale](int n) { return scale * (n + 0.5); });
}

Operator hamiltonian_landau(const DerivedParams& d, int N) {
  const double scale = d.phys.hbar * d.omega;
  return diagonal(N, Mode::A, [scale](int n) { return scale * (n + 0.5); });
}

Operator angular_momentum(double hbar, int N) {
  return diagonal(N, Mode::A, [hbar](int n) { return (2.0 * n + 1.0) * hbar; });
}

Operator z_lambda(double lambda, int N, double scale) {
  Operator::Matrix m = Operator::Matrix::Zero(N + 1, N + 1);
  for (int n = 1; n <= N; ++n) {
    m(n - 1, n) = scale * std::exp(0.5 * lambda * n) * std::sqrt(double(n));
  }
  return {m, N, Mode::A, 1};
}

CenterRelative center_and_relative(const DerivedParams& d, int N) {
  const double ell = lengths_and_scales(d).length;
  const double mw = d.mw_tilde;
  const auto l = two_mode_ladders(N);

  Operator r0_plus = ell * l.b;
  Operator r0_minus = ell * l.b_dag;
  Operator r_plus = ell * l.a_dag;
  Operator r_minus = ell * l.a;

  const Complex half{0.5, 0.0};
  const Complex half_over_i = 0.5 / kI;
  Operator x0_1 = (half * (r0_plus + r0_minus)).with_hermitian(true);
  Operator x0_2 = (half_over_i * (r0_plus - r0_minus)).with_hermitian(true);
  Operator r_1 = (half * (r_plus + r_minus)).with_hermitian(true);
  Operator r_2 = (half_over_i * (r_plus - r_minus)).with_hermitian(true);
  Operator P_1 = -mw * r_2;
  Operator P_2 = mw * r_1;
  Operator x_1 = x0_1 + r_1;
  Operator x_2 = x0_2 + r_2;
  return {x0_1, x0_2, r_1, r_2, r0_plus, r0_minus, r_plus, r_minus, P_1, P_2, x_1, x_2};
}

PhaseSpaceOperators canonical_operators(const DerivedParams& d, int N) {
  require_regular_symmetric(d);
  const double hbar = d.phys.hbar;
  const double sx = std::sqrt(hbar / (2.0 * d.mw_tilde));
  const double sp = 0.5 * std::sqrt(d.mw_tilde * hbar / 2.0);
  const auto l = two_mode_ladders(N);

  Operator x_1 = (sx * (l.a + l.a_dag + l.b + l.b_dag)).with_hermitian(true);
  Operator x_2 = (Complex(0.0, sx) * (l.a - l.a_dag - l.b + l.b_dag)).with_hermitian(true);
  Operator p_1 = (Complex(0.0, sp) * (l.a_dag - l.a - l.b + l.b_dag)).with_hermitian(true);
  Operator p_2 = (sp * (l.a + l.a_dag - l.b - l.b_dag)).with_hermitian(true);
  return {x_1, x_2, p_1, p_2};
}

std::pair<Operator, Operator> noncommuting_positions(const PhaseSpaceOperators& ops,
                                                     double theta, double hbar) {
  const double k = theta / (2.0 * hbar);
  // eps^{12} = 1: q1 = x1 - k p2, q2 = x2 + k p1.
  return {ops.x_1 - k * ops.p_2, ops.x_2 + k * ops.p_1};
}

NoncommutingCheck reconstruct_noncommuting_positions(const DerivedParams& d, int N,
                                                     int band_limit) {
  const auto ops = canonical_operators(d, N);
  auto [q_1, q_2] = noncommuting_positions(ops, d.phys.theta, d.phys.hbar);
  const int band = band_limit < 0 ? N - 1 : band_limit;

  const auto qq = commutator(q_1, q_2);
  const Operator::Matrix target =
      Complex(0.0, d.phys.theta) * Operator::Matrix::Identity(qq.dim(), qq.dim());
  const double err = max_abs_deviation(qq, target, band);
  const auto xx = commutator(ops.x_1, ops.x_2);
  const double xx_err =
      max_abs_deviation(xx, Operator::Matrix::Zero(xx.dim(), xx.dim()), band);
  return {q_1, q_2, err, xx_err, band};
}

Operator hamiltonian_critical_sym(const PhysicalParams& p, int N) {
  if (p.B == 0.0) {
    throw Error(ErrorKind::DomainError, "critical Hamiltonian needs B != 0");
  }
  PhysicalParams commutative = p;
  commutative.theta = 0.0;
  const auto ops = canonical_operators(derive(commutative), N);
  const double k = p.charge * p.B / (2.0 * p.c);
  Operator h = (k * k / (2.0 * p.mass)) * (ops.x_1 * ops.x_1 + ops.x_2 * ops.x_2);
  return h.with_hermitian(true);
}

Operator landau_position_x1(const DerivedParams& d, int N, double k2) {
  const double m = d.phys.mass;
  const double w = d.omega;
  auto [a, a_dag] = ladder(N, Mode::A);
  const double shift = d.mu_L * k2 / (m * w);
  return std::sqrt(d.phys.hbar / (2.0 * m * w)) * (a + a_dag) -
         shift * identity<Complex>(N, Mode::A);
}

}  // namespace ncplane::fock
