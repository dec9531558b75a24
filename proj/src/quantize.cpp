#include "ncplane/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "ncplane/error.hpp"

namespace ncplane::quantize {

namespace {

constexpr double kTailCut = 1e-20;
constexpr long long kMaxTrapezoidNodes = 10'000'000;

// Sum of exp(phi(v0 + k h) - phi0) over k = 0, +-1, +-2, ... (offset 0) or
// over the half-integer points (offset 1/2), stopping each side once the
// terms fall under kTailCut. phi is concave so each side decreases.
template <typename Phi>
double trapezoid_sum(Phi phi, double v0, double phi0, double h, double offset) {
  double sum = 0.0;
  long long nodes = 0;
  for (int dir : {1, -1}) {
    for (long long k = (dir == 1 || offset != 0.0) ? 0 : 1;; ++k) {
      const double v = v0 + dir * (double(k) + offset) * h;
      const double term = std::exp(phi(v) - phi0);
      sum += term;
      if (term < kTailCut && k > 0) break;
      if (++nodes > kMaxTrapezoidNodes) {
        throw Error(ErrorKind::QuadratureNonConvergence, "weight integrand tail too long");
      }
    }
  }
  return sum;
}

}  // namespace

WeightFunction::WeightFunction(double lambda) : lambda_(lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::DomainError, "weight function needs a finite lambda >= 0");
  }
}

double WeightFunction::value(double t) const { return std::exp(log_value(t)); }

double WeightFunction::log_value(double t) const {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorKind::DomainError, "weight function needs a finite t >= 0");
  }
  if (lambda_ == 0.0) return -t;
  if (t == 0.0) return 0.0;

  const double lam = lambda_;
  const double ct = std::exp(-0.5 * lam) * t;
  auto phi = [&](double v) { return v - ct * std::exp(v) - v * v / (2.0 * lam); };

  // Mode: 1 - ct e^v - v/lambda = 0. Decreasing and concave in v, so Newton
  // from v = lambda (the t = 0 root) approaches from the right monotonically.
  double v = lam;
  bool converged = false;
  for (int it = 0; it < 5000; ++it) {
    const double e = ct * std::exp(v);
    const double dv = (1.0 - e - v / lam) / (e + 1.0 / lam);
    v += dv;
    if (std::abs(dv) <= 1e-14 * std::max(1.0, std::abs(v))) {
      converged = true;
      break;
    }
  }
  if (!converged) throw Error(ErrorKind::QuadratureNonConvergence, "weight mode search failed");

  const double phi0 = phi(v);
  const double sigma = 1.0 / std::sqrt(ct * std::exp(v) + 1.0 / lam);
  const double h = std::min(sigma, 1.0) / 4.0;
  const double coarse = trapezoid_sum(phi, v, phi0, h, 0.0);
  const double fine = 0.5 * (coarse + trapezoid_sum(phi, v, phi0, h, 0.5));
  if (std::abs(coarse - fine) > kRefinementTol * fine) {
    throw Error(ErrorKind::QuadratureNonConvergence,
                "weight function: step refinements disagree");
  }
  const double log_i = std::log(h * fine);
  return -0.5 * lam - 0.5 * std::log(2.0 * std::numbers::pi * lam) + phi0 + log_i;
}

double WeightFunction::log_analytic_moment(int n) const {
  return std::lgamma(n + 1.0) + 0.5 * lambda_ * double(n) * double(n + 1);
}

double WeightFunction::analytic_moment(int n) const { return std::exp(log_analytic_moment(n)); }

std::pair<double, double> log_moment_range(const WeightFunction& w, double d_lo, double d_hi,
                                           double drop) {
  constexpr double step = 0.5, limit = 5000.0;
  auto edges = [&](double d) {
    std::map<double, double> L;
    double run_max = -std::numeric_limits<double>::infinity();
    for (int dir : {1, -1}) {
      double prev = -std::numeric_limits<double>::infinity();
      for (double s = (dir == 1 ? 0.0 : -step); std::abs(s) <= limit; s += dir * step) {
        const double l = (d + 1.0) * s + w.log_value(std::exp(s));
        L[s] = l;
        run_max = std::max(run_max, l);
        // l < prev: moving away from the peak in this direction
        if (l < prev && l < run_max - drop) break;
        prev = l;
      }
    }
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (auto [s, l] : L) {
      if (l >= run_max - drop) {
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
    }
    return std::pair{lo - 1.0, hi + 1.0};
  };
  return {edges(d_lo).first, edges(d_hi).second};
}

namespace {

// Log-scaled sum of w_i exp(L_i).
double log_weighted_sum(const Eigen::VectorXd& w, const Eigen::VectorXd& L) {
  const double m = L.maxCoeff();
  double s = 0.0;
  for (Eigen::Index i = 0; i < L.size(); ++i) s += w(i) * std::exp(L(i) - m);
  return m + std::log(s);
}

}  // namespace

std::vector<WeightFunction::Moment> WeightFunction::moments(int n_max) const {
  if (n_max < 0) throw Error(ErrorKind::DomainError, "moment order must be >= 0");
  std::vector<Moment> out;
  const auto [lo, hi] = log_moment_range(*this, 0.0, double(n_max));
  const auto coarse = quadrature::composite_legendre(lo, hi, 1.0, 10);
  const auto fine = quadrature::composite_legendre(lo, hi, 0.5, 10);
  auto log_w = [&](const quadrature::Rule& r) {
    Eigen::VectorXd g(r.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) g(i) = log_value(std::exp(r.nodes(i)));
    return g;
  };
  const Eigen::VectorXd gc = log_w(coarse), gf = log_w(fine);
  for (int n = 0; n <= n_max; ++n) {
    const Eigen::VectorXd Lc = gc + (n + 1.0) * coarse.nodes;
    const Eigen::VectorXd Lf = gf + (n + 1.0) * fine.nodes;
    const double vc = log_weighted_sum(coarse.weights, Lc);
    const double vf = log_weighted_sum(fine.weights, Lf);
    if (std::abs(std::expm1(vc - vf)) > kRefinementTol) {
      throw Error(ErrorKind::QuadratureNonConvergence, "moment quadrature did not converge");
    }
    const double target = log_analytic_moment(n);
    out.push_back({std::exp(vf), std::exp(target), std::abs(std::expm1(vf - target))});
  }
  return out;
}

WeightFunction::Moment WeightFunction::moment(int n) const { return moments(n).back(); }

// ---------------------------------------------------------------------------

ClassicalObservable ClassicalObservable::monomial(int a, int b, Complex coeff) {
  ClassicalObservable f;
  f.add(a, b, coeff);
  return f;
}

ClassicalObservable ClassicalObservable::pointwise(std::function<Complex(Complex)> fn,
                                                   int max_degree) {
  ClassicalObservable f(max_degree);
  f.pointwise_ = std::move(fn);
  return f;
}

ClassicalObservable& ClassicalObservable::add(int a, int b, Complex coeff) {
  if (a < 0 || b < 0) throw Error(ErrorKind::DomainError, "negative monomial power");
  if (a + b > max_degree_) {
    throw Error(ErrorKind::DomainError, "monomial degree above the configured cap");
  }
  terms_.push_back({a, b, coeff});
  return *this;
}

Complex ClassicalObservable::operator()(Complex zeta) const {
  Complex acc = pointwise_ ? pointwise_(zeta) : Complex{0.0, 0.0};
  for (const auto& t : terms_) {
    acc += t.coeff * std::pow(zeta, t.a) * std::pow(std::conj(zeta), t.b);
  }
  return acc;
}

int ClassicalObservable::ladder_order() const {
  int order = pointwise_ ? max_degree_ : 0;
  for (const auto& t : terms_) order = std::max({order, t.a, t.b});
  return order;
}

int angular_samples(int N, int max_degree) { return N + max_degree + 1; }

namespace {

// prod_{j=from+1}^{to} x_j with x_j = j e^{j lambda}; log form past overflow.
double log_x(int j, double lambda) { return std::log(double(j)) + j * lambda; }

double x_ratio(int from, int to, double lambda, bool& overflow) {
  double p = 1.0;
  for (int j = from + 1; j <= to; ++j) p *= double(j) * std::exp(j * lambda);
  overflow = !std::isfinite(p) || p > 1e300;
  return p;
}

double monomial_entry(int m, int n, int k, double lambda) {
  bool of_m = false, of_n = false;
  const double pm = x_ratio(m, k, lambda, of_m);
  if (m == n && !of_m) return pm;
  const double pn = x_ratio(n, k, lambda, of_n);
  if (!of_m && !of_n) return std::sqrt(pm * pn);
  double lg = 0.0;
  for (int j = m + 1; j <= k; ++j) lg += 0.5 * log_x(j, lambda);
  for (int j = n + 1; j <= k; ++j) lg += 0.5 * log_x(j, lambda);
  return std::exp(lg);
}

void check_truncation(int N) {
  if (N < 1 || N > 256) throw Error(ErrorKind::DomainError, "truncation N must be in 1..256");
}

bool truncation_warning(const fock::Operator& op) {
  const double top = op.matrix().cwiseAbs().maxCoeff();
  if (top == 0.0) return false;
  const int limit = op.trust_limit();
  double edge = 0.0;
  for (Eigen::Index i = std::max(0, limit + 1); i < op.dim(); ++i) {
    edge = std::max(edge, op.matrix().row(i).cwiseAbs().maxCoeff());
  }
  return edge > 1e-3 * top;
}

// Matrix elements and their envelope: the same radial integral with the
// angular average of |f| in place of the Fourier coefficient. The envelope is
// the size of the cancelling terms, hence the scale of the rounding error.
struct PointwiseResult {
  fock::Operator::Matrix values;
  Eigen::MatrixXd envelope;
};

PointwiseResult pointwise_matrix(const ClassicalObservable& f, const WeightFunction& w,
                                 int N, const quadrature::Rule& radial,
                                 const quadrature::Rule& circle) {
  const double lambda = w.lambda();
  std::vector<double> lxf(N + 1);
  for (int n = 0; n <= N; ++n) lxf[n] = std::lgamma(n + 1.0) + 0.5 * lambda * n * (n + 1.0);
  const int M = static_cast<int>(circle.size());

  fock::Operator::Matrix out = fock::Operator::Matrix::Zero(N + 1, N + 1);
  Eigen::MatrixXd env = Eigen::MatrixXd::Zero(N + 1, N + 1);
  std::vector<Complex> samples(M), A(2 * N + 1);
  for (Eigen::Index i = 0; i < radial.size(); ++i) {
    const double s = radial.nodes(i);
    const double r = std::exp(0.5 * s);
    const double lw = w.log_value(std::exp(s)) + s;
    double mean_abs = 0.0;
    for (int j = 0; j < M; ++j) {
      samples[j] = f(std::polar(r, circle.nodes(j)));
      mean_abs += std::abs(samples[j]) / M;
    }
    // A_k = (1/2pi) int f e^{ik phi}
    for (int k = -N; k <= N; ++k) {
      Complex acc{0.0, 0.0};
      for (int j = 0; j < M; ++j) acc += samples[j] * std::polar(1.0, k * circle.nodes(j));
      A[k + N] = acc / double(M);
    }
    for (int m = 0; m <= N; ++m) {
      for (int n = 0; n <= N; ++n) {
        const double le = lw + 0.5 * s * (m + n) - 0.5 * (lxf[m] + lxf[n]);
        const double g = radial.weights(i) * std::exp(le);
        out(m, n) += g * A[m - n + N];
        env(m, n) += g * mean_abs;
      }
    }
  }
  return {out, env};
}

}  // namespace

double max_scaled_deviation(const fock::Operator& op, const fock::Operator::Matrix& ref,
                            const Eigen::MatrixXd& scale, int limit) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < op.dim(); ++j) {
    if (!fock::in_band(j, op.truncation(), op.mode(), limit)) continue;
    for (Eigen::Index i = 0; i < op.dim(); ++i) {
      if (!fock::in_band(i, op.truncation(), op.mode(), limit)) continue;
      const double s = std::max({1.0, std::abs(ref(i, j)), scale(i, j)});
      worst = std::max(worst, std::abs(op(i, j) - ref(i, j)) / s);
    }
  }
  return worst;
}

double max_mixed_deviation(const fock::Operator& op, const fock::Operator::Matrix& ref,
                           int limit) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < op.dim(); ++j) {
    if (!fock::in_band(j, op.truncation(), op.mode(), limit)) continue;
    for (Eigen::Index i = 0; i < op.dim(); ++i) {
      if (!fock::in_band(i, op.truncation(), op.mode(), limit)) continue;
      const double e = std::abs(op(i, j) - ref(i, j)) / std::max(1.0, std::abs(ref(i, j)));
      worst = std::max(worst, e);
    }
  }
  return worst;
}

QuantizedOperator quantize_lambda(const ClassicalObservable& f, double lambda, int N,
                                  QuantizationPath path) {
  check_truncation(N);
  const WeightFunction w(lambda);
  const int order = f.ladder_order();

  fock::Operator::Matrix mat = fock::Operator::Matrix::Zero(N + 1, N + 1);
  std::optional<Eigen::MatrixXd> envelope;
  if (path == QuantizationPath::Monomial) {
    if (f.has_pointwise()) {
      throw Error(ErrorKind::DomainError, "a pointwise observable needs the pointwise path");
    }
    for (const auto& t : f.monomials()) {
      // zeta^{a+m} conj(zeta)^{b+n} survives the angle only for a + m = b + n.
      for (int n = 0; n <= N; ++n) {
        const int m = n + t.b - t.a;
        if (m < 0 || m > N) continue;
        mat(m, n) += t.coeff * monomial_entry(m, n, t.a + m, lambda);
      }
    }
  } else {
    const int D = f.has_pointwise() ? f.max_degree() : [&] {
      int d = 0;
      for (const auto& t : f.monomials()) d = std::max(d, t.a + t.b);
      return d;
    }();
    const auto circle = quadrature::uniform_circle(angular_samples(N, D));
    const auto [lo, hi] = log_moment_range(w, 0.0, N + 0.5 * D);
    const auto coarse = pointwise_matrix(f, w, N, quadrature::composite_legendre(lo, hi, 1.0, 10),
                                         circle);
    auto fine = pointwise_matrix(f, w, N, quadrature::composite_legendre(lo, hi, 0.5, 10), circle);
    fock::Operator probe{coarse.values, N, fock::Mode::A, 0};
    if (max_scaled_deviation(probe, fine.values, fine.envelope, N) >
        WeightFunction::kRefinementTol) {
      throw Error(ErrorKind::QuadratureNonConvergence,
                  "pointwise quantization: panel refinements disagree");
    }
    mat = std::move(fine.values);
    envelope = std::move(fine.envelope);
  }
  fock::Operator op{std::move(mat), N, fock::Mode::A, order};
  const bool warn = truncation_warning(op);
  return {std::move(op), warn, std::move(envelope)};
}

// ---------------------------------------------------------------------------

fock::Operator quantize_standard_mode(int a, int b, int N, fock::Mode mode) {
  check_truncation(N);
  if (a < 0 || b < 0) throw Error(ErrorKind::DomainError, "negative monomial power");
  if (mode == fock::Mode::AB) throw Error(ErrorKind::DomainError, "single-mode operator only");
  fock::Operator::Matrix mat = fock::Operator::Matrix::Zero(N + 1, N + 1);
  // <m| alpha^a conj(alpha)^b |n> = int_0^inf t^k e^{-t} dt / sqrt(m! n!),
  // k = a + m = b + n. Gauss-Laguerre with ceil((k+1)/2) nodes is exact.
  std::map<int, quadrature::Rule> rules;
  for (int n = 0; n <= N; ++n) {
    const int m = n + b - a;
    if (m < 0 || m > N) continue;
    const int k = a + m;
    const int nodes = k / 2 + 1;
    auto it = rules.find(nodes);
    if (it == rules.end()) it = rules.emplace(nodes, quadrature::gauss_laguerre(nodes)).first;
    const double norm = 0.5 * (std::lgamma(m + 1.0) + std::lgamma(n + 1.0));
    const auto& r = it->second;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      acc += r.weights(i) * std::exp(k * std::log(r.nodes(i)) - norm);
    }
    mat(m, n) = acc;
  }
  return {std::move(mat), N, mode, std::max(a, b), a == b};
}

fock::Operator quantize_standard(const TwoModeObservable& f, int N) {
  const Eigen::Index dim = (N + 1) * (N + 1);
  fock::Operator out{fock::Operator::Matrix::Zero(dim, dim), N, fock::Mode::AB, 0};
  for (const auto& t : f.terms) {
    const auto part = fock::tensor(quantize_standard_mode(t.a, t.b, N, fock::Mode::A),
                                   quantize_standard_mode(t.c, t.d, N, fock::Mode::B));
    out = out + t.coeff * part;
  }
  return out;
}

PhaseSpaceMap quantize_phase_space_map(const DerivedParams& d, int N) {
  require_regular_symmetric(d);
  const double hbar = d.phys.hbar;
  const double sx = std::sqrt(hbar / (2.0 * d.mw_tilde));
  const double sp = 0.5 * std::sqrt(d.mw_tilde * hbar / 2.0);
  const Complex i{0.0, 1.0};

  // Coherent-state symbols of the canonical pair, linear in alpha and beta.
  TwoModeObservable x1, x2, p1, p2;
  x1.add(1, 0, 0, 0, sx).add(0, 1, 0, 0, sx).add(0, 0, 1, 0, sx).add(0, 0, 0, 1, sx);
  x2.add(1, 0, 0, 0, i * sx).add(0, 1, 0, 0, -i * sx).add(0, 0, 1, 0, -i * sx).add(0, 0, 0, 1, i * sx);
  p1.add(0, 1, 0, 0, i * sp).add(1, 0, 0, 0, -i * sp).add(0, 0, 1, 0, -i * sp).add(0, 0, 0, 1, i * sp);
  p2.add(1, 0, 0, 0, sp).add(0, 1, 0, 0, sp).add(0, 0, 1, 0, -sp).add(0, 0, 0, 1, -sp);

  fock::PhaseSpaceOperators ops{quantize_standard(x1, N).with_hermitian(true),
                                quantize_standard(x2, N).with_hermitian(true),
                                quantize_standard(p1, N).with_hermitian(true),
                                quantize_standard(p2, N).with_hermitian(true)};
  auto [q1, q2] = fock::noncommuting_positions(ops, d.phys.theta, hbar);
  return {ops.x_1, ops.x_2, ops.p_1, ops.p_2, q1, q2};
}

// ---------------------------------------------------------------------------

std::vector<VerificationRow> verification_report(int N, double lambda, double theta) {
  check_truncation(N);
  using M = fock::Operator::Matrix;
  std::vector<VerificationRow> rows;
  auto push = [&](std::string id, double err, int band) {
    rows.push_back({std::move(id), N, lambda, err, band});
  };

  const auto Z = fock::z_lambda(lambda, N);
  const M diag = fock::diagonal(N, fock::Mode::A, [&](int n) {
                   return (n + 1.0) * std::exp(lambda * (n + 1.0));
                 }).matrix();
  const M id = M::Identity(N + 1, N + 1);

  const auto one = quantize_lambda(ClassicalObservable::monomial(0, 0), lambda, N).op;
  push("one_to_identity", fock::max_abs_deviation(one, id, N), N);

  const auto zeta = quantize_lambda(ClassicalObservable::monomial(1, 0), lambda, N).op;
  push("zeta_to_Z_lambda", fock::max_abs_deviation(zeta, Z.matrix()), zeta.trust_limit());

  const auto abs2 = quantize_lambda(ClassicalObservable::monomial(1, 1), lambda, N).op;
  push("abs2_to_diag", fock::max_abs_deviation(abs2, diag), abs2.trust_limit());
  const M zz = (Z * Z.adjoint()).matrix();
  // Z Z+ is a floating-point product with entries up to N e^{lambda N}.
  push("abs2_to_ZZdag_rel", max_mixed_deviation(abs2, zz, N - 1), N - 1);

  {
    const int band = abs2.trust_limit();
    const M block = abs2.matrix().topLeftCorner(band + 1, band + 1);
    Eigen::SelfAdjointEigenSolver<M> es(block, Eigen::EigenvaluesOnly);
    push("abs2_positivity", std::max(0.0, -es.eigenvalues().minCoeff()), band);
  }

  const auto zeta_pw = quantize_lambda(ClassicalObservable::pointwise([](Complex z) { return z; }, 1),
                                       lambda, N, QuantizationPath::Pointwise);
  push("zeta_to_Z_lambda_pointwise_rel",
       max_scaled_deviation(zeta_pw.op, Z.matrix(), *zeta_pw.envelope, N - 1), N - 1);
  const auto abs2_pw =
      quantize_lambda(ClassicalObservable::pointwise([](Complex z) { return std::norm(z); }, 2),
                      lambda, N, QuantizationPath::Pointwise);
  push("abs2_to_diag_pointwise_rel",
       max_scaled_deviation(abs2_pw.op, diag, *abs2_pw.envelope, N - 1), N - 1);

  {
    auto [a, a_dag] = fock::ladder(N, fock::Mode::A);
    auto [b, b_dag] = fock::ladder(N, fock::Mode::B);
    const auto qa = quantize_standard(TwoModeObservable{}.add(1, 0, 0, 0), N);
    const auto qad = quantize_standard(TwoModeObservable{}.add(0, 1, 0, 0), N);
    const auto qb = quantize_standard(TwoModeObservable{}.add(0, 0, 1, 0), N);
    const auto qn = quantize_standard(TwoModeObservable{}.add(1, 1, 0, 0), N);
    push("alpha_to_a", fock::max_abs_deviation(qa, fock::lift(a).matrix()), qa.trust_limit());
    push("conj_alpha_to_a_dag", fock::max_abs_deviation(qad, fock::lift(a_dag).matrix()),
         qad.trust_limit());
    push("beta_to_b", fock::max_abs_deviation(qb, fock::lift(b).matrix()), qb.trust_limit());
    const auto n1 = fock::lift(fock::diagonal(N, fock::Mode::A, [](int n) { return n + 1.0; }));
    push("abs2_alpha_to_n_plus_1", fock::max_abs_deviation(qn, n1.matrix(), N - 1), N - 1);
  }

  {
    const auto d = derive(PhysicalParams::natural_units(1.0, theta));
    const auto map = quantize_phase_space_map(d, N);
    const int band = N - 2;
    const Eigen::Index dim = map.q_1.dim();
    const auto qq = fock::commutator(map.q_1, map.q_2);
    push("q1q2_commutator", fock::max_abs_deviation(qq, Complex(0.0, theta) * M::Identity(dim, dim), band),
         band);
    const auto xp = fock::commutator(map.x_1, map.p_1);
    push("x1p1_commutator",
         fock::max_abs_deviation(xp, Complex(0.0, d.phys.hbar) * M::Identity(dim, dim), band),
         band);
  }

  {
    constexpr int n_max = 10;
    double worst = 0.0;
    for (const auto& m : WeightFunction(lambda).moments(n_max)) worst = std::max(worst, m.rel_error);
    rows.push_back({"moments_rel", n_max, lambda, worst, n_max});
  }
  return rows;
}

}  // namespace ncplane::quantize
