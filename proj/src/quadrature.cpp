#include "ncplane/quadrature.hpp"

#include <algorithm>
#include <numbers>

namespace ncplane::quadrature {

namespace {

// Symmetric tridiagonal Jacobi matrix with diagonal `alpha` and off-diagonal
// `beta`; returns its eigenvalues in ascending order.
Eigen::VectorXd jacobi_eigenvalues(const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta) {
  const Eigen::Index n = alpha.size();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  J.diagonal() = alpha;
  J.diagonal(1) = beta;
  J.diagonal(-1) = beta;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// Runs a three-term recurrence `step` from p_0 = 1, p_{-1} = 0 and returns
// (p_n(x), p_n'(x)).
template <typename Step>
std::pair<double, double> evaluate(int n, double x, Step step) {
  double p = 1.0, dp = 0.0, pm = 0.0, dpm = 0.0;
  for (int k = 0; k < n; ++k) {
    auto [next, dnext] = step(k, x, p, pm, dp, dpm);
    pm = p;
    dpm = dp;
    p = next;
    dp = dnext;
  }
  return {p, dp};
}

template <typename Step>
double newton(int n, double x, Step step) {
  for (int it = 0; it < 100; ++it) {
    auto [p, dp] = evaluate(n, x, step);
    const double dx = p / dp;
    x -= dx;
    if (std::abs(dx) <= 1e-15 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

}  // namespace

Rule gauss_legendre(int n) {
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd beta(std::max(0, n - 1));
  for (int k = 1; k < n; ++k) beta(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
  Eigen::VectorXd x = jacobi_eigenvalues(alpha, beta);

  // (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
  auto step = [](int k, double x, double p, double pm, double dp, double dpm) {
    const double next = ((2 * k + 1) * x * p - k * pm) / (k + 1);
    const double dnext = ((2 * k + 1) * (p + x * dp) - k * dpm) / (k + 1);
    return std::pair{next, dnext};
  };
  Rule r{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int i = 0; i < n; ++i) {
    const double xi = newton(n, x(i), step);
    const double dp = evaluate(n, xi, step).second;
    r.nodes(i) = xi;
    r.weights(i) = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
  return r;
}

Rule gauss_hermite(int n) {
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd beta(std::max(0, n - 1));
  for (int k = 1; k < n; ++k) beta(k - 1) = std::sqrt(0.5 * k);
  Eigen::VectorXd x = jacobi_eigenvalues(alpha, beta);

  // Orthonormal Hermite functions avoid overflow:
  // h_{k+1} = sqrt(2/(k+1)) x h_k - sqrt(k/(k+1)) h_{k-1}, h_0 = pi^{-1/4}.
  const double h0 = std::pow(std::numbers::pi, -0.25);
  auto step = [h0](int k, double x, double p, double pm, double dp, double dpm) {
    if (k == 0) return std::pair{std::sqrt(2.0) * x * h0, std::sqrt(2.0) * h0};
    const double a = std::sqrt(2.0 / (k + 1)), b = std::sqrt(double(k) / (k + 1));
    return std::pair{a * x * p - b * pm, a * (p + x * dp) - b * dpm};
  };
  auto eval = [&](double xi) {
    double p = h0, pm = 0.0, dp = 0.0, dpm = 0.0;
    for (int k = 0; k < n; ++k) {
      auto [nx, dnx] = step(k, xi, p, pm, dp, dpm);
      pm = p;
      dpm = dp;
      p = nx;
      dp = dnx;
    }
    return std::tuple{p, dp, pm};
  };
  Rule r{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int i = 0; i < n; ++i) {
    double xi = x(i);
    for (int it = 0; it < 100; ++it) {
      auto [p, dp, pm] = eval(xi);
      const double dx = p / dp;
      xi -= dx;
      if (std::abs(dx) <= 1e-15 * std::max(1.0, std::abs(xi))) break;
    }
    auto [p, dp, pm] = eval(xi);
    r.nodes(i) = xi;
    // w_i = 1 / (n h_{n-1}(x_i)^2) for orthonormal Hermite functions.
    r.weights(i) = 1.0 / (n * pm * pm);
    (void)p;
    (void)dp;
  }
  return r;
}

Rule gauss_laguerre(int n) {
  Eigen::VectorXd alpha(n);
  Eigen::VectorXd beta(std::max(0, n - 1));
  for (int k = 0; k < n; ++k) alpha(k) = 2.0 * k + 1.0;
  for (int k = 1; k < n; ++k) beta(k - 1) = k;
  Eigen::VectorXd x = jacobi_eigenvalues(alpha, beta);

  // (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}
  auto step = [](int k, double x, double p, double pm, double dp, double dpm) {
    const double next = ((2 * k + 1 - x) * p - k * pm) / (k + 1);
    const double dnext = ((2 * k + 1 - x) * dp - p - k * dpm) / (k + 1);
    return std::pair{next, dnext};
  };
  Rule r{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int i = 0; i < n; ++i) {
    const double xi = newton(n, x(i), step);
    const double lnp1 = evaluate(n + 1, xi, step).first;
    r.nodes(i) = xi;
    r.weights(i) = xi / ((n + 1.0) * (n + 1.0) * lnp1 * lnp1);
  }
  return r;
}

Rule uniform_circle(int M) {
  Rule r{Eigen::VectorXd(M), Eigen::VectorXd::Constant(M, 2.0 * std::numbers::pi / M)};
  for (int k = 0; k < M; ++k) r.nodes(k) = 2.0 * std::numbers::pi * k / M;
  return r;
}

Rule composite_legendre(double a, double b, double panel, int nodes_per_panel) {
  const Rule base = gauss_legendre(nodes_per_panel);
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / panel)));
  const double width = (b - a) / panels;
  Rule r{Eigen::VectorXd(panels * nodes_per_panel), Eigen::VectorXd(panels * nodes_per_panel)};
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    for (int i = 0; i < nodes_per_panel; ++i) {
      r.nodes(p * nodes_per_panel + i) = mid + 0.5 * width * base.nodes(i);
      r.weights(p * nodes_per_panel + i) = 0.5 * width * base.weights(i);
    }
  }
  return r;
}

}  // namespace ncplane::quadrature
