#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace ncplane::quadrature {

// Nodes and weights of a one-dimensional rule: sum_i w_i f(x_i).
struct Rule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  Eigen::Index size() const { return nodes.size(); }

  template <typename F>
  auto apply(F&& f) const {
    using R = decltype(f(0.0));
    R acc = R(0);
    for (Eigen::Index i = 0; i < nodes.size(); ++i) acc += weights(i) * f(nodes(i));
    return acc;
  }
};

// Golub-Welsch on the Jacobi matrix, then Newton refinement of each node on the
// three-term recurrence so that the weights keep full relative accuracy.
Rule gauss_legendre(int n);  // int_{-1}^{1} f
Rule gauss_hermite(int n);   // int_R e^{-x^2} f
Rule gauss_laguerre(int n);  // int_0^inf e^{-x} f

// Uniform M-point rule on [0, 2pi) with weights 2pi/M. Integrates
// e^{ikphi} exactly for |k| <= M - 1.
Rule uniform_circle(int M);

// Composite Gauss-Legendre on [a, b] split into panels of width <= panel.
Rule composite_legendre(double a, double b, double panel, int nodes_per_panel);

}  // namespace ncplane::quadrature
