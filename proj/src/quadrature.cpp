#include "nondiv/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace nondiv {

void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  // Jacobi matrix of the Legendre three-term recurrence
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double beta = i / std::sqrt(4.0 * i * i - 1.0);
    jacobi(i, i - 1) = beta;
    jacobi(i - 1, i) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  nodes = es.eigenvalues();
  weights = 2.0 * es.eigenvectors().row(0).transpose().array().square();
}

LineRule make_line_quadrature(int order) {
  if (order < 0) throw std::invalid_argument("make_line_quadrature: negative order");
  const int n = order / 2 + 1;
  Eigen::VectorXd x, w;
  gauss_legendre(n, x, w);
  LineRule rule;
  rule.order = 2 * n - 1;
  for (int i = 0; i < n; ++i) {
    rule.points.push_back(0.5 * (x(i) + 1.0));
    rule.weights.push_back(0.5 * w(i));
  }
  return rule;
}

QuadratureRule make_quadrature(int order) {
  if (order < 0 || order > kMaxQuadratureOrder) {
    throw std::invalid_argument("make_quadrature: unsupported order " + std::to_string(order));
  }
  QuadratureRule rule;
  rule.order = order;
  if (order <= 1) {
    rule.points.emplace_back(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
    rule.weights.push_back(1.0);
    return rule;
  }
  if (order == 2) {
    const double a = 2.0 / 3.0, b = 1.0 / 6.0;
    rule.points = {{a, b, b}, {b, a, b}, {b, b, a}};
    rule.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    return rule;
  }
  // x = s, y = t (1 - s) maps the unit square onto the reference triangle with
  // Jacobian (1 - s); a degree-p integrand becomes degree p + 1 in s.
  const int n = (order + 2 + 1) / 2;
  Eigen::VectorXd x, w;
  gauss_legendre(n, x, w);
  for (int i = 0; i < n; ++i) {
    const double s = 0.5 * (x(i) + 1.0);
    const double ws = 0.5 * w(i);
    for (int j = 0; j < n; ++j) {
      const double t = 0.5 * (x(j) + 1.0);
      const double wt = 0.5 * w(j);
      const double px = s, py = t * (1.0 - s);
      rule.points.emplace_back(1.0 - px - py, px, py);
      rule.weights.push_back(2.0 * ws * wt * (1.0 - s));
    }
  }
  return rule;
}

}  // namespace nondiv
