#pragma once

#include <vector>

#include <Eigen/Core>

namespace nondiv {

/// Quadrature on the reference triangle.  Points are barycentric coordinates
/// (l0, l1, l2); weights sum to 1, so an integral over K is
/// area(K) * sum_q w_q f(x_q).  All points lie strictly inside the triangle.
struct QuadratureRule {
  int order = 0;  // exact for polynomials of total degree <= order
  std::vector<Eigen::Vector3d> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

/// Gauss-Legendre rule on [0, 1] with weights summing to 1.
struct LineRule {
  int order = 0;
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

inline constexpr int kMaxQuadratureOrder = 10;

/// Rules: order <= 1 centroid, order 2 the symmetric three-point rule, higher
/// orders a collapsed (Duffy) tensor product of Gauss-Legendre rules.
/// Throws std::invalid_argument for order < 0 or order > kMaxQuadratureOrder.
QuadratureRule make_quadrature(int order);

LineRule make_line_quadrature(int order);

/// n-point Gauss-Legendre nodes and weights on [-1, 1] (Golub-Welsch).
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

}  // namespace nondiv
