#pragma once

#include <optional>
#include <string>

#include <Eigen/Core>

#include "nondiv/fe_space.hpp"
#include "nondiv/mesh.hpp"

namespace nondiv {

enum class Smoothness { Constant, Smooth, PiecewiseAxisJumps };

/// (A, b, c) evaluated at one point.
struct CoefficientSample {
  Eigen::Matrix2d A = Eigen::Matrix2d::Identity();
  Eigen::Vector2d b = Eigen::Vector2d::Zero();
  double c = 0.0;
};

/// Coefficients of A:D^2u + b.grad u - c u.
struct CoefficientField {
  MatrixField A;
  VectorField b;
  ScalarField c;
  Smoothness smoothness = Smoothness::Smooth;
  /// False promises b == 0 and c == 0 everywhere.
  bool has_lower_order = true;

  CoefficientSample at(const Point2& x) const {
    CoefficientSample s;
    s.A = A(x);
    s.b = b ? b(x) : Eigen::Vector2d::Zero();
    s.c = c ? c(x) : 0.0;
    return s;
  }
};

/// u with its gradient and Hessian.
struct ExactSolution {
  ScalarField u;
  VectorField grad;
  MatrixField hess;
};

/// Data of a Dirichlet problem L u = f in the box, u = r on its boundary.
struct ProblemSpec {
  std::string name;
  Box domain;
  CoefficientField coeffs;
  ScalarField f;
  ScalarField r;  // empty: homogeneous boundary data
  double theta = 0.5;
  double lambda = 0.0;
  std::optional<ExactSolution> exact;

  bool zero_boundary() const { return !r; }
};

/// Checks theta in [0, 1], lambda >= 0, presence of A and f, and that
/// lambda == 0 only when the field has no lower-order terms.
/// Throws std::invalid_argument.
void validate(const ProblemSpec& spec);

/// f := A:D^2u + b.grad u - c u from an exact solution.
ScalarField manufactured_rhs(const CoefficientField& coeffs, const ExactSolution& exact);

}  // namespace nondiv
