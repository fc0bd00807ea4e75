#pragma once

#include <Eigen/Core>

namespace nondiv {

/// L_theta(phi, psi, Xi) = A:Xi + b.(theta psi + (1 - theta) grad phi) - c phi.
template <typename DerivedA, typename DerivedB, typename DerivedG, typename DerivedP, typename DerivedX>
double ltheta_eval(const Eigen::MatrixBase<DerivedA>& A, const Eigen::MatrixBase<DerivedB>& b, double c,
                   double theta, double phi, const Eigen::MatrixBase<DerivedG>& grad_phi,
                   const Eigen::MatrixBase<DerivedP>& psi, const Eigen::MatrixBase<DerivedX>& Xi) {
  return A.cwiseProduct(Xi).sum() + b.dot(theta * psi + (1.0 - theta) * grad_phi) - c * phi;
}

/// Scalar curl d1 psi2 - d2 psi1 of a planar field with Jacobian J(i, j) = d psi_i / d x_j.
template <typename Derived>
double curl2(const Eigen::MatrixBase<Derived>& jacobian) {
  return jacobian(1, 0) - jacobian(0, 1);
}

/// Divergence: trace of the Jacobian.
template <typename Derived>
double div2(const Eigen::MatrixBase<Derived>& jacobian) {
  return jacobian.trace();
}

}  // namespace nondiv
