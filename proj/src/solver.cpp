#include "nondiv/solver.hpp"

#include <cmath>

#include <Eigen/SparseCholesky>

namespace nondiv {

namespace {

double relative_residual(const Eigen::SparseMatrix<double>& S, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  const double nb = b.norm();
  const double nr = (b - S * x).norm();
  return nb > 0.0 ? nr / nb : nr;
}

Eigen::VectorXd solve_direct(const Eigen::SparseMatrix<double>& S, const Eigen::VectorXd& b, const SolveOptions& opt,
                             SolveReport& rep) {
  rep.method = SolveMethod::DirectCholesky;
  rep.iterations = 0;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower> llt(S);
  if (llt.info() != Eigen::Success) {
    rep.definiteness = Definiteness::IndefiniteDetected;
    rep.rel_residual = 1.0;
    throw SolverError("solve: Cholesky factorization failed (matrix not positive definite)", rep);
  }
  rep.definiteness = Definiteness::SpdConfirmed;
  Eigen::VectorXd x = llt.solve(b);
  rep.rel_residual = relative_residual(S, x, b);
  // a few steps of iterative refinement recover digits lost to conditioning
  for (int step = 0; step < 3 && rep.rel_residual > opt.tol; ++step) {
    x += llt.solve(b - S * x);
    rep.rel_residual = relative_residual(S, x, b);
  }
  if (!(rep.rel_residual <= opt.tol)) throw SolverError("solve: residual above tolerance after refinement", rep);
  return x;
}

Eigen::VectorXd solve_cg(const Eigen::SparseMatrix<double>& S, const Eigen::VectorXd& b, const SolveOptions& opt,
                         SolveReport& rep) {
  rep.method = SolveMethod::CgJacobi;
  rep.definiteness = Definiteness::SpdConfirmed;
  const Eigen::Index n = S.rows();
  Eigen::VectorXd inv_diag = S.diagonal();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(inv_diag(i) > 0.0)) {
      rep.definiteness = Definiteness::IndefiniteDetected;
      throw SolverError("solve: non-positive diagonal entry", rep);
    }
    inv_diag(i) = 1.0 / inv_diag(i);
  }
  const double nb = b.norm();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (nb == 0.0) {
    rep.iterations = 0;
    rep.rel_residual = 0.0;
    return x;
  }
  const int cap = opt.max_iterations > 0 ? opt.max_iterations : static_cast<int>(20 * n);
  Eigen::VectorXd r = b;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  Eigen::VectorXd q(n);
  double rz = r.dot(z);
  for (int it = 1; it <= cap; ++it) {
    q.noalias() = S * p;
    const double curvature = p.dot(q);
    if (!(curvature > 0.0)) {
      rep.iterations = it;
      rep.definiteness = Definiteness::IndefiniteDetected;
      rep.rel_residual = r.norm() / nb;
      throw SolverError("solve: negative curvature direction in CG", rep);
    }
    const double alpha = rz / curvature;
    x += alpha * p;
    r -= alpha * q;
    rep.iterations = it;
    rep.rel_residual = r.norm() / nb;
    if (rep.rel_residual <= opt.tol) {
      rep.rel_residual = relative_residual(S, x, b);
      if (rep.rel_residual <= opt.tol) return x;
      r = b - S * x;  // recurrence drifted; restart from the true residual
    }
    z = inv_diag.cwiseProduct(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  throw SolverError("solve: CG did not converge within the iteration cap", rep);
}

}  // namespace

Eigen::VectorXd solve(const Eigen::SparseMatrix<double>& matrix, const Eigen::VectorXd& rhs,
                      const SolveOptions& options, SolveReport& report) {
  if (matrix.rows() != matrix.cols() || matrix.rows() != rhs.size()) {
    throw std::invalid_argument("solve: dimension mismatch");
  }
  SolveMethod m = options.method;
  if (m == SolveMethod::Auto) m = matrix.rows() <= options.direct_limit ? SolveMethod::DirectCholesky : SolveMethod::CgJacobi;
  return m == SolveMethod::DirectCholesky ? solve_direct(matrix, rhs, options, report)
                                          : solve_cg(matrix, rhs, options, report);
}

const char* to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::Auto: return "auto";
    case SolveMethod::DirectCholesky: return "direct-cholesky";
    case SolveMethod::CgJacobi: return "cg-jacobi";
  }
  return "?";
}

const char* to_string(Definiteness d) {
  return d == Definiteness::SpdConfirmed ? "spd-confirmed" : "indefinite-detected";
}

}  // namespace nondiv
