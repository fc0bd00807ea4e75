#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace nondiv {

enum class SolveMethod { Auto, DirectCholesky, CgJacobi };
enum class Definiteness { SpdConfirmed, IndefiniteDetected };

struct SolveReport {
  SolveMethod method = SolveMethod::DirectCholesky;
  int iterations = 0;  // 0 for the direct method
  double rel_residual = 0.0;
  Definiteness definiteness = Definiteness::SpdConfirmed;
};

struct SolveOptions {
  SolveMethod method = SolveMethod::Auto;
  double tol = 1e-10;       // relative residual |S x - rhs| / |rhs|
  int max_iterations = 0;   // 0: 20 * ndof
  int direct_limit = 200000;  // Auto uses the direct method up to this size
};

/// Thrown on indefiniteness or non-convergence; carries the partial report.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, SolveReport report) : std::runtime_error(what), report_(report) {}
  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

/// Solves S x = rhs for symmetric S (lower and upper triangles stored).
Eigen::VectorXd solve(const Eigen::SparseMatrix<double>& matrix, const Eigen::VectorXd& rhs,
                      const SolveOptions& options, SolveReport& report);

const char* to_string(SolveMethod m);
const char* to_string(Definiteness d);

}  // namespace nondiv
