#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nondiv/assembly.hpp"
#include "nondiv/estimate.hpp"
#include "nondiv/fe_space.hpp"
#include "nondiv/mesh.hpp"
#include "nondiv/problem.hpp"
#include "nondiv/solver.hpp"

namespace nondiv {

/// Everything that fixes the discrete problem on a given mesh.
struct DiscretizationOptions {
  int degree = 1;
  BoundaryMode bc = BoundaryMode::StrongZero;
  TangentialMode tangential = TangentialMode::Relaxed;
  AssemblyOptions assembly;
  SolveOptions solver;
};

struct DiscreteSolution {
  std::shared_ptr<const FeSystem> system;
  Eigen::VectorXd coeffs;
  SolveReport report;
  bool quadrature_warning = false;
};

/// Assembles and solves on one mesh.  Penalty boundary mode is required for
/// nonzero boundary data.  Solver failures propagate as SolverError.
DiscreteSolution solve_on_mesh(std::shared_ptr<const TriMesh> mesh, const ProblemSpec& spec,
                               const DiscretizationOptions& options);

enum class StopReason { TolReached, MaxIter };
enum class Marking { ElementFraction, Dorfler };

struct AdaptOptions {
  double beta = 0.3;
  double tol = 1e-6;  // compared with eta_total^2
  int maxiter = 12;   // number of solves
  Marking marking = Marking::ElementFraction;
};

struct AdaptLevel {
  int level = 0;
  int ndof = 0;
  double h_max = 0.0;
  double eta_total_sq = 0.0;
  int num_marked = 0;  // 0 on the last level
  SolveReport report;
};

struct AdaptState {
  std::vector<AdaptLevel> levels;
  std::vector<std::shared_ptr<const TriMesh>> meshes;
  std::vector<DiscreteSolution> solutions;
  std::vector<IndicatorField> indicators;
  StopReason stop_reason = StopReason::MaxIter;
};

/// solve -> estimate -> mark -> refine until eta^2 <= tol or maxiter solves.
/// A SolverError at some level is rethrown as AdaptError carrying the levels
/// completed so far.
AdaptState adaptive_solve(const ProblemSpec& spec, std::shared_ptr<const TriMesh> initial,
                          const DiscretizationOptions& discretization, const AdaptOptions& options);

class AdaptError : public std::runtime_error {
 public:
  AdaptError(const std::string& what, AdaptState partial)
      : std::runtime_error(what), partial_(std::make_shared<AdaptState>(std::move(partial))) {}
  const AdaptState& partial() const { return *partial_; }

 private:
  std::shared_ptr<AdaptState> partial_;
};

const char* to_string(StopReason r);

}  // namespace nondiv
