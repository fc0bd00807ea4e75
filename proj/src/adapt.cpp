#include "nondiv/adapt.hpp"

#include <stdexcept>

namespace nondiv {

DiscreteSolution solve_on_mesh(std::shared_ptr<const TriMesh> mesh, const ProblemSpec& spec,
                               const DiscretizationOptions& options) {
  if (!spec.zero_boundary() && options.bc != BoundaryMode::Penalty) {
    throw std::invalid_argument("solve_on_mesh: nonzero boundary data needs penalty mode");
  }
  DiscreteSolution out;
  out.system = std::make_shared<const FeSystem>(std::move(mesh), options.degree, options.bc, options.tangential);
  const AssembledSystem sys = assemble(*out.system, spec, options.assembly);
  out.quadrature_warning = sys.quadrature_warning;
  out.coeffs = solve(sys.matrix, sys.rhs, options.solver, out.report);
  return out;
}

AdaptState adaptive_solve(const ProblemSpec& spec, std::shared_ptr<const TriMesh> initial,
                          const DiscretizationOptions& discretization, const AdaptOptions& options) {
  if (!(options.beta > 0.0 && options.beta < 1.0)) throw std::invalid_argument("adaptive_solve: beta must lie in (0, 1)");
  if (options.maxiter < 1) throw std::invalid_argument("adaptive_solve: maxiter must be >= 1");
  AdaptState state;
  std::shared_ptr<const TriMesh> mesh = std::move(initial);
  for (int level = 0;; ++level) {
    DiscreteSolution sol;
    try {
      sol = solve_on_mesh(mesh, spec, discretization);
    } catch (const SolverError& e) {
      throw AdaptError(std::string("adaptive_solve: level ") + std::to_string(level) + ": " + e.what(),
                       std::move(state));
    }
    IndicatorField ind = estimate(*sol.system, spec, sol.coeffs, discretization.assembly);

    AdaptLevel rec;
    rec.level = level;
    rec.ndof = sol.system->total_ndof();
    rec.h_max = mesh_quality(*mesh).h_max;
    rec.eta_total_sq = ind.eta_total_sq;
    rec.report = sol.report;

    bool stop = false;
    if (ind.eta_total_sq <= options.tol) {
      state.stop_reason = StopReason::TolReached;
      stop = true;
    } else if (level + 1 >= options.maxiter) {
      state.stop_reason = StopReason::MaxIter;
      stop = true;
    }
    std::vector<int> marked;
    if (!stop) {
      marked = options.marking == Marking::ElementFraction ? mark(ind, options.beta) : mark_dorfler(ind, options.beta);
      rec.num_marked = static_cast<int>(marked.size());
    }
    state.levels.push_back(rec);
    state.meshes.push_back(mesh);
    state.solutions.push_back(std::move(sol));
    state.indicators.push_back(std::move(ind));
    if (stop) break;
    mesh = std::make_shared<const TriMesh>(bisect_refine(*mesh, marked));
  }
  return state;
}

const char* to_string(StopReason r) { return r == StopReason::TolReached ? "tol-reached" : "maxiter"; }

}  // namespace nondiv
