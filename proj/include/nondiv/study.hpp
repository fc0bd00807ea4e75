#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nondiv/adapt.hpp"
#include "nondiv/assembly.hpp"
#include "nondiv/fe_space.hpp"
#include "nondiv/problem.hpp"
#include "nondiv/problems.hpp"

namespace nondiv {

struct ErrorBundle {
  double l2_u = 0.0;
  double h1_u = 0.0;  // full H1 norm
  double h1_g = 0.0;
  double l2_H = 0.0;
  double Y = 0.0;     // sqrt(h1_u^2 + h1_g^2 + l2_H^2)
};

/// Errors against spec.exact with a rule of order 2k + 4 (capped at the
/// largest available).  In Hessianless form the recovered Hessian is Dg.
/// Throws std::invalid_argument if the spec has no exact solution.
ErrorBundle compute_errors(const FeSystem& system, const ProblemSpec& spec, const Eigen::VectorXd& coeffs,
                           Form form = Form::Full);

/// L2 norm of g . t over the boundary.
double tangential_trace_norm(const FeSystem& system, const Eigen::VectorXd& coeffs);

/// log(e[i+1] / e[i]) / log(h[i+1] / h[i]) for consecutive pairs.  Throws
/// std::invalid_argument on length mismatch, fewer than two entries or
/// non-positive values.
std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& h);

struct LevelRecord {
  int level = 0;
  int ndof = 0;
  double h_max = 0.0;
  double h_eoc = 0.0;  // h used for EOC: h_max (uniform) or ndof^(-1/2) (adaptive)
  ErrorBundle err;
  double eta_total = 0.0;
  double tang_trace = 0.0;
  std::optional<double> eoc_H1_u, eoc_H1_g, eoc_L2_H, eoc_Y;
};

struct ConvergenceRecord {
  std::string problem;
  int k = 1;
  double theta = 0.5;
  std::string mode;  // "uniform" or "adaptive"
  std::vector<LevelRecord> levels;
  StopReason stop_reason = StopReason::MaxIter;  // adaptive only
};

struct StudyOptions {
  int degree = 1;
  double theta = 0.5;
  Form form = Form::Full;
  std::optional<BoundaryMode> bc;  // default: the registry's choice
  TangentialMode tangential = TangentialMode::Relaxed;
  int quadrature_order = 0;
  SolveOptions solver;
  int n0 = 4;  // cells per side of the coarsest mesh
};

DiscretizationOptions discretization_for(const ProblemEntry& entry, const StudyOptions& options);

/// Solves on n0 * 2^l x n0 * 2^l meshes for l = 0 .. levels-1.
ConvergenceRecord run_uniform_study(const std::string& problem, int levels, const StudyOptions& options);

/// Uniform study continued until the last level has at least min_ndof DOFs.
ConvergenceRecord run_uniform_until(const std::string& problem, int min_ndof, const StudyOptions& options);

struct AdaptiveStudy {
  ConvergenceRecord record;
  AdaptState state;
};

AdaptiveStudy run_adaptive_study(const std::string& problem, const StudyOptions& options, const AdaptOptions& adapt);

/// Fills the EOC columns from the error columns.
void fill_eoc(ConvergenceRecord& record);

void write_csv(std::ostream& os, const ConvergenceRecord& record, bool header = true);
/// One JSON object per level with the CSV fields (JSON Lines).
void write_jsonl(std::ostream& os, const ConvergenceRecord& record);

}  // namespace nondiv
