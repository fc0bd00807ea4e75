// nondiv: Cordes checks, single solves and convergence studies.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "nondiv/adapt.hpp"
#include "nondiv/assembly.hpp"
#include "nondiv/cordes.hpp"
#include "nondiv/estimate.hpp"
#include "nondiv/mesh_io.hpp"
#include "nondiv/problems.hpp"
#include "nondiv/study.hpp"

using namespace nondiv;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct RunConfig {
  std::string problem = "tp-lower-order";
  int k = 1;
  int n = 8;
  double theta = 0.5;
  std::optional<double> lambda;
  int levels = 0;
  bool adaptive = false;
  double beta = 0.3;
  double tol = 1e-6;
  int maxiter = 12;
  std::string marking = "fraction";
  Form form = Form::Full;
  std::optional<BoundaryMode> bc;
  TangentialMode tangential = TangentialMode::Relaxed;
  int quadrature_order = 0;
  std::optional<double> epsilon;
  bool special = false;
  int grid = 512;
  std::string csv, json, mesh_out, dump_system, solution_out;
  unsigned seed = 42;
};

const std::map<std::string, Form> kForms{{"full", Form::Full}, {"hessianless", Form::Hessianless}};
const std::map<std::string, BoundaryMode> kBcs{{"strong", BoundaryMode::StrongZero}, {"penalty", BoundaryMode::Penalty}};
const std::map<std::string, TangentialMode> kTangential{{"relaxed", TangentialMode::Relaxed},
                                                         {"strong", TangentialMode::StrongAxisAligned}};

ProblemEntry load_problem(const RunConfig& cfg) {
  ProblemEntry p = make_problem(cfg.problem, cfg.theta);
  if (cfg.lambda) p.spec.lambda = *cfg.lambda;
  validate(p.spec);
  return p;
}

void write_json_file(const std::string& path, const ordered_json& j) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << j.dump(2) << '\n';
}

int cmd_check_cordes(const RunConfig& cfg) {
  const ProblemEntry p = load_problem(cfg);
  const CordesCondition cond = cfg.special ? CordesCondition::Special : p.condition;
  const double eps = cfg.epsilon.value_or(p.epsilon);
  const auto samples = cordes_samples(p.spec.domain, cfg.grid);
  const Ellipticity ell = check_ellipticity(p.spec.coeffs, samples);
  const CordesReport rep = check_cordes(p.spec, eps, samples, cond);

  ordered_json j;
  j["problem"] = p.spec.name;
  j["condition"] = cond == CordesCondition::General ? "general" : "special";
  j["lambda"] = p.spec.lambda;
  j["epsilon"] = eps;
  j["holds"] = rep.holds;
  j["worst_ratio"] = rep.worst_ratio;
  j["bound"] = cordes_bound(2, eps, cond);
  j["worst_point"] = {rep.worst_point.x(), rep.worst_point.y()};
  j["epsilon_max_estimate"] = rep.epsilon_max_estimate;
  j["division_hazard"] = rep.division_hazard;
  j["samples"] = rep.sample_count;
  j["lambda_flat"] = ell.lambda_flat;
  j["lambda_sharp"] = ell.lambda_sharp;
  if (rep.holds) {
    const ConstantsReport c = compute_constants(p.spec, eps, poincare_constant(p.spec.domain), samples);
    j["sup_gamma"] = c.sup_gamma;
    j["poincare"] = c.poincare;
    j["coercive_hat"] = c.coercive_hat;
    j["coercive_full"] = c.coercive_full;
    j["continuity"] = c.continuity;
  }
  std::cout << j.dump(2) << '\n';
  if (!cfg.json.empty()) write_json_file(cfg.json, j);
  return rep.holds ? kExitOk : kExitFail;
}

StudyOptions study_options(const RunConfig& cfg) {
  StudyOptions o;
  o.degree = cfg.k;
  o.theta = cfg.theta;
  o.form = cfg.form;
  o.bc = cfg.bc;
  o.tangential = cfg.tangential;
  o.quadrature_order = cfg.quadrature_order;
  return o;
}

int cmd_solve(const RunConfig& cfg) {
  const ProblemEntry p = load_problem(cfg);
  const StudyOptions so = study_options(cfg);
  const DiscretizationOptions disc = discretization_for(p, so);
  auto mesh = std::make_shared<const TriMesh>(build_rectangle_mesh(p.spec.domain, cfg.n));
  const FeSystem system(mesh, disc.degree, disc.bc, disc.tangential);
  const AssembledSystem sys = assemble(system, p.spec, disc.assembly);
  if (!cfg.dump_system.empty()) {
    std::ofstream os(cfg.dump_system);
    write_matrix_market(os, sys.matrix);
  }
  if (!cfg.mesh_out.empty()) write_triangle_files(cfg.mesh_out, *mesh);

  ordered_json j;
  j["problem"] = p.spec.name;
  j["k"] = cfg.k;
  j["n"] = cfg.n;
  j["theta"] = p.spec.theta;
  j["form"] = cfg.form == Form::Full ? "full" : "hessianless";
  j["bc"] = disc.bc == BoundaryMode::Penalty ? "penalty" : "strong";
  j["ndof"] = system.total_ndof();
  j["quadrature_order"] = sys.quadrature_order;
  j["quadrature_warning"] = sys.quadrature_warning;

  SolveReport rep;
  Eigen::VectorXd x;
  try {
    x = solve(sys.matrix, sys.rhs, disc.solver, rep);
  } catch (const SolverError& e) {
    j["method"] = to_string(e.report().method);
    j["definiteness"] = to_string(e.report().definiteness);
    j["error"] = e.what();
    std::cout << j.dump(2) << '\n';
    if (!cfg.json.empty()) write_json_file(cfg.json, j);
    return kExitFail;
  }
  j["method"] = to_string(rep.method);
  j["iterations"] = rep.iterations;
  j["rel_residual"] = rep.rel_residual;
  j["definiteness"] = to_string(rep.definiteness);
  j["energy"] = energy_value(system, p.spec, x, disc.assembly);
  j["eta_total"] = std::sqrt(estimate(system, p.spec, x, disc.assembly).eta_total_sq);
  j["tang_trace"] = tangential_trace_norm(system, x);
  if (p.spec.exact) {
    const ErrorBundle e = compute_errors(system, p.spec, x, cfg.form);
    j["err_L2_u"] = e.l2_u;
    j["err_H1_u"] = e.h1_u;
    j["err_H1_g"] = e.h1_g;
    j["err_L2_H"] = e.l2_H;
    j["err_Y"] = e.Y;
  }
  if (!cfg.solution_out.empty()) {
    std::ofstream os(cfg.solution_out);
    os << "index,block,value\n" << std::setprecision(17);
    for (int i = 0; i < system.num_dofs(); ++i) {
      const char* block = i < system.size_u() ? "u" : (i < system.size_u() + system.size_g() ? "g" : "H");
      os << i << ',' << block << ',' << x(i) << '\n';
    }
  }
  std::cout << j.dump(2) << '\n';
  if (!cfg.json.empty()) write_json_file(cfg.json, j);
  return kExitOk;
}

int cmd_study(const RunConfig& cfg) {
  const ProblemEntry p = load_problem(cfg);  // validates the name early
  (void)p;
  StudyOptions so = study_options(cfg);
  ConvergenceRecord rec;
  if (cfg.adaptive) {
    so.n0 = cfg.n;
    AdaptOptions ao;
    ao.beta = cfg.beta;
    ao.tol = cfg.tol;
    ao.maxiter = cfg.maxiter;
    ao.marking = cfg.marking == "dorfler" ? Marking::Dorfler : Marking::ElementFraction;
    rec = run_adaptive_study(cfg.problem, so, ao).record;
  } else {
    so.n0 = 4;
    const int levels = cfg.levels > 0 ? cfg.levels : (cfg.k == 1 ? 4 : 3);
    rec = run_uniform_study(cfg.problem, levels, so);
  }
  if (!cfg.csv.empty()) {
    std::ofstream os(cfg.csv);
    write_csv(os, rec);
  } else {
    write_csv(std::cout, rec);
  }
  if (!cfg.json.empty()) {
    std::ofstream os(cfg.json);
    write_jsonl(os, rec);
  }
  if (cfg.adaptive) std::cerr << "stop: " << to_string(rec.stop_reason) << '\n';
  return kExitOk;
}

void add_problem_flags(CLI::App* app, RunConfig& cfg) {
  app->add_option("--problem", cfg.problem, "Test problem")->check(CLI::IsMember(problem_names()));
  app->add_option("--theta", cfg.theta, "Weight theta in L_theta")->check(CLI::Range(0.0, 1.0));
  app->add_option("--lambda", cfg.lambda, "Cordes parameter lambda")->check(CLI::NonNegativeNumber);
  app->add_option("--seed", cfg.seed, "Random seed");
}

void add_discretization_flags(CLI::App* app, RunConfig& cfg) {
  app->add_option("--k", cfg.k, "Polynomial degree")->check(CLI::IsMember({1, 2}));
  app->add_option("--form", cfg.form, "full or hessianless")->transform(CLI::CheckedTransformer(kForms));
  app->add_option("--bc", cfg.bc, "strong or penalty (default: per problem)")->transform(CLI::CheckedTransformer(kBcs));
  app->add_option("--tangential", cfg.tangential, "relaxed or strong")->transform(CLI::CheckedTransformer(kTangential));
  app->add_option("--quad-order", cfg.quadrature_order, "Quadrature order (0: 2k+2)")->check(CLI::Range(0, kMaxQuadratureOrder));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Least-squares gradient/Hessian recovery for nondivergence-form elliptic problems"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* check = app.add_subcommand("check-cordes", "Check ellipticity and the Cordes condition on a sample grid");
  add_problem_flags(check, cfg);
  check->add_option("--epsilon", cfg.epsilon, "Cordes epsilon (default: per problem)")->check(CLI::Range(0.0, 1.0));
  check->add_flag("--special", cfg.special, "Use the special condition (b = 0, c = 0)");
  check->add_option("--grid", cfg.grid, "Sample grid size per side")->check(CLI::PositiveNumber);
  check->add_option("--json", cfg.json, "Write the report as JSON");

  auto* solve_cmd = app.add_subcommand("solve", "Solve on one uniform mesh");
  add_problem_flags(solve_cmd, cfg);
  add_discretization_flags(solve_cmd, cfg);
  solve_cmd->add_option("--n", cfg.n, "Cells per side")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--json", cfg.json, "Write the solve report as JSON");
  solve_cmd->add_option("--mesh-out", cfg.mesh_out, "Basename for .node/.ele output");
  solve_cmd->add_option("--dump-system", cfg.dump_system, "Write the matrix in Matrix Market format");
  solve_cmd->add_option("--solution-out", cfg.solution_out, "Write coefficients as CSV");

  auto* study = app.add_subcommand("study", "Uniform or adaptive convergence study");
  add_problem_flags(study, cfg);
  add_discretization_flags(study, cfg);
  study->add_option("--levels", cfg.levels, "Uniform levels (default 4 for k=1, 3 for k=2)")->check(CLI::Range(1, 8));
  study->add_flag("--adaptive", cfg.adaptive, "Run the adaptive loop");
  study->add_option("--n", cfg.n, "Cells per side of the initial adaptive mesh")->check(CLI::PositiveNumber);
  study->add_option("--beta", cfg.beta, "Marking fraction")->check(CLI::Range(0.0, 1.0));
  study->add_option("--tol", cfg.tol, "Stop when eta^2 <= tol")->check(CLI::NonNegativeNumber);
  study->add_option("--maxiter", cfg.maxiter, "Maximum number of solves")->check(CLI::PositiveNumber);
  study->add_option("--marking", cfg.marking, "fraction or dorfler")->check(CLI::IsMember({"fraction", "dorfler"}));
  study->add_option("--csv", cfg.csv, "CSV output (default stdout)");
  study->add_option("--json", cfg.json, "JSON Lines output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check_cordes(cfg);
    if (solve_cmd->parsed()) return cmd_solve(cfg);
    return cmd_study(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const AdaptError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
}
