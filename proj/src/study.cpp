#include "nondiv/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

#include "nondiv/problems.hpp"
#include "nondiv/quadrature.hpp"

namespace nondiv {

ErrorBundle compute_errors(const FeSystem& system, const ProblemSpec& spec, const Eigen::VectorXd& coeffs, Form form) {
  if (!spec.exact) throw std::invalid_argument("compute_errors: problem has no exact solution");
  const ExactSolution& ex = *spec.exact;
  const QuadratureRule rule = make_quadrature(std::min(2 * system.degree() + 4, kMaxQuadratureOrder));
  const TriMesh& mesh = system.mesh();
  double l2u = 0.0, h1u = 0.0, l2g = 0.0, dg = 0.0, l2h = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double area = mesh.area(t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const TripleSample s = evaluate(system, coeffs, t, rule.points[q]);
      const Point2 x = system.map_to_physical(t, rule.points[q]);
      const double w = rule.weights[q] * area;
      const Eigen::Vector2d grad = ex.grad(x);
      const Eigen::Matrix2d hess = ex.hess(x);
      const double eu = s.u - ex.u(x);
      l2u += w * eu * eu;
      h1u += w * (s.grad_u - grad).squaredNorm();
      l2g += w * (s.g - grad).squaredNorm();
      dg += w * (s.Dg - hess).squaredNorm();
      l2h += w * ((form == Form::Full ? s.H : s.Dg) - hess).squaredNorm();
    }
  }
  ErrorBundle e;
  e.l2_u = std::sqrt(l2u);
  e.h1_u = std::sqrt(l2u + h1u);
  e.h1_g = std::sqrt(l2g + dg);
  e.l2_H = std::sqrt(l2h);
  e.Y = std::sqrt(e.h1_u * e.h1_u + e.h1_g * e.h1_g + e.l2_H * e.l2_H);
  return e;
}

double tangential_trace_norm(const FeSystem& system, const Eigen::VectorXd& coeffs) {
  const double v = integrate_boundary(system, coeffs, 2 * system.degree() + 2,
                                      [](const TripleSample& s, const Point2&, const Eigen::Vector2d& tangent) {
                                        const double gt = s.g.dot(tangent);
                                        return gt * gt;
                                      });
  return std::sqrt(v);
}

std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& h) {
  if (errors.size() != h.size()) throw std::invalid_argument("eoc: length mismatch");
  if (errors.size() < 2) throw std::invalid_argument("eoc: need at least two entries");
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!(errors[i] > 0.0) || !(h[i] > 0.0)) throw std::invalid_argument("eoc: entries must be positive");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    out.push_back(std::log(errors[i + 1] / errors[i]) / std::log(h[i + 1] / h[i]));
  }
  return out;
}

DiscretizationOptions discretization_for(const ProblemEntry& entry, const StudyOptions& options) {
  DiscretizationOptions d;
  d.degree = options.degree;
  d.bc = options.bc.value_or(entry.bc);
  d.tangential = options.tangential;
  d.assembly.form = options.form;
  d.assembly.quadrature_order = options.quadrature_order;
  d.solver = options.solver;
  return d;
}

namespace {

LevelRecord measure(int level, const DiscreteSolution& sol, const ProblemSpec& spec, Form form,
                    const AssemblyOptions& assembly) {
  LevelRecord r;
  r.level = level;
  r.ndof = sol.system->total_ndof();
  r.h_max = mesh_quality(sol.system->mesh()).h_max;
  r.h_eoc = r.h_max;
  if (spec.exact) r.err = compute_errors(*sol.system, spec, sol.coeffs, form);
  r.eta_total = std::sqrt(estimate(*sol.system, spec, sol.coeffs, assembly).eta_total_sq);
  r.tang_trace = tangential_trace_norm(*sol.system, sol.coeffs);
  return r;
}

ConvergenceRecord uniform_header(const std::string& problem, const StudyOptions& options) {
  ConvergenceRecord rec;
  rec.problem = problem;
  rec.k = options.degree;
  rec.theta = options.theta;
  rec.mode = "uniform";
  return rec;
}

}  // namespace

void fill_eoc(ConvergenceRecord& record) {
  auto& lv = record.levels;
  for (std::size_t i = 1; i < lv.size(); ++i) {
    const double lh = std::log(lv[i].h_eoc / lv[i - 1].h_eoc);
    auto one = [&](double a, double b) -> std::optional<double> {
      if (!(a > 0.0) || !(b > 0.0) || lh == 0.0) return std::nullopt;
      return std::log(b / a) / lh;
    };
    lv[i].eoc_H1_u = one(lv[i - 1].err.h1_u, lv[i].err.h1_u);
    lv[i].eoc_H1_g = one(lv[i - 1].err.h1_g, lv[i].err.h1_g);
    lv[i].eoc_L2_H = one(lv[i - 1].err.l2_H, lv[i].err.l2_H);
    lv[i].eoc_Y = one(lv[i - 1].err.Y, lv[i].err.Y);
  }
}

ConvergenceRecord run_uniform_study(const std::string& problem, int levels, const StudyOptions& options) {
  if (levels < 1) throw std::invalid_argument("run_uniform_study: levels must be >= 1");
  const ProblemEntry entry = make_problem(problem, options.theta);
  const DiscretizationOptions disc = discretization_for(entry, options);
  ConvergenceRecord rec = uniform_header(problem, options);
  for (int l = 0; l < levels; ++l) {
    auto mesh = std::make_shared<const TriMesh>(build_rectangle_mesh(entry.spec.domain, options.n0 << l));
    const DiscreteSolution sol = solve_on_mesh(mesh, entry.spec, disc);
    rec.levels.push_back(measure(l, sol, entry.spec, options.form, disc.assembly));
  }
  fill_eoc(rec);
  return rec;
}

ConvergenceRecord run_uniform_until(const std::string& problem, int min_ndof, const StudyOptions& options) {
  const ProblemEntry entry = make_problem(problem, options.theta);
  const DiscretizationOptions disc = discretization_for(entry, options);
  ConvergenceRecord rec = uniform_header(problem, options);
  for (int l = 0;; ++l) {
    auto mesh = std::make_shared<const TriMesh>(build_rectangle_mesh(entry.spec.domain, options.n0 << l));
    const DiscreteSolution sol = solve_on_mesh(mesh, entry.spec, disc);
    rec.levels.push_back(measure(l, sol, entry.spec, options.form, disc.assembly));
    if (rec.levels.back().ndof >= min_ndof) break;
  }
  fill_eoc(rec);
  return rec;
}

AdaptiveStudy run_adaptive_study(const std::string& problem, const StudyOptions& options, const AdaptOptions& adapt) {
  const ProblemEntry entry = make_problem(problem, options.theta);
  const DiscretizationOptions disc = discretization_for(entry, options);
  auto mesh = std::make_shared<const TriMesh>(build_rectangle_mesh(entry.spec.domain, options.n0));
  AdaptiveStudy out;
  out.state = adaptive_solve(entry.spec, mesh, disc, adapt);
  ConvergenceRecord& rec = out.record;
  rec.problem = problem;
  rec.k = options.degree;
  rec.theta = options.theta;
  rec.mode = "adaptive";
  rec.stop_reason = out.state.stop_reason;
  for (std::size_t l = 0; l < out.state.levels.size(); ++l) {
    const DiscreteSolution& sol = out.state.solutions[l];
    LevelRecord r;
    r.level = static_cast<int>(l);
    r.ndof = out.state.levels[l].ndof;
    r.h_max = out.state.levels[l].h_max;
    r.h_eoc = 1.0 / std::sqrt(static_cast<double>(r.ndof));
    if (entry.spec.exact) r.err = compute_errors(*sol.system, entry.spec, sol.coeffs, options.form);
    r.eta_total = std::sqrt(out.state.levels[l].eta_total_sq);
    r.tang_trace = tangential_trace_norm(*sol.system, sol.coeffs);
    rec.levels.push_back(r);
  }
  fill_eoc(rec);
  return out;
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

}  // namespace

void write_csv(std::ostream& os, const ConvergenceRecord& record, bool header) {
  if (header) {
    os << "problem,k,theta,mode,level,ndof,h_max,err_L2_u,err_H1_u,err_H1_g,err_L2_H,err_Y,eta_total,tang_trace,"
          "eoc_H1_u,eoc_H1_g,eoc_L2_H,eoc_Y\n";
  }
  char theta[32];
  std::snprintf(theta, sizeof theta, "%g", record.theta);
  for (const auto& l : record.levels) {
    os << record.problem << ',' << record.k << ',' << theta << ',' << record.mode << ',' << l.level << ',' << l.ndof
       << ',' << num(l.h_max) << ',' << num(l.err.l2_u) << ',' << num(l.err.h1_u) << ',' << num(l.err.h1_g) << ','
       << num(l.err.l2_H) << ',' << num(l.err.Y) << ',' << num(l.eta_total) << ',' << num(l.tang_trace) << ','
       << opt(l.eoc_H1_u) << ',' << opt(l.eoc_H1_g) << ',' << opt(l.eoc_L2_H) << ',' << opt(l.eoc_Y) << '\n';
  }
}

void write_jsonl(std::ostream& os, const ConvergenceRecord& record) {
  const auto opt_json = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  for (const auto& l : record.levels) {
    nlohmann::ordered_json j;
    j["problem"] = record.problem;
    j["k"] = record.k;
    j["theta"] = record.theta;
    j["mode"] = record.mode;
    j["level"] = l.level;
    j["ndof"] = l.ndof;
    j["h_max"] = l.h_max;
    j["err_L2_u"] = l.err.l2_u;
    j["err_H1_u"] = l.err.h1_u;
    j["err_H1_g"] = l.err.h1_g;
    j["err_L2_H"] = l.err.l2_H;
    j["err_Y"] = l.err.Y;
    j["eta_total"] = l.eta_total;
    j["tang_trace"] = l.tang_trace;
    j["eoc_H1_u"] = opt_json(l.eoc_H1_u);
    j["eoc_H1_g"] = opt_json(l.eoc_H1_g);
    j["eoc_L2_H"] = opt_json(l.eoc_L2_H);
    j["eoc_Y"] = opt_json(l.eoc_Y);
    os << j.dump() << '\n';
  }
}

}  // namespace nondiv
