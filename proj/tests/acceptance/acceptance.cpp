// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "nondiv/assembly.hpp"
#include "nondiv/cordes.hpp"
#include "nondiv/estimate.hpp"
#include "nondiv/operators.hpp"
#include "nondiv/problems.hpp"
#include "nondiv/study.hpp"

using namespace nondiv;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::shared_ptr<const TriMesh> square(const Box& box, int n) {
  return std::make_shared<const TriMesh>(build_rectangle_mesh(box, n));
}

Eigen::VectorXd random_admissible(const std::vector<char>& constrained, std::mt19937& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(static_cast<Eigen::Index>(constrained.size()));
  for (std::size_t i = 0; i < constrained.size(); ++i) v(static_cast<Eigen::Index>(i)) = constrained[i] ? 0.0 : normal(rng);
  return v;
}

Outcome cordes() {
  Outcome o;
  const ProblemEntry lo = make_problem("tp-lower-order");
  const auto s1 = cordes_samples(lo.spec.domain);
  o.check(check_cordes(lo.spec, 0.22, s1, CordesCondition::General).holds, "tp-lower-order holds at eps=0.22");
  o.check(!check_cordes(lo.spec, 0.23, s1, CordesCondition::General).holds, "tp-lower-order fails at eps=0.23");

  const ProblemEntry ad = make_problem("tp-peak");
  const auto s2 = cordes_samples(ad.spec.domain);
  const CordesReport r04 = check_cordes(ad.spec, 0.04, s2, CordesCondition::General);
  o.check(r04.holds, fmt("adaptive coefficients hold at eps=0.04 (eps_max %.4f)", r04.epsilon_max_estimate));
  o.check(!check_cordes(ad.spec, 0.05, s2, CordesCondition::General).holds, "adaptive coefficients fail at eps=0.05");

  const Eigen::Matrix3d A = Eigen::Vector3d(1, 1, 5).asDiagonal();
  bool fails_all = true;
  for (int i = 1; i < 1000; ++i) {
    if (special_cordes_ratio(A) <= cordes_bound(3, i / 1000.0, CordesCondition::Special)) fails_all = false;
  }
  o.check(fails_all, fmt("d=3 diag(1,1,5) special ratio %.4f fails for all eps", special_cordes_ratio(A)));
  return o;
}

Outcome exact_reproduction() {
  Outcome o;
  StudyOptions opts;
  opts.degree = 2;
  const ProblemEntry p = make_problem("tp-poly");
  const DiscreteSolution s = solve_on_mesh(square(p.spec.domain, 4), p.spec, discretization_for(p, opts));
  const double e = energy_value(*s.system, p.spec, s.coeffs);
  const ErrorBundle err = compute_errors(*s.system, p.spec, s.coeffs);
  o.check(e <= 1e-10, fmt("E_theta = %.3e <= 1e-10", e));
  o.check(err.Y <= 1e-8, fmt("err_Y = %.3e <= 1e-8", err.Y));
  return o;
}

Outcome uniform_eoc() {
  Outcome o;
  struct Case {
    const char* problem;
    double theta;
  };
  const Case cases[] = {{"tp-nonzero-bc", 0.5}, {"tp-lower-order", 0.0}, {"tp-lower-order", 0.5}, {"tp-lower-order", 1.0}};
  for (const Case& c : cases) {
    for (int k : {1, 2}) {
      StudyOptions opts;
      opts.degree = k;
      opts.theta = c.theta;
      const ConvergenceRecord r = run_uniform_study(c.problem, k == 1 ? 4 : 3, opts);
      const LevelRecord& last = r.levels.back();
      const double lo = k - 0.25, hi = k + 0.4;
      auto in = [&](double v) { return v >= lo && v <= hi; };
      o.check(in(*last.eoc_H1_u) && in(*last.eoc_H1_g) && in(*last.eoc_L2_H),
              fmt("%s theta=%g k=%d: EOC H1_u %.3f H1_g %.3f L2_H %.3f in [%.2f, %.2f]", c.problem, c.theta, k,
                  *last.eoc_H1_u, *last.eoc_H1_g, *last.eoc_L2_H, lo, hi));
    }
  }
  return o;
}

Outcome properties() {
  Outcome o;
  std::mt19937 rng(42);
  const Box unit{Point2(0, 0), Point2(1, 1)};

  double worst_sym = 0.0;
  for (const char* name : {"tp-lower-order", "tp-nonzero-bc", "tp-peak"}) {
    const ProblemEntry p = make_problem(name);
    for (int k : {1, 2}) {
      const FeSystem sys(square(p.spec.domain, 4), k, p.bc);
      const AssembledSystem a = assemble(sys, p.spec);
      const Eigen::SparseMatrix<double> d = a.matrix - Eigen::SparseMatrix<double>(a.matrix.transpose());
      double dmax = 0.0, amax = 0.0;
      for (int j = 0; j < d.outerSize(); ++j)
        for (Eigen::SparseMatrix<double>::InnerIterator it(d, j); it; ++it) dmax = std::max(dmax, std::abs(it.value()));
      for (int j = 0; j < a.matrix.outerSize(); ++j)
        for (Eigen::SparseMatrix<double>::InnerIterator it(a.matrix, j); it; ++it) amax = std::max(amax, std::abs(it.value()));
      worst_sym = std::max(worst_sym, dmax / amax);
    }
  }
  o.check(worst_sym <= 1e-12, fmt("matrix symmetry, max relative asymmetry %.2e", worst_sym));

  double worst_id = 0.0;
  for (const char* name : {"tp-lower-order", "tp-peak", "tp-singular"}) {
    const ProblemEntry p = make_problem(name);
    for (int k : {1, 2}) {
      StudyOptions opts;
      opts.degree = k;
      const DiscreteSolution s = solve_on_mesh(square(p.spec.domain, 8), p.spec, discretization_for(p, opts));
      const double e = energy_value(*s.system, p.spec, s.coeffs);
      const IndicatorField f = estimate(*s.system, p.spec, s.coeffs);
      worst_id = std::max(worst_id, std::abs(f.eta_total_sq - e) / e);
    }
  }
  o.check(worst_id <= 1e-12, fmt("eta_total^2 = E_theta, max relative gap %.2e", worst_id));

  int maxwell_bad = 0, maxwell_n = 0;
  int mt_bad = 0, mt_n = 0;
  for (int k : {1, 2}) {
    const FeSystem sys(square(unit, 4), k, BoundaryMode::StrongZero, TangentialMode::StrongAxisAligned);
    const QuadratureRule rule = make_quadrature(2 * k);
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::VectorXd v = random_admissible(sys.constraint_mask(), rng);
      const double lhs = integrate(sys, v, rule, [](const TripleSample& s, const Point2&) { return s.Dg.squaredNorm(); });
      const double rhs = integrate(sys, v, rule, [](const TripleSample& s, const Point2&) {
        const double d = div2(s.Dg), r = curl2(s.Dg);
        return d * d + r * r;
      });
      ++maxwell_n;
      if (lhs > rhs + 1e-10 * lhs) ++maxwell_bad;
    }
    const double lambda = 1.0, rho = 1.0;
    for (double theta : {0.0, 0.5, 1.0}) {
      for (int trial = 0; trial < 50; ++trial) {
        const Eigen::VectorXd v = random_admissible(sys.constraint_mask(), rng);
        const double lhs = (1.0 - rho / 2.0) * integrate(sys, v, rule, [&](const TripleSample& s, const Point2&) {
          return s.Dg.squaredNorm() + 2.0 * lambda * (theta * s.g + (1.0 - theta) * s.grad_u).squaredNorm() +
                 lambda * lambda * s.u * s.u;
        });
        const double rhs = integrate(sys, v, rule, [&](const TripleSample& s, const Point2&) {
          const double r = curl2(s.Dg), d = div2(s.Dg) - lambda * s.u;
          return r * r + d * d +
                 (theta * theta + (1 - theta) * (1 - theta)) * lambda / rho * (s.grad_u - s.g).squaredNorm();
        });
        ++mt_n;
        if (lhs > rhs + 1e-10 * lhs) ++mt_bad;
      }
    }
  }
  o.check(maxwell_bad == 0, fmt("discrete Maxwell inequality, %d/%d violations", maxwell_bad, maxwell_n));
  o.check(mt_bad == 0, fmt("discrete Miranda-Talenti inequality, %d/%d violations", mt_bad, mt_n));

  int mark_bad = 0;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    IndicatorField f;
    const int n = 1 + trial;
    for (int i = 0; i < n; ++i) f.eta_sq.push_back(std::floor(10 * unif(rng)));
    f.eta_total_sq = std::accumulate(f.eta_sq.begin(), f.eta_sq.end(), 0.0);
    const double beta = 0.01 + 0.98 * unif(rng);
    const std::vector<int> m = mark(f, beta);
    std::vector<char> in(static_cast<std::size_t>(n), 0);
    for (int t : m) in[static_cast<std::size_t>(t)] = 1;
    double lo = 1e300, hi = -1;
    for (int i = 0; i < n; ++i) {
      const double v = f.eta_sq[static_cast<std::size_t>(i)];
      if (in[static_cast<std::size_t>(i)]) lo = std::min(lo, v);
      else hi = std::max(hi, v);
    }
    if (m.size() != static_cast<std::size_t>(std::ceil(beta * n - 1e-12)) || lo < hi) ++mark_bad;
  }
  o.check(mark_bad == 0, fmt("marking count ceil(beta N) and dominance, %d/200 violations", mark_bad));
  return o;
}

Outcome sandwich() {
  Outcome o;
  const ProblemEntry p = make_problem("tp-lower-order");
  const ConstantsReport c =
      compute_constants(p.spec, p.epsilon, poincare_constant(p.spec.domain), cordes_samples(p.spec.domain));
  StudyOptions opts;
  const ConvergenceRecord r = run_uniform_study("tp-lower-order", 3, opts);
  for (const LevelRecord& l : r.levels) {
    const double y2 = l.err.Y * l.err.Y, eta2 = l.eta_total * l.eta_total;
    o.check(c.coercive_full * y2 <= eta2 && eta2 <= c.continuity * y2,
            fmt("level %d: %.3e <= eta^2 = %.3e <= %.3e", l.level, c.coercive_full * y2, eta2, c.continuity * y2));
  }
  return o;
}

// final err_Y of the uniform run with the nearest ndof >= target
const LevelRecord& uniform_match(const ConvergenceRecord& r, int ndof) {
  for (const LevelRecord& l : r.levels)
    if (l.ndof >= ndof) return l;
  return r.levels.back();
}

Outcome adaptive_vs_uniform() {
  Outcome o;
  struct Case {
    const char* problem;
    int k;
    double factor;
  };
  const Case cases[] = {{"tp-singular", 2, 1.0}, {"tp-peak", 1, 3.0}, {"tp-peak", 2, 3.0}};
  for (const Case& c : cases) {
    StudyOptions opts;
    opts.degree = c.k;
    AdaptOptions a;
    a.beta = 0.3;
    a.tol = 1e-6;
    a.maxiter = 12;
    const AdaptiveStudy ad = run_adaptive_study(c.problem, opts, a);
    const LevelRecord& fin = ad.record.levels.back();
    const ConvergenceRecord uni = run_uniform_until(c.problem, fin.ndof, opts);
    const LevelRecord& u = uniform_match(uni, fin.ndof);
    const double ratio = u.err.Y / fin.err.Y;
    const bool ok = c.factor > 1.0 ? ratio >= c.factor : fin.err.Y < u.err.Y;
    o.check(ok, fmt("%s k=%d: adaptive err_Y %.4e (ndof %d, %zu levels) vs uniform %.4e (ndof %d), ratio %.2f", c.problem,
                    c.k, fin.err.Y, fin.ndof, ad.record.levels.size(), u.err.Y, u.ndof, ratio));
    if (std::string(c.problem) == "tp-peak") {
      const TriMesh& mesh = *ad.state.meshes.back();
      int inside = 0;
      for (int t = 0; t < mesh.num_triangles(); ++t) {
        if ((mesh.centroid(t) - Point2(0.5, 0.117)).norm() < 0.2) ++inside;
      }
      const double share = static_cast<double>(inside) / mesh.num_triangles();
      o.check(share >= 0.5, fmt("tp-peak k=%d: %.1f%% of %d final triangles within 0.2 of the peak", c.k, 100 * share,
                                mesh.num_triangles()));
    }
  }
  return o;
}

Outcome negative_control() {
  Outcome o;
  StudyOptions opts;
  opts.degree = 2;
  const ConvergenceRecord r = run_uniform_study("tp-singular", 3, opts);
  const double rate = *r.levels.back().eoc_Y;
  o.check(rate <= 0.8, fmt("tp-singular k=2 uniform final EOC(err_Y) = %.3f <= 0.8", rate));
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"cordes-verification", 5, cordes},
      {"exact-reproduction", 10, exact_reproduction},
      {"uniform-eoc-smooth", 300, uniform_eoc},
      {"property-suite", 60, properties},
      {"reliability-efficiency-sandwich", 120, sandwich},
      {"adaptive-vs-uniform", 600, adaptive_vs_uniform},
      {"negative-control-singular", 300, negative_control},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.check(secs <= c.budget_s, fmt("runtime %.1f s within %.0f s", secs, c.budget_s));
    std::printf("%s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.name, secs);
    for (const std::string& n : o.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
