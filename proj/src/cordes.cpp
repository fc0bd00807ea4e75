#include "nondiv/cordes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "nondiv/quadrature.hpp"

namespace nondiv {

std::vector<Point2> sample_grid(const Box& box, int n) {
  if (n < 1) throw std::invalid_argument("sample_grid: n must be >= 1");
  std::vector<Point2> out;
  out.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      out.emplace_back(box.lo.x() + box.width() * (i + 0.5) / n, box.lo.y() + box.height() * (j + 0.5) / n);
    }
  }
  return out;
}

std::vector<Point2> cordes_samples(const Box& box, int grid, const TriMesh* mesh) {
  std::vector<Point2> out = sample_grid(box, grid);
  if (mesh) {
    const QuadratureRule rule = make_quadrature(6);
    for (int t = 0; t < mesh->num_triangles(); ++t) {
      const auto& tri = mesh->triangle(t);
      for (const auto& b : rule.points) {
        out.push_back(b(0) * mesh->vertex(tri[0]) + b(1) * mesh->vertex(tri[1]) + b(2) * mesh->vertex(tri[2]));
      }
    }
  }
  return out;
}

Ellipticity check_ellipticity(const CoefficientField& coeffs, std::span<const Point2> samples) {
  if (samples.empty()) throw std::invalid_argument("check_ellipticity: empty sample set");
  Ellipticity e{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& x : samples) {
    const Eigen::Matrix2d A = coeffs.A(x);
    if (std::abs(A(0, 1) - A(1, 0)) > 1e-12 * std::max(1.0, A.norm())) {
      throw std::invalid_argument("check_ellipticity: A is not symmetric");
    }
    const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(A, Eigen::EigenvaluesOnly).eigenvalues();
    e.lambda_flat = std::min(e.lambda_flat, ev(0));
    e.lambda_sharp = std::max(e.lambda_sharp, ev(1));
  }
  if (!(e.lambda_flat > 0.0)) throw std::invalid_argument("check_ellipticity: A is not positive definite");
  return e;
}

CordesReport check_cordes(const ProblemSpec& spec, double epsilon, std::span<const Point2> samples,
                          CordesCondition condition) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("check_cordes: epsilon must lie in (0, 1)");
  if (samples.empty()) throw std::invalid_argument("check_cordes: empty sample set");
  if (condition == CordesCondition::General && !(spec.lambda > 0.0)) {
    throw std::invalid_argument("check_cordes: the general condition needs lambda > 0");
  }
  if (condition == CordesCondition::Special && spec.coeffs.has_lower_order) {
    throw std::invalid_argument("check_cordes: the special condition needs b = 0 and c = 0");
  }
  constexpr int dim = 2;
  CordesReport rep;
  rep.condition = condition;
  rep.epsilon_tested = epsilon;
  rep.sample_count = static_cast<int>(samples.size());
  rep.worst_ratio = -std::numeric_limits<double>::infinity();
  for (const auto& x : samples) {
    const CoefficientSample s = spec.coeffs.at(x);
    const double denom = condition == CordesCondition::General ? s.A.trace() + s.c / spec.lambda : s.A.trace();
    if (!(denom > 0.0)) {
      rep.division_hazard = true;
      rep.worst_ratio = std::numeric_limits<double>::infinity();
      rep.worst_point = x;
      break;
    }
    const double ratio = condition == CordesCondition::General ? cordes_ratio(s.A, s.b, s.c, spec.lambda)
                                                               : special_cordes_ratio(s.A);
    if (ratio > rep.worst_ratio) {
      rep.worst_ratio = ratio;
      rep.worst_point = x;
    }
  }
  rep.holds = !rep.division_hazard && rep.worst_ratio <= cordes_bound(dim, epsilon, condition);
  rep.epsilon_max_estimate =
      1.0 / rep.worst_ratio - (condition == CordesCondition::General ? dim : dim - 1);
  return rep;
}

double gamma_at(const ProblemSpec& spec, const Point2& x) {
  const CoefficientSample s = spec.coeffs.at(x);
  const double g = scaling_gamma(s.A, s.b, s.c, spec.lambda);
  if (!std::isfinite(g)) throw std::domain_error("gamma_at: zero denominator");
  return g;
}

double sup_gamma(const ProblemSpec& spec, std::span<const Point2> samples) {
  double sup = 0.0;
  for (const auto& x : samples) sup = std::max(sup, gamma_at(spec, x));
  return sup;
}

CoefficientBounds coefficient_bounds(const ProblemSpec& spec, std::span<const Point2> samples) {
  CoefficientBounds b;
  for (const auto& x : samples) {
    const CoefficientSample s = spec.coeffs.at(x);
    b.sup_gamma = std::max(b.sup_gamma, scaling_gamma(s.A, s.b, s.c, spec.lambda));
    b.sup_A = std::max(b.sup_A, s.A.norm());
    b.sup_b = std::max(b.sup_b, s.b.norm());
    b.sup_c = std::max(b.sup_c, std::abs(s.c));
  }
  return b;
}

ConstantsReport compute_constants(double theta, double lambda, double epsilon, double poincare,
                                  const CoefficientBounds& bounds) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("compute_constants: epsilon must lie in (0, 1)");
  constexpr double d = 2.0;
  ConstantsReport r;
  r.sup_gamma = bounds.sup_gamma;
  r.poincare = poincare;
  const double gamma_factor = std::max(1.0, bounds.sup_gamma * bounds.sup_gamma);
  const double root = std::sqrt(1.0 - epsilon);
  if (lambda == 0.0) {
    const double mt = (1.0 - root) * (1.0 - root) / gamma_factor;
    r.coercive_hat = 0.5 * poincare * std::min(1.0, mt * poincare);
  } else {
    const double q = std::pow(1.0 - epsilon, 0.25) - root;
    const double num = q * q * std::min(poincare, 4.0 * lambda * lambda);
    const double den = std::max(
        2.0 * q * q * poincare + 2.0 * lambda * (theta * theta + (1.0 - theta) * (1.0 - theta)) / (1.0 - root),
        gamma_factor);
    r.coercive_hat = num / den;
  }
  const double a2 = bounds.sup_A * bounds.sup_A;
  r.coercive_full = std::min(r.coercive_hat, 4.0 * a2) / std::max(8.0, 16.0 * a2);
  const double m = std::max({bounds.sup_c, 1.0 + d * (1.0 - theta) * bounds.sup_b, 1.0 + d * theta * bounds.sup_b,
                             1.0 + std::numbers::sqrt2, 1.0 + d * d * bounds.sup_A});
  r.continuity = 5.0 * m * m;
  return r;
}

ConstantsReport compute_constants(const ProblemSpec& spec, double epsilon, double poincare,
                                  std::span<const Point2> samples) {
  return compute_constants(spec.theta, spec.lambda, epsilon, poincare, coefficient_bounds(spec, samples));
}

double poincare_constant(const Box& box) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double mu = pi2 / (box.width() * box.width()) + pi2 / (box.height() * box.height());
  return mu / (1.0 + mu);
}

}  // namespace nondiv
