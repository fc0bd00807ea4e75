#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "nondiv/mesh.hpp"
#include "nondiv/problem.hpp"

namespace nondiv {

enum class CordesCondition { General, Special };

// Pointwise kernels.  Dimension-generic: A is d x d symmetric, b has d
// entries, and ||.|| is the Frobenius (Euclidean) norm.

/// (|A|^2 + |b|^2 / 2 lambda + (c / lambda)^2) / (tr A + c / lambda)^2, lambda > 0.
template <typename DerivedA, typename DerivedB>
double cordes_ratio(const Eigen::MatrixBase<DerivedA>& A, const Eigen::MatrixBase<DerivedB>& b, double c,
                    double lambda) {
  const double cl = c / lambda;
  const double denom = A.trace() + cl;
  return (A.squaredNorm() + b.squaredNorm() / (2.0 * lambda) + cl * cl) / (denom * denom);
}

/// |A|^2 / (tr A)^2.
template <typename DerivedA>
double special_cordes_ratio(const Eigen::MatrixBase<DerivedA>& A) {
  const double tr = A.trace();
  return A.squaredNorm() / (tr * tr);
}

/// Right-hand side of the Cordes inequality: 1/(d + eps) or 1/(d - 1 + eps).
inline double cordes_bound(int dim, double epsilon, CordesCondition condition) {
  return 1.0 / ((condition == CordesCondition::General ? dim : dim - 1) + epsilon);
}

/// Scaling function gamma.
template <typename DerivedA, typename DerivedB>
double scaling_gamma(const Eigen::MatrixBase<DerivedA>& A, const Eigen::MatrixBase<DerivedB>& b, double c,
                     double lambda) {
  if (lambda == 0.0) return A.trace() / A.squaredNorm();
  const double cl = c / lambda;
  return (A.trace() + cl) / (A.squaredNorm() + b.squaredNorm() / (2.0 * lambda) + cl * cl);
}

struct CordesReport {
  CordesCondition condition = CordesCondition::General;
  double epsilon_tested = 0.0;
  bool holds = false;
  double worst_ratio = 0.0;
  Point2 worst_point = Point2::Zero();
  double epsilon_max_estimate = 0.0;
  int sample_count = 0;
  bool division_hazard = false;  // tr A + c / lambda <= 0 at worst_point
};

struct Ellipticity {
  double lambda_flat = 0.0;   // min eigenvalue of A over the samples
  double lambda_sharp = 0.0;  // max eigenvalue
};

/// Cell centres of an n x n grid over the box.
std::vector<Point2> sample_grid(const Box& box, int n);

/// Grid samples plus, when a mesh is given, the physical points of an
/// order-6 rule on every triangle.
std::vector<Point2> cordes_samples(const Box& box, int grid = 512, const TriMesh* mesh = nullptr);

/// Throws std::invalid_argument for an empty sample set, a nonsymmetric
/// sample of A, or a non-positive eigenvalue.
Ellipticity check_ellipticity(const CoefficientField& coeffs, std::span<const Point2> samples);

/// Evaluates the Cordes ratio at every sample.  Throws std::invalid_argument
/// if epsilon is outside (0, 1), if the general condition is requested with
/// lambda == 0, or the special one for a field with lower-order terms.
CordesReport check_cordes(const ProblemSpec& spec, double epsilon, std::span<const Point2> samples,
                          CordesCondition condition);

double gamma_at(const ProblemSpec& spec, const Point2& x);
double sup_gamma(const ProblemSpec& spec, std::span<const Point2> samples);

/// Essential sups over samples; norms are Frobenius / Euclidean.
struct CoefficientBounds {
  double sup_gamma = 0.0;
  double sup_A = 0.0;
  double sup_b = 0.0;
  double sup_c = 0.0;
};

CoefficientBounds coefficient_bounds(const ProblemSpec& spec, std::span<const Point2> samples);

struct ConstantsReport {
  double sup_gamma = 0.0;
  double poincare = 0.0;
  double coercive_hat = 0.0;   // restricted (Hessian-less) form
  double coercive_full = 0.0;  // full form
  double continuity = 0.0;
};

/// Closed-form coercivity and continuity constants in two dimensions.
ConstantsReport compute_constants(double theta, double lambda, double epsilon, double poincare,
                                  const CoefficientBounds& bounds);
ConstantsReport compute_constants(const ProblemSpec& spec, double epsilon, double poincare,
                                  std::span<const Point2> samples);

/// mu / (1 + mu) with mu the first Dirichlet eigenvalue of the box, so that
/// |grad v|^2 >= C |v|_{H^1}^2 for v in H^1_0.
double poincare_constant(const Box& box);

}  // namespace nondiv
