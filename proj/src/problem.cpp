#include "nondiv/problem.hpp"

#include <stdexcept>

namespace nondiv {

void validate(const ProblemSpec& spec) {
  if (!(spec.theta >= 0.0 && spec.theta <= 1.0)) throw std::invalid_argument("theta must lie in [0, 1]");
  if (!(spec.lambda >= 0.0)) throw std::invalid_argument("lambda must be non-negative");
  if (!spec.coeffs.A) throw std::invalid_argument("coefficient A is missing");
  if (!spec.f) throw std::invalid_argument("right-hand side f is missing");
  if (spec.lambda == 0.0 && spec.coeffs.has_lower_order) {
    throw std::invalid_argument("lambda = 0 requires b = 0 and c = 0");
  }
  if (!(spec.domain.width() > 0.0) || !(spec.domain.height() > 0.0)) {
    throw std::invalid_argument("degenerate domain");
  }
}

ScalarField manufactured_rhs(const CoefficientField& coeffs, const ExactSolution& exact) {
  return [coeffs, exact](const Point2& x) {
    const CoefficientSample s = coeffs.at(x);
    return (s.A.cwiseProduct(exact.hess(x))).sum() + s.b.dot(exact.grad(x)) - s.c * exact.u(x);
  };
}

}  // namespace nondiv
