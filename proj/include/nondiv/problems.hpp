#pragma once

#include <string>
#include <vector>

#include "nondiv/cordes.hpp"
#include "nondiv/fe_space.hpp"
#include "nondiv/problem.hpp"

namespace nondiv {

/// A registered test problem and how it is meant to be discretized.
struct ProblemEntry {
  ProblemSpec spec;
  BoundaryMode bc = BoundaryMode::StrongZero;
  CordesCondition condition = CordesCondition::General;
  double epsilon = 0.0;  // Cordes epsilon the coefficients are stated to satisfy
  std::string description;
};

/// Names: tp-poly, tp-nonzero-bc, tp-lower-order, tp-peak, tp-singular.
std::vector<std::string> problem_names();

/// Builds a registry entry with the given theta.  Nonzero boundary data
/// r is the restriction of the exact solution.  Throws std::invalid_argument
/// for an unknown name or theta outside [0, 1].
ProblemEntry make_problem(const std::string& name, double theta = 0.5);

/// Coefficients shared by the adaptive tests (lambda = 1).
CoefficientField adaptive_test_coefficients();

}  // namespace nondiv
