#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "nondiv/assembly.hpp"
#include "nondiv/fe_space.hpp"
#include "nondiv/problem.hpp"

namespace nondiv {

struct IndicatorField {
  std::vector<double> eta_sq;  // per triangle
  double eta_total_sq = 0.0;
};

/// eta(K)^2 = |grad u - g|^2 + |Dg - H|^2 + |rot g|^2 + |L(u, g, H) - f|^2 on K.
/// The boundary penalty is not part of the indicator.
IndicatorField estimate(const FeSystem& system, const ProblemSpec& spec, const Eigen::VectorXd& coeffs,
                        const AssemblyOptions& options = {});

/// The ceil(beta N) largest indicators, ties by ascending id, returned sorted by id.
/// Throws std::invalid_argument unless 0 < beta < 1.
std::vector<int> mark(const IndicatorField& indicators, double beta);

/// Smallest set (same ordering) whose indicators sum to at least beta * total.
std::vector<int> mark_dorfler(const IndicatorField& indicators, double beta);

}  // namespace nondiv
