#include "nondiv/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "nondiv/quadrature.hpp"

namespace nondiv {

namespace {

std::vector<int> ranked(const IndicatorField& ind) {
  std::vector<int> order(ind.eta_sq.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return ind.eta_sq[static_cast<std::size_t>(a)] > ind.eta_sq[static_cast<std::size_t>(b)];
  });
  return order;
}

// ceil(beta n) without rounding noise pushing exact products up by one
std::size_t marked_count(double beta, std::size_t n) {
  const double x = beta * static_cast<double>(n);
  const double r = std::round(x);
  return static_cast<std::size_t>(std::abs(x - r) <= 1e-9 * std::max(1.0, x) ? r : std::ceil(x));
}

void check_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("mark: beta must lie in (0, 1)");
}

}  // namespace

IndicatorField estimate(const FeSystem& system, const ProblemSpec& spec, const Eigen::VectorXd& coeffs,
                        const AssemblyOptions& options) {
  const int order = options.quadrature_order > 0 ? options.quadrature_order : default_quadrature_order(system);
  IndicatorField out;
  out.eta_sq = integrate_elementwise(system, coeffs, make_quadrature(order), [&](const TripleSample& s, const Point2& x) {
    Residual r = residual_components(spec.coeffs.at(x), spec.theta, s, options.form);
    r(7) -= spec.f(x);
    return r.squaredNorm();
  });
  out.eta_total_sq = std::accumulate(out.eta_sq.begin(), out.eta_sq.end(), 0.0);
  return out;
}

std::vector<int> mark(const IndicatorField& indicators, double beta) {
  check_beta(beta);
  const std::size_t n = indicators.eta_sq.size();
  const auto count = std::min(n, marked_count(beta, n));
  std::vector<int> order = ranked(indicators);
  order.resize(count);
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<int> mark_dorfler(const IndicatorField& indicators, double beta) {
  check_beta(beta);
  std::vector<int> order = ranked(indicators);
  const double target = beta * indicators.eta_total_sq;
  double sum = 0.0;
  std::size_t count = 0;
  while (count < order.size() && (count == 0 || sum < target)) {
    sum += indicators.eta_sq[static_cast<std::size_t>(order[count])];
    ++count;
  }
  order.resize(count);
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace nondiv
