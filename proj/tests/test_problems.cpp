#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nondiv/problems.hpp"

using namespace nondiv;

namespace {

// Interior points that stay clear of the coefficient jumps (axes) and of the
// corner singularity.
std::vector<Point2> interior_points(const ProblemEntry& p, int count) {
  std::mt19937 rng(42);
  const Box& b = p.spec.domain;
  std::uniform_real_distribution<double> ux(b.lo.x() + 0.02, b.hi.x() - 0.02), uy(b.lo.y() + 0.02, b.hi.y() - 0.02);
  std::vector<Point2> out;
  while (static_cast<int>(out.size()) < count) {
    const Point2 x(ux(rng), uy(rng));
    if (std::min(std::abs(x.x()), std::abs(x.y())) < 0.02) continue;
    if (x.norm() < 0.05) continue;
    out.push_back(x);
  }
  return out;
}

}  // namespace

class ProblemJets : public ::testing::TestWithParam<std::string> {};

TEST_P(ProblemJets, DerivativesMatchFiniteDifferences) {
  const ProblemEntry p = make_problem(GetParam());
  ASSERT_TRUE(p.spec.exact.has_value());
  const ExactSolution& ex = *p.spec.exact;
  const double h = 1e-5;
  const Eigen::Vector2d e[2] = {Eigen::Vector2d::UnitX(), Eigen::Vector2d::UnitY()};
  for (const Point2& x : interior_points(p, 100)) {
    Eigen::Vector2d fd_grad;
    Eigen::Matrix2d fd_hess;
    for (int i = 0; i < 2; ++i) {
      fd_grad(i) = (ex.u(x + h * e[i]) - ex.u(x - h * e[i])) / (2 * h);
      fd_hess.col(i) = (ex.grad(x + h * e[i]) - ex.grad(x - h * e[i])) / (2 * h);
    }
    const Eigen::Vector2d g = ex.grad(x);
    const Eigen::Matrix2d H = ex.hess(x);
    EXPECT_LE((g - fd_grad).norm(), 1e-6 * std::max(1.0, g.norm())) << x.transpose();
    EXPECT_LE((H - fd_hess).norm(), 1e-5 * std::max(1.0, H.norm())) << x.transpose();
    EXPECT_LE(std::abs(H(0, 1) - H(1, 0)), 1e-12 * std::max(1.0, H.norm()));
  }
}

TEST_P(ProblemJets, RightHandSideIsConsistent) {
  const ProblemEntry p = make_problem(GetParam());
  const ExactSolution& ex = *p.spec.exact;
  for (const Point2& x : interior_points(p, 100)) {
    const CoefficientSample s = p.spec.coeffs.at(x);
    const double Lu = s.A.cwiseProduct(ex.hess(x)).sum() + s.b.dot(ex.grad(x)) - s.c * ex.u(x);
    EXPECT_LE(std::abs(Lu - p.spec.f(x)), 1e-8 * std::max(1.0, std::abs(Lu)));
  }
}

TEST_P(ProblemJets, BoundaryDataMatchesRegistry) {
  const ProblemEntry p = make_problem(GetParam());
  EXPECT_NO_THROW(validate(p.spec));
  const Box& b = p.spec.domain;
  for (int i = 0; i <= 10; ++i) {
    const double s = i / 10.0;
    for (const Point2& x : {Point2(b.lo.x() + s * b.width(), b.lo.y()), Point2(b.hi.x(), b.lo.y() + s * b.height())}) {
      if (x.norm() == 0.0) continue;  // tp-singular blows up at the corner
      if (p.spec.zero_boundary()) {
        EXPECT_NEAR(p.spec.exact->u(x), 0.0, 1e-14) << GetParam();
      } else {
        EXPECT_EQ(p.spec.r(x), p.spec.exact->u(x));
      }
    }
  }
  if (p.spec.zero_boundary()) {
    EXPECT_EQ(p.bc, BoundaryMode::StrongZero);
  } else {
    EXPECT_EQ(p.bc, BoundaryMode::Penalty);
  }
}

INSTANTIATE_TEST_SUITE_P(Registry, ProblemJets,
                         ::testing::Values("tp-poly", "tp-nonzero-bc", "tp-lower-order", "tp-peak", "tp-singular"),
                         [](const auto& info) {
                           std::string s = info.param;
                           for (char& ch : s) if (ch == '-') ch = '_';
                           return s;
                         });

TEST(Problems, ThetaIsForwarded) {
  EXPECT_DOUBLE_EQ(make_problem("tp-lower-order", 0.0).spec.theta, 0.0);
  EXPECT_DOUBLE_EQ(make_problem("tp-lower-order", 1.0).spec.theta, 1.0);
}

TEST(Problems, Rejections) {
  EXPECT_THROW(make_problem("tp-nope"), std::invalid_argument);
  EXPECT_THROW(make_problem("tp-poly", -0.1), std::invalid_argument);
  EXPECT_THROW(make_problem("tp-poly", 1.1), std::invalid_argument);
  EXPECT_EQ(problem_names().size(), 5u);
}

TEST(Problems, LowerOrderCoefficientsJumpAcrossAxes) {
  const ProblemEntry p = make_problem("tp-lower-order");
  EXPECT_EQ(p.spec.coeffs.smoothness, Smoothness::PiecewiseAxisJumps);
  const double a = p.spec.coeffs.A(Point2(0.3, 0.4))(0, 1);
  const double b = p.spec.coeffs.A(Point2(-0.3, 0.4))(0, 1);
  EXPECT_NE(a, b);
  EXPECT_DOUBLE_EQ(a, -b);
}
