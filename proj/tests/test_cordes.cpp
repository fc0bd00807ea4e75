#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nondiv/cordes.hpp"
#include "nondiv/problems.hpp"

using namespace nondiv;

TEST(Cordes, LowerOrderThreshold) {
  const ProblemEntry p = make_problem("tp-lower-order");
  const auto samples = cordes_samples(p.spec.domain, 64);
  const CordesReport ok = check_cordes(p.spec, 0.22, samples, CordesCondition::General);
  EXPECT_TRUE(ok.holds);
  EXPECT_NEAR(ok.worst_ratio, 0.45, 1e-14);
  EXPECT_NEAR(ok.epsilon_max_estimate, 2.0 / 9.0, 1e-12);
  EXPECT_FALSE(check_cordes(p.spec, 0.23, samples, CordesCondition::General).holds);
}

TEST(Cordes, AdaptiveCoefficientsThreshold) {
  const ProblemEntry p = make_problem("tp-peak");
  const auto samples = cordes_samples(p.spec.domain, 512);
  const CordesReport ok = check_cordes(p.spec, 0.04, samples, CordesCondition::General);
  EXPECT_TRUE(ok.holds);
  // supremum 24/49 at (1, 1): eps_max = 1/24
  EXPECT_NEAR(ok.epsilon_max_estimate, 1.0 / 24.0, 1e-3);
  EXPECT_GE(ok.epsilon_max_estimate, 1.0 / 24.0);
  EXPECT_FALSE(check_cordes(p.spec, 0.05, samples, CordesCondition::General).holds);
}

TEST(Cordes, ArctanCoefficientSpecialCondition) {
  const ProblemEntry p = make_problem("tp-nonzero-bc");
  const auto samples = cordes_samples(p.spec.domain, 512);
  const CordesReport r = check_cordes(p.spec, 0.37, samples, CordesCondition::Special);
  EXPECT_TRUE(r.holds);
  // (1 + a^2) / (1 + a)^2 is largest at a = 2 + pi/2: eps_max ~ 0.5194
  EXPECT_NEAR(r.epsilon_max_estimate, 0.5194, 2e-3);
}

TEST(Cordes, ThreeDimensionalCounterexample) {
  const Eigen::Matrix3d A = Eigen::Vector3d(1, 1, 5).asDiagonal();
  const double ratio = special_cordes_ratio(A);
  EXPECT_NEAR(ratio, 27.0 / 49.0, 1e-15);
  for (double eps = 1e-6; eps < 1.0; eps += 0.01) {
    EXPECT_GT(ratio, cordes_bound(3, eps, CordesCondition::Special));
  }
}

TEST(Cordes, IdentitySatisfiesSpecialCondition) {
  const ProblemEntry p = make_problem("tp-poly");
  const auto samples = cordes_samples(p.spec.domain, 16);
  EXPECT_TRUE(check_cordes(p.spec, 0.9, samples, CordesCondition::Special).holds);
  EXPECT_NEAR(gamma_at(p.spec, Point2(0.3, 0.3)), 1.0, 1e-15);
}

TEST(Cordes, RejectsInvalidRequests) {
  const ProblemEntry lower = make_problem("tp-lower-order");
  const ProblemEntry poly = make_problem("tp-poly");
  const auto samples = cordes_samples(lower.spec.domain, 8);
  EXPECT_THROW(check_cordes(lower.spec, 0.0, samples, CordesCondition::General), std::invalid_argument);
  EXPECT_THROW(check_cordes(lower.spec, 1.0, samples, CordesCondition::General), std::invalid_argument);
  EXPECT_THROW(check_cordes(lower.spec, 0.1, samples, CordesCondition::Special), std::invalid_argument);
  EXPECT_THROW(check_cordes(poly.spec, 0.1, samples, CordesCondition::General), std::invalid_argument);
  EXPECT_THROW(check_cordes(lower.spec, 0.1, {}, CordesCondition::General), std::invalid_argument);
}

TEST(Cordes, DivisionHazardIsReported) {
  ProblemEntry p = make_problem("tp-lower-order");
  p.spec.coeffs.c = [](const Point2&) { return -10.0; };
  const auto samples = cordes_samples(p.spec.domain, 4);
  const CordesReport r = check_cordes(p.spec, 0.1, samples, CordesCondition::General);
  EXPECT_TRUE(r.division_hazard);
  EXPECT_FALSE(r.holds);
}

TEST(Cordes, EllipticityChecks) {
  const ProblemEntry p = make_problem("tp-lower-order");
  const auto samples = cordes_samples(p.spec.domain, 8);
  const Ellipticity e = check_ellipticity(p.spec.coeffs, samples);
  EXPECT_NEAR(e.lambda_flat, 1.0, 1e-14);
  EXPECT_NEAR(e.lambda_sharp, 3.0, 1e-14);

  CoefficientField bad = p.spec.coeffs;
  bad.A = [](const Point2&) { return (Eigen::Matrix2d() << 1, 0.5, 0.0, 1).finished(); };
  EXPECT_THROW(check_ellipticity(bad, samples), std::invalid_argument);
  bad.A = [](const Point2&) { return (Eigen::Matrix2d() << 1, 2, 2, 1).finished(); };
  EXPECT_THROW(check_ellipticity(bad, samples), std::invalid_argument);
}

TEST(Cordes, GammaForLowerOrderCoefficients) {
  const ProblemEntry p = make_problem("tp-lower-order");
  EXPECT_NEAR(gamma_at(p.spec, Point2(0.5, 0.5)), 5.0 / 11.25, 1e-15);
  EXPECT_NEAR(gamma_at(p.spec, Point2(-0.5, 0.5)), 5.0 / 11.25, 1e-15);
}

TEST(Cordes, ConstantsMatchClosedForms) {
  const ProblemEntry p = make_problem("tp-lower-order");
  const auto samples = cordes_samples(p.spec.domain, 64);
  const double cp = poincare_constant(p.spec.domain);
  EXPECT_NEAR(cp, 0.8315023877445784, 1e-15);
  const ConstantsReport c = compute_constants(p.spec, 0.22, cp, samples);
  EXPECT_NEAR(c.sup_gamma, 5.0 / 11.25, 1e-15);
  EXPECT_NEAR(c.coercive_hat, 3.1098065081458374e-04, 1e-18);
  EXPECT_NEAR(c.coercive_full, 1.943629067591148e-06, 1e-20);
  EXPECT_NEAR(c.continuity, 931.4911064067353, 1e-10);
}

TEST(Cordes, ConstantsWithoutLowerOrderTerms) {
  CoefficientBounds b;
  b.sup_gamma = 1.0;
  b.sup_A = std::sqrt(2.0);
  const double cp = poincare_constant(Box{Point2(0, 0), Point2(1, 1)});
  EXPECT_NEAR(cp, 0.9517821528517063, 1e-15);
  const ConstantsReport c = compute_constants(0.5, 0.0, 0.5, cp, b);
  EXPECT_NEAR(c.coercive_hat, 0.03885650652818608, 1e-15);
  EXPECT_THROW(compute_constants(0.5, 0.0, 1.5, cp, b), std::invalid_argument);
}
