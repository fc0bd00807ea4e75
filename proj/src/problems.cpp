#include "nondiv/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nondiv {

namespace {

using std::numbers::pi;

ProblemSpec base(const std::string& name, Box domain, CoefficientField coeffs, ExactSolution exact, double theta,
                 double lambda, bool zero_bc) {
  ProblemSpec s;
  s.name = name;
  s.domain = domain;
  s.coeffs = std::move(coeffs);
  s.theta = theta;
  s.lambda = lambda;
  s.f = manufactured_rhs(s.coeffs, exact);
  if (!zero_bc) s.r = exact.u;
  s.exact = std::move(exact);
  return s;
}

// u = x^2 + xy - 2y^2 + x
ExactSolution poly_solution() {
  ExactSolution e;
  e.u = [](const Point2& x) { return x(0) * x(0) + x(0) * x(1) - 2.0 * x(1) * x(1) + x(0); };
  e.grad = [](const Point2& x) { return Eigen::Vector2d(2.0 * x(0) + x(1) + 1.0, x(0) - 4.0 * x(1)); };
  e.hess = [](const Point2&) { return (Eigen::Matrix2d() << 2.0, 1.0, 1.0, -4.0).finished(); };
  return e;
}

// sin(pi x) sin(pi y) + sin(pi (x + y))
ExactSolution trig_solution() {
  ExactSolution e;
  e.u = [](const Point2& x) { return std::sin(pi * x(0)) * std::sin(pi * x(1)) + std::sin(pi * (x(0) + x(1))); };
  e.grad = [](const Point2& x) {
    const double s1 = std::sin(pi * x(0)), c1 = std::cos(pi * x(0));
    const double s2 = std::sin(pi * x(1)), c2 = std::cos(pi * x(1));
    const double cs = std::cos(pi * (x(0) + x(1)));
    return Eigen::Vector2d(pi * (c1 * s2 + cs), pi * (s1 * c2 + cs));
  };
  e.hess = [](const Point2& x) {
    const double s1 = std::sin(pi * x(0)), c1 = std::cos(pi * x(0));
    const double s2 = std::sin(pi * x(1)), c2 = std::cos(pi * x(1));
    const double ss = std::sin(pi * (x(0) + x(1)));
    const double p2 = pi * pi;
    Eigen::Matrix2d h;
    h(0, 0) = -p2 * (s1 * s2 + ss);
    h(1, 1) = h(0, 0);
    h(0, 1) = h(1, 0) = p2 * (c1 * c2 - ss);
    return h;
  };
  return e;
}

// p(t) = t (1 - exp(1 - |t|)) and derivatives, away from t = 0
struct Jet1 {
  double v, d1, d2;
};

Jet1 exp_layer(double t) {
  const double a = std::abs(t);
  const double e = std::exp(1.0 - a);
  const double sgn = t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0);
  return {t * (1.0 - e), 1.0 - e + a * e, sgn * e * (2.0 - a)};
}

ExactSolution lower_order_solution() {
  ExactSolution e;
  e.u = [](const Point2& x) { return exp_layer(x(0)).v * exp_layer(x(1)).v; };
  e.grad = [](const Point2& x) {
    const Jet1 p = exp_layer(x(0)), q = exp_layer(x(1));
    return Eigen::Vector2d(p.d1 * q.v, p.v * q.d1);
  };
  e.hess = [](const Point2& x) {
    const Jet1 p = exp_layer(x(0)), q = exp_layer(x(1));
    Eigen::Matrix2d h;
    h << p.d2 * q.v, p.d1 * q.d1, p.d1 * q.d1, p.v * q.d2;
    return h;
  };
  return e;
}

/// Value, gradient and Hessian at one point.
struct Jet2 {
  double v;
  Eigen::Vector2d g;
  Eigen::Matrix2d h;
};

Jet2 product(const Jet2& a, const Jet2& b) {
  return {a.v * b.v, a.g * b.v + a.v * b.g, a.h * b.v + a.g * b.g.transpose() + b.g * a.g.transpose() + a.v * b.h};
}

// x(1 - x) y(1 - y), vanishing on the unit square boundary
Jet2 bubble(const Point2& x) {
  const double a = x(0) - x(0) * x(0), b = x(1) - x(1) * x(1);
  const double da = 1.0 - 2.0 * x(0), db = 1.0 - 2.0 * x(1);
  Jet2 j;
  j.v = a * b;
  j.g << da * b, a * db;
  j.h << -2.0 * b, da * db, da * db, -2.0 * a;
  return j;
}

// exp(-1000 |x - x0|^2)
Jet2 peak(const Point2& x) {
  const Point2 d = x - Point2(0.5, 0.117);
  const double e = std::exp(-1000.0 * d.squaredNorm());
  return {e, -2000.0 * e * d, e * (4.0e6 * d * d.transpose() - 2000.0 * Eigen::Matrix2d::Identity())};
}

// |x|^(-1/2)
Jet2 radial(const Point2& x) {
  const double r = x.norm();
  const double r52 = std::pow(r, -2.5);
  return {1.0 / std::sqrt(r), -0.5 * r52 * x,
          -0.5 * r52 * Eigen::Matrix2d::Identity() + 1.25 * std::pow(r, -4.5) * x * x.transpose()};
}

template <typename F>
ExactSolution from_jet(F jet) {
  ExactSolution e;
  e.u = [jet](const Point2& x) { return jet(x).v; };
  e.grad = [jet](const Point2& x) { return jet(x).g; };
  e.hess = [jet](const Point2& x) { return jet(x).h; };
  return e;
}

CoefficientField identity_coefficients() {
  CoefficientField c;
  c.A = [](const Point2&) { return Eigen::Matrix2d::Identity().eval(); };
  c.smoothness = Smoothness::Constant;
  c.has_lower_order = false;
  return c;
}

}  // namespace

CoefficientField adaptive_test_coefficients() {
  CoefficientField c;
  c.A = [](const Point2& x) {
    const double s = std::pow(std::cbrt(x(0) * x(1)), 2);
    return (Eigen::Matrix2d() << 1.0, s, s, 4.0).finished();
  };
  c.b = [](const Point2& x) {
    const double s = std::cbrt(x(0) * x(1));
    return Eigen::Vector2d(s, s);
  };
  c.c = [](const Point2&) { return 2.0; };
  c.smoothness = Smoothness::Smooth;
  return c;
}

std::vector<std::string> problem_names() {
  return {"tp-poly", "tp-nonzero-bc", "tp-lower-order", "tp-peak", "tp-singular"};
}

ProblemEntry make_problem(const std::string& name, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("make_problem: theta must lie in [0, 1]");
  const Box unit{Point2(0.0, 0.0), Point2(1.0, 1.0)};
  const Box square{Point2(-1.0, -1.0), Point2(1.0, 1.0)};
  ProblemEntry p;
  if (name == "tp-poly") {
    p.spec = base(name, unit, identity_coefficients(), poly_solution(), theta, 0.0, false);
    p.bc = BoundaryMode::Penalty;
    p.condition = CordesCondition::Special;
    p.epsilon = 0.9;
    p.description = "quadratic solution, A = I, unit square, nonzero boundary data";
  } else if (name == "tp-nonzero-bc") {
    CoefficientField c;
    c.A = [](const Point2& x) {
      return (Eigen::Matrix2d() << 1.0, 0.0, 0.0, std::atan(5000.0 * (x.squaredNorm() - 1.0)) + 2.0).finished();
    };
    c.has_lower_order = false;
    c.smoothness = Smoothness::Smooth;
    p.spec = base(name, square, std::move(c), trig_solution(), theta, 0.0, false);
    p.bc = BoundaryMode::Penalty;
    p.condition = CordesCondition::Special;
    p.epsilon = 0.37;
    p.description = "arctan layer across the unit circle, nonzero boundary data";
  } else if (name == "tp-lower-order") {
    CoefficientField c;
    c.A = [](const Point2& x) {
      const double p = x(0) * x(1);
      const double s = p > 0.0 ? 1.0 : (p < 0.0 ? -1.0 : 0.0);
      return (Eigen::Matrix2d() << 2.0, s, s, 2.0).finished();
    };
    c.b = [](const Point2&) { return Eigen::Vector2d(0.5, 0.5); };
    c.c = [](const Point2&) { return 1.0; };
    c.smoothness = Smoothness::PiecewiseAxisJumps;
    p.spec = base(name, square, std::move(c), lower_order_solution(), theta, 1.0, true);
    p.condition = CordesCondition::General;
    p.epsilon = 0.22;
    p.description = "discontinuous off-diagonal A with lower-order terms, zero boundary data";
  } else if (name == "tp-peak") {
    p.spec = base(name, unit, adaptive_test_coefficients(),
                  from_jet([](const Point2& x) { return product(bubble(x), peak(x)); }), theta, 1.0, true);
    p.condition = CordesCondition::General;
    p.epsilon = 0.04;
    p.description = "sharp peak at (0.5, 0.117), zero boundary data";
  } else if (name == "tp-singular") {
    p.spec = base(name, unit, adaptive_test_coefficients(), from_jet([](const Point2& x) {
                    Jet2 j = product(bubble(x), radial(x));
                    j.v *= 2.0;
                    j.g *= 2.0;
                    j.h *= 2.0;
                    return j;
                  }),
                  theta, 1.0, true);
    p.condition = CordesCondition::General;
    p.epsilon = 0.04;
    p.description = "gradient singularity at the origin, zero boundary data";
  } else {
    throw std::invalid_argument("make_problem: unknown problem '" + name + "'");
  }
  return p;
}

}  // namespace nondiv
