#pragma once

#include <iosfwd>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "nondiv/fe_space.hpp"
#include "nondiv/problem.hpp"

namespace nondiv {

/// Full: unknowns (u, g, H).  Hessianless: H is replaced by Dg and the H
/// block is constrained out.
enum class Form { Full, Hessianless };

/// Pointwise least-squares residual r such that
///   a_theta(x, x') = integral of r(x) . r(x')
///   E_theta(x)     = integral of |r(x) - f e_7|^2.
/// Entries: [0,1] grad u - g, [2..5] Dg - H row-major (zero in Hessianless
/// form), [6] rot g, [7] L_theta(u, g, H).
using Residual = Eigen::Matrix<double, 8, 1>;

Residual residual_components(const CoefficientSample& coeffs, double theta, const TripleSample& s, Form form);

struct AssemblyOptions {
  Form form = Form::Full;
  double penalty_weight = 1.0;  // weight of |u - r|^2 on the boundary (penalty mode)
  int quadrature_order = 0;     // 0 selects 2k + 2
};

/// Symmetric system S x = rhs of the discrete least-squares problem.
/// Constrained DOFs carry identity rows and columns with zero right-hand side.
/// E(x) = x' S x - 2 x' rhs + constant for every admissible x.
struct AssembledSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  double constant = 0.0;  // |f|^2 (+ weight |r|^2 on the boundary)
  Form form = Form::Full;
  BoundaryMode bc = BoundaryMode::StrongZero;
  int quadrature_order = 0;
  /// Heuristic: the rule cannot be exact for the coefficient class.
  bool quadrature_warning = false;
  std::vector<char> constrained;
};

int default_quadrature_order(const FeSystem& system);

AssembledSystem assemble(const FeSystem& system, const ProblemSpec& spec, const AssemblyOptions& options = {});

/// E_theta by quadrature, including the boundary penalty term in penalty mode.
double energy_value(const FeSystem& system, const ProblemSpec& spec, const Eigen::VectorXd& coeffs,
                    const AssemblyOptions& options = {});

/// Matrix Market coordinate format ("general real").
void write_matrix_market(std::ostream& os, const Eigen::SparseMatrix<double>& matrix);

}  // namespace nondiv
