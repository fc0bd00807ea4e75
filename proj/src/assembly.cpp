#include "nondiv/assembly.hpp"

#include <algorithm>
#include <ostream>
#include <iomanip>
#include <stdexcept>
#include <vector>

#include "nondiv/operators.hpp"
#include "nondiv/quadrature.hpp"

namespace nondiv {

namespace {

/// Compressed column pattern built from element dof lists; add() locates
/// entries by binary search.
class PatternMatrix {
 public:
  PatternMatrix(const FeSystem& system, const std::vector<char>& constrained) : constrained_(constrained) {
    const int n = system.num_dofs();
    std::vector<std::vector<int>> columns(static_cast<std::size_t>(n));
    std::vector<int> dofs;
    for (int t = 0; t < system.mesh().num_triangles(); ++t) {
      system.element_dofs(t, dofs);
      for (int j : dofs) {
        if (constrained_[static_cast<std::size_t>(j)]) continue;
        auto& col = columns[static_cast<std::size_t>(j)];
        for (int i : dofs) {
          if (!constrained_[static_cast<std::size_t>(i)]) col.push_back(i);
        }
      }
    }
    // boundary penalty couples only nodes of one element, already present
    std::vector<int> outer(static_cast<std::size_t>(n) + 1, 0);
    for (int j = 0; j < n; ++j) {
      auto& col = columns[static_cast<std::size_t>(j)];
      if (constrained_[static_cast<std::size_t>(j)]) col.push_back(j);
      std::sort(col.begin(), col.end());
      col.erase(std::unique(col.begin(), col.end()), col.end());
      outer[static_cast<std::size_t>(j) + 1] = outer[static_cast<std::size_t>(j)] + static_cast<int>(col.size());
    }
    matrix_.resize(n, n);
    matrix_.resizeNonZeros(outer.back());
    std::copy(outer.begin(), outer.end(), matrix_.outerIndexPtr());
    for (int j = 0; j < n; ++j) {
      const auto& col = columns[static_cast<std::size_t>(j)];
      std::copy(col.begin(), col.end(), matrix_.innerIndexPtr() + outer[static_cast<std::size_t>(j)]);
      std::vector<int>().swap(columns[static_cast<std::size_t>(j)]);
    }
    std::fill(matrix_.valuePtr(), matrix_.valuePtr() + matrix_.nonZeros(), 0.0);
    for (int j = 0; j < n; ++j) {
      if (constrained_[static_cast<std::size_t>(j)]) add(j, j, 1.0);
    }
  }

  void add(int i, int j, double v) {
    const int* begin = matrix_.innerIndexPtr() + matrix_.outerIndexPtr()[j];
    const int* end = matrix_.innerIndexPtr() + matrix_.outerIndexPtr()[j + 1];
    const int* it = std::lower_bound(begin, end, i);
    matrix_.valuePtr()[it - matrix_.innerIndexPtr()] += v;
  }

  /// Scatters a local matrix, skipping constrained rows and columns.
  void scatter(const std::vector<int>& dofs, const Eigen::MatrixXd& local) {
    const auto n = static_cast<Eigen::Index>(dofs.size());
    for (Eigen::Index b = 0; b < n; ++b) {
      const int j = dofs[static_cast<std::size_t>(b)];
      if (constrained_[static_cast<std::size_t>(j)]) continue;
      for (Eigen::Index a = 0; a < n; ++a) {
        const int i = dofs[static_cast<std::size_t>(a)];
        if (constrained_[static_cast<std::size_t>(i)]) continue;
        add(i, j, local(a, b));
      }
    }
  }

  Eigen::SparseMatrix<double> release() { return std::move(matrix_); }

 private:
  const std::vector<char>& constrained_;
  Eigen::SparseMatrix<double> matrix_;
};

std::vector<char> effective_constraints(const FeSystem& system, Form form) {
  std::vector<char> mask = system.constraint_mask();
  if (form == Form::Hessianless) {
    for (int d = 3 * system.num_nodes(); d < system.num_dofs(); ++d) mask[static_cast<std::size_t>(d)] = 1;
  }
  return mask;
}

/// Residual rows of every local basis function at one point (8 x local dofs).
void residual_matrix(const FeSystem& system, const CoefficientSample& cs, double theta, Form form,
                     const ShapeValues& sv, const Eigen::VectorXd& msh, Eigen::MatrixXd& B) {
  const int np = system.nodes_per_element();
  const int nm = system.matrix_nodes_per_element();
  B.setZero(8, system.local_dof_count());
  const Eigen::Matrix2d& A = cs.A;
  for (int j = 0; j < np; ++j) {
    const double N = sv.value(j);
    const double dx = sv.gradient(j, 0);
    const double dy = sv.gradient(j, 1);
    // u
    B(0, j) = dx;
    B(1, j) = dy;
    B(7, j) = (1.0 - theta) * (cs.b(0) * dx + cs.b(1) * dy) - cs.c * N;
    // g = (N, 0)
    const int cx = np + j;
    B(0, cx) = -N;
    B(6, cx) = -dy;
    B(7, cx) = theta * cs.b(0) * N;
    // g = (0, N)
    const int cy = 2 * np + j;
    B(1, cy) = -N;
    B(6, cy) = dx;
    B(7, cy) = theta * cs.b(1) * N;
    if (form == Form::Full) {
      B(2, cx) = dx;
      B(3, cx) = dy;
      B(4, cy) = dx;
      B(5, cy) = dy;
    } else {
      B(7, cx) += A(0, 0) * dx + A(0, 1) * dy;
      B(7, cy) += A(1, 0) * dx + A(1, 1) * dy;
    }
  }
  if (form == Form::Full) {
    for (int i = 0; i < nm; ++i) {
      const double M = msh(i);
      const int c = 3 * np + 3 * i;
      B(2, c) = -M;
      B(7, c) = A(0, 0) * M;
      B(3, c + 1) = -M;
      B(4, c + 1) = -M;
      B(7, c + 1) = (A(0, 1) + A(1, 0)) * M;
      B(5, c + 2) = -M;
      B(7, c + 2) = A(1, 1) * M;
    }
  }
}

double boundary_data(const ProblemSpec& spec, const Point2& x) { return spec.r ? spec.r(x) : 0.0; }

}  // namespace

Residual residual_components(const CoefficientSample& coeffs, double theta, const TripleSample& s, Form form) {
  Residual r;
  const Eigen::Vector2d gu = s.grad_u - s.g;
  r(0) = gu(0);
  r(1) = gu(1);
  const Eigen::Matrix2d hess = form == Form::Full ? s.H : s.Dg;
  const Eigen::Matrix2d dgh = s.Dg - hess;
  r(2) = dgh(0, 0);
  r(3) = dgh(0, 1);
  r(4) = dgh(1, 0);
  r(5) = dgh(1, 1);
  r(6) = curl2(s.Dg);
  r(7) = ltheta_eval(coeffs.A, coeffs.b, coeffs.c, theta, s.u, s.grad_u, s.g, hess);
  return r;
}

int default_quadrature_order(const FeSystem& system) { return 2 * system.degree() + 2; }

AssembledSystem assemble(const FeSystem& system, const ProblemSpec& spec, const AssemblyOptions& options) {
  validate(spec);
  const int order = options.quadrature_order > 0 ? options.quadrature_order : default_quadrature_order(system);
  const QuadratureRule rule = make_quadrature(order);
  const TriMesh& mesh = system.mesh();

  AssembledSystem out;
  out.form = options.form;
  out.bc = system.boundary_mode();
  out.quadrature_order = order;
  out.constrained = effective_constraints(system, options.form);
  // products of P_k gradients with P_k values: degree 2k; smooth coefficients need more
  const int needed = spec.coeffs.smoothness == Smoothness::Constant ? 2 * system.degree() : 2 * system.degree() + 2;
  out.quadrature_warning = order < needed;

  PatternMatrix pattern(system, out.constrained);
  out.rhs = Eigen::VectorXd::Zero(system.num_dofs());

  std::vector<int> dofs;
  ShapeValues sv;
  Eigen::MatrixXd B;
  const int nloc = system.local_dof_count();
  Eigen::MatrixXd local(nloc, nloc);
  Eigen::VectorXd local_rhs(nloc);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    system.element_dofs(t, dofs);
    const auto grad_bary = system.barycentric_gradients(t);
    const double area = mesh.area(t);
    local.setZero();
    local_rhs.setZero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Point2 x = system.map_to_physical(t, rule.points[q]);
      const CoefficientSample cs = spec.coeffs.at(x);
      system.shape(grad_bary, rule.points[q], sv);
      residual_matrix(system, cs, spec.theta, options.form, sv, system.matrix_shape(rule.points[q]), B);
      const double w = rule.weights[q] * area;
      const double f = spec.f(x);
      local.noalias() += w * B.transpose() * B;
      local_rhs.noalias() += (w * f) * B.row(7).transpose();
      out.constant += w * f * f;
    }
    pattern.scatter(dofs, local);
    for (int a = 0; a < nloc; ++a) {
      const int i = dofs[static_cast<std::size_t>(a)];
      if (!out.constrained[static_cast<std::size_t>(i)]) out.rhs(i) += local_rhs(a);
    }
  }

  if (system.boundary_mode() == BoundaryMode::Penalty) {
    const LineRule line = make_line_quadrature(order);
    const int np = system.nodes_per_element();
    Eigen::MatrixXd edge_matrix(np, np);
    Eigen::VectorXd edge_rhs(np);
    std::vector<int> udofs(static_cast<std::size_t>(np));
    for (const auto& be : mesh.boundary_edges()) {
      const int t = mesh.boundary_owner(be.edge);
      const auto& te = mesh.triangle_edges(t);
      int local_edge = 0;
      while (te[static_cast<std::size_t>(local_edge)] != be.edge) ++local_edge;
      const int a = (local_edge + 1) % 3, b = (local_edge + 2) % 3;
      const auto grad_bary = system.barycentric_gradients(t);
      const auto nodes = system.element_nodes(t);
      for (int i = 0; i < np; ++i) udofs[static_cast<std::size_t>(i)] = system.u_dof(nodes[static_cast<std::size_t>(i)]);
      const auto& ed = mesh.edge(be.edge);
      const double len = (mesh.vertex(ed[1]) - mesh.vertex(ed[0])).norm();
      edge_matrix.setZero();
      edge_rhs.setZero();
      for (std::size_t q = 0; q < line.size(); ++q) {
        Eigen::Vector3d bary = Eigen::Vector3d::Zero();
        bary(a) = 1.0 - line.points[q];
        bary(b) = line.points[q];
        system.shape(grad_bary, bary, sv);
        const double w = options.penalty_weight * line.weights[q] * len;
        const double r = boundary_data(spec, system.map_to_physical(t, bary));
        edge_matrix.noalias() += w * sv.value * sv.value.transpose();
        edge_rhs.noalias() += (w * r) * sv.value;
        out.constant += w * r * r;
      }
      pattern.scatter(udofs, edge_matrix);
      for (int i = 0; i < np; ++i) {
        const int d = udofs[static_cast<std::size_t>(i)];
        if (!out.constrained[static_cast<std::size_t>(d)]) out.rhs(d) += edge_rhs(i);
      }
    }
  }
  out.matrix = pattern.release();
  return out;
}

double energy_value(const FeSystem& system, const ProblemSpec& spec, const Eigen::VectorXd& coeffs,
                    const AssemblyOptions& options) {
  const int order = options.quadrature_order > 0 ? options.quadrature_order : default_quadrature_order(system);
  const QuadratureRule rule = make_quadrature(order);
  double e = integrate(system, coeffs, rule, [&](const TripleSample& s, const Point2& x) {
    Residual r = residual_components(spec.coeffs.at(x), spec.theta, s, options.form);
    r(7) -= spec.f(x);
    return r.squaredNorm();
  });
  if (system.boundary_mode() == BoundaryMode::Penalty) {
    e += options.penalty_weight *
         integrate_boundary(system, coeffs, order, [&](const TripleSample& s, const Point2& x, const Eigen::Vector2d&) {
           const double d = s.u - boundary_data(spec, x);
           return d * d;
         });
  }
  return e;
}

void write_matrix_market(std::ostream& os, const Eigen::SparseMatrix<double>& matrix) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << matrix.rows() << ' ' << matrix.cols() << ' ' << matrix.nonZeros() << '\n';
  os << std::setprecision(17);
  for (int j = 0; j < matrix.outerSize(); ++j) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, j); it; ++it) {
      os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
    }
  }
}

}  // namespace nondiv
