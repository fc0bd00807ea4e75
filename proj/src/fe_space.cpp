#include "nondiv/fe_space.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/LU>

namespace nondiv {

FeSystem::FeSystem(std::shared_ptr<const TriMesh> mesh, int degree, BoundaryMode bc, TangentialMode tangential)
    : mesh_(std::move(mesh)), degree_(degree), bc_(bc), tangential_(tangential) {
  if (!mesh_) throw std::invalid_argument("FeSystem: null mesh");
  if (degree_ != 1 && degree_ != 2) throw std::invalid_argument("FeSystem: degree must be 1 or 2");
  const TriMesh& m = *mesh_;
  num_nodes_ = m.num_vertices() + (degree_ == 2 ? m.num_edges() : 0);

  boundary_node_.assign(static_cast<std::size_t>(num_nodes_), 0);
  for (int v = 0; v < m.num_vertices(); ++v) boundary_node_[static_cast<std::size_t>(v)] = m.is_boundary_vertex(v);
  if (degree_ == 2) {
    for (const auto& be : m.boundary_edges()) {
      boundary_node_[static_cast<std::size_t>(m.num_vertices() + be.edge)] = 1;
    }
  }

  constrained_.assign(static_cast<std::size_t>(num_dofs()), 0);
  if (bc_ == BoundaryMode::StrongZero) {
    for (int node = 0; node < num_nodes_; ++node) {
      if (is_boundary_node(node)) constrained_[static_cast<std::size_t>(u_dof(node))] = 1;
    }
  }
  if (tangential_ == TangentialMode::StrongAxisAligned) {
    for (const auto& be : m.boundary_edges()) {
      const auto& ed = m.edge(be.edge);
      const Eigen::Vector2d d = m.vertex(ed[1]) - m.vertex(ed[0]);
      const double tol = 1e-12 * d.norm();
      int component;
      if (std::abs(d.y()) <= tol) component = 0;       // horizontal: tangential part is g_x
      else if (std::abs(d.x()) <= tol) component = 1;  // vertical: g_y
      else throw std::invalid_argument("FeSystem: strong tangential mode needs an axis-aligned boundary");
      std::vector<int> nodes = {ed[0], ed[1]};
      if (degree_ == 2) nodes.push_back(m.num_vertices() + be.edge);
      for (int node : nodes) constrained_[static_cast<std::size_t>(g_dof(node, component))] = 1;
    }
  }

  for (int node = 0; node < num_nodes_; ++node) {
    if (!is_constrained(u_dof(node))) ++free_u_;
    for (int c = 0; c < 2; ++c) {
      if (!is_constrained(g_dof(node, c))) ++free_g_;
    }
  }
}

std::array<int, 6> FeSystem::element_nodes(int t) const {
  const auto& tri = mesh_->triangle(t);
  std::array<int, 6> nodes = {tri[0], tri[1], tri[2], -1, -1, -1};
  if (degree_ == 2) {
    const auto& te = mesh_->triangle_edges(t);
    for (int i = 0; i < 3; ++i) nodes[static_cast<std::size_t>(3 + i)] = mesh_->num_vertices() + te[static_cast<std::size_t>(i)];
  }
  return nodes;
}

Point2 FeSystem::node_point(int node) const {
  if (node < mesh_->num_vertices()) return mesh_->vertex(node);
  const auto& ed = mesh_->edge(node - mesh_->num_vertices());
  return 0.5 * (mesh_->vertex(ed[0]) + mesh_->vertex(ed[1]));
}

void FeSystem::element_dofs(int t, std::vector<int>& dofs) const {
  const int np = nodes_per_element();
  const int nm = matrix_nodes_per_element();
  const auto nodes = element_nodes(t);
  dofs.resize(static_cast<std::size_t>(local_dof_count()));
  for (int i = 0; i < np; ++i) {
    const int node = nodes[static_cast<std::size_t>(i)];
    dofs[static_cast<std::size_t>(i)] = u_dof(node);
    dofs[static_cast<std::size_t>(np + i)] = g_dof(node, 0);
    dofs[static_cast<std::size_t>(2 * np + i)] = g_dof(node, 1);
  }
  for (int i = 0; i < nm; ++i) {
    for (int c = 0; c < 3; ++c) dofs[static_cast<std::size_t>(3 * np + 3 * i + c)] = h_dof(t, i, c);
  }
}

Eigen::Matrix<double, 3, 2> FeSystem::barycentric_gradients(int t) const {
  const auto& tri = mesh_->triangle(t);
  const Point2& p0 = mesh_->vertex(tri[0]);
  Eigen::Matrix2d jac;
  jac.col(0) = mesh_->vertex(tri[1]) - p0;
  jac.col(1) = mesh_->vertex(tri[2]) - p0;
  const Eigen::Matrix2d jit = jac.inverse().transpose();
  Eigen::Matrix<double, 3, 2> grads;
  grads.row(1) = jit.col(0).transpose();
  grads.row(2) = jit.col(1).transpose();
  grads.row(0) = -(grads.row(1) + grads.row(2));
  return grads;
}

Point2 FeSystem::map_to_physical(int t, const Eigen::Vector3d& bary) const {
  const auto& tri = mesh_->triangle(t);
  return bary(0) * mesh_->vertex(tri[0]) + bary(1) * mesh_->vertex(tri[1]) + bary(2) * mesh_->vertex(tri[2]);
}

void FeSystem::shape(const Eigen::Matrix<double, 3, 2>& grad_bary, const Eigen::Vector3d& bary,
                     ShapeValues& out) const {
  const int np = nodes_per_element();
  out.value.resize(np);
  out.gradient.resize(np, 2);
  if (degree_ == 1) {
    out.value = bary;
    out.gradient = grad_bary;
    return;
  }
  for (int i = 0; i < 3; ++i) {
    out.value(i) = bary(i) * (2.0 * bary(i) - 1.0);
    out.gradient.row(i) = (4.0 * bary(i) - 1.0) * grad_bary.row(i);
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    out.value(3 + i) = 4.0 * bary(j) * bary(k);
    out.gradient.row(3 + i) = 4.0 * (bary(k) * grad_bary.row(j) + bary(j) * grad_bary.row(k));
  }
}

Eigen::VectorXd FeSystem::matrix_shape(const Eigen::Vector3d& bary) const {
  if (degree_ == 1) return Eigen::VectorXd::Ones(1);
  return bary;
}

TripleSample evaluate(const FeSystem& system, const Eigen::VectorXd& coeffs, int t, const Eigen::Vector3d& bary) {
  if (t < 0 || t >= system.mesh().num_triangles()) throw std::out_of_range("evaluate: triangle id out of range");
  if (coeffs.size() != system.num_dofs()) throw std::invalid_argument("evaluate: coefficient vector has wrong size");
  ShapeValues sv;
  system.shape(system.barycentric_gradients(t), bary, sv);
  const auto nodes = system.element_nodes(t);
  TripleSample s;
  for (int i = 0; i < system.nodes_per_element(); ++i) {
    const int node = nodes[static_cast<std::size_t>(i)];
    const double u = coeffs(system.u_dof(node));
    const double gx = coeffs(system.g_dof(node, 0));
    const double gy = coeffs(system.g_dof(node, 1));
    s.u += u * sv.value(i);
    s.grad_u += u * sv.gradient.row(i).transpose();
    s.g += sv.value(i) * Eigen::Vector2d(gx, gy);
    s.Dg.row(0) += gx * sv.gradient.row(i);
    s.Dg.row(1) += gy * sv.gradient.row(i);
  }
  const Eigen::VectorXd m = system.matrix_shape(bary);
  for (int i = 0; i < system.matrix_nodes_per_element(); ++i) {
    const double h11 = coeffs(system.h_dof(t, i, 0));
    const double h12 = coeffs(system.h_dof(t, i, 1));
    const double h22 = coeffs(system.h_dof(t, i, 2));
    s.H += m(i) * (Eigen::Matrix2d() << h11, h12, h12, h22).finished();
  }
  return s;
}

namespace {

void require_finite(double v, const Point2& p) {
  if (!std::isfinite(v)) {
    throw std::domain_error("interpolation: non-finite field value at (" + std::to_string(p.x()) + ", " +
                            std::to_string(p.y()) + ")");
  }
}

}  // namespace

Eigen::VectorXd interpolate_u(const FeSystem& system, const ScalarField& field) {
  Eigen::VectorXd out(system.num_nodes());
  for (int node = 0; node < system.num_nodes(); ++node) {
    const Point2 p = system.node_point(node);
    out(node) = field(p);
    require_finite(out(node), p);
  }
  return out;
}

Eigen::VectorXd interpolate_g(const FeSystem& system, const VectorField& field) {
  const int n = system.num_nodes();
  Eigen::VectorXd out(2 * n);
  for (int node = 0; node < n; ++node) {
    const Point2 p = system.node_point(node);
    const Eigen::Vector2d v = field(p);
    require_finite(v.x(), p);
    require_finite(v.y(), p);
    out(node) = v.x();
    out(n + node) = v.y();
  }
  return out;
}

Eigen::VectorXd project_h(const FeSystem& system, const MatrixField& field) {
  const int nm = system.matrix_nodes_per_element();
  const QuadratureRule rule = make_quadrature(2 * system.degree() + 2);
  Eigen::VectorXd out(system.size_h());
  for (int t = 0; t < system.mesh().num_triangles(); ++t) {
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(nm, nm);
    Eigen::MatrixXd load = Eigen::MatrixXd::Zero(nm, 3);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Point2 x = system.map_to_physical(t, rule.points[q]);
      const Eigen::Matrix2d v = field(x);
      require_finite(v.sum(), x);
      const Eigen::VectorXd m = system.matrix_shape(rule.points[q]);
      mass += rule.weights[q] * m * m.transpose();
      load.col(0) += rule.weights[q] * v(0, 0) * m;
      load.col(1) += rule.weights[q] * 0.5 * (v(0, 1) + v(1, 0)) * m;
      load.col(2) += rule.weights[q] * v(1, 1) * m;
    }
    const Eigen::MatrixXd local = mass.ldlt().solve(load);
    for (int i = 0; i < nm; ++i) {
      for (int c = 0; c < 3; ++c) out((t * nm + i) * 3 + c) = local(i, c);
    }
  }
  return out;
}

Eigen::VectorXd compose(const FeSystem& system, const Eigen::VectorXd& u, const Eigen::VectorXd& g,
                        const Eigen::VectorXd& h) {
  if (u.size() != system.size_u() || g.size() != system.size_g() || h.size() != system.size_h()) {
    throw std::invalid_argument("compose: block sizes do not match the system");
  }
  Eigen::VectorXd x(system.num_dofs());
  x << u, g, h;
  return x;
}

Eigen::VectorXd interpolate_triple(const FeSystem& system, const ScalarField& u, const VectorField& grad,
                                   const MatrixField& hess) {
  return compose(system, interpolate_u(system, u), interpolate_g(system, grad), project_h(system, hess));
}

std::vector<double> integrate_elementwise(const FeSystem& system, const Eigen::VectorXd& coeffs,
                                          const QuadratureRule& rule,
                                          const std::function<double(const TripleSample&, const Point2&)>& f) {
  const TriMesh& mesh = system.mesh();
  std::vector<double> out(static_cast<std::size_t>(mesh.num_triangles()), 0.0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const TripleSample s = evaluate(system, coeffs, t, rule.points[q]);
      sum += rule.weights[q] * f(s, system.map_to_physical(t, rule.points[q]));
    }
    out[static_cast<std::size_t>(t)] = sum * mesh.area(t);
  }
  return out;
}

double integrate(const FeSystem& system, const Eigen::VectorXd& coeffs, const QuadratureRule& rule,
                 const std::function<double(const TripleSample&, const Point2&)>& f) {
  double sum = 0.0;
  for (double v : integrate_elementwise(system, coeffs, rule, f)) sum += v;
  return sum;
}

double integrate_boundary(
    const FeSystem& system, const Eigen::VectorXd& coeffs, int order,
    const std::function<double(const TripleSample&, const Point2&, const Eigen::Vector2d&)>& f) {
  const TriMesh& mesh = system.mesh();
  const LineRule rule = make_line_quadrature(order);
  double sum = 0.0;
  for (const auto& be : mesh.boundary_edges()) {
    const int t = mesh.boundary_owner(be.edge);
    const auto& te = mesh.triangle_edges(t);
    int local = 0;
    while (te[static_cast<std::size_t>(local)] != be.edge) ++local;
    const int a = (local + 1) % 3, b = (local + 2) % 3;  // counterclockwise a -> b
    const auto& tri = mesh.triangle(t);
    const Eigen::Vector2d d = mesh.vertex(tri[static_cast<std::size_t>(b)]) - mesh.vertex(tri[static_cast<std::size_t>(a)]);
    const double len = d.norm();
    const Eigen::Vector2d tangent = d / len;
    double edge_sum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      Eigen::Vector3d bary = Eigen::Vector3d::Zero();
      bary(a) = 1.0 - rule.points[q];
      bary(b) = rule.points[q];
      const TripleSample s = evaluate(system, coeffs, t, bary);
      edge_sum += rule.weights[q] * f(s, system.map_to_physical(t, bary), tangent);
    }
    sum += edge_sum * len;
  }
  return sum;
}

}  // namespace nondiv
