#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "nondiv/mesh.hpp"
#include "nondiv/quadrature.hpp"

namespace nondiv {

using ScalarField = std::function<double(const Point2&)>;
using VectorField = std::function<Eigen::Vector2d(const Point2&)>;
using MatrixField = std::function<Eigen::Matrix2d(const Point2&)>;

enum class BoundaryMode { StrongZero, Penalty };
enum class TangentialMode { Relaxed, StrongAxisAligned };

/// Basis values and physical gradients of one element at one point.
struct ShapeValues {
  Eigen::VectorXd value;     // nodes_per_element
  Eigen::MatrixX2d gradient; // nodes_per_element x 2
};

/// Point evaluation of a (u, g, H) triple.  Dg(i, j) = d g_i / d x_j.
struct TripleSample {
  double u = 0.0;
  Eigen::Vector2d grad_u = Eigen::Vector2d::Zero();
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  Eigen::Matrix2d Dg = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d H = Eigen::Matrix2d::Zero();
};

/// Continuous P_k scalar space, continuous P_k vector space and
/// discontinuous P_{k-1} symmetric-matrix space on one mesh, k in {1, 2}.
///
/// Global coefficient layout: [u | g_x | g_y | H].  Scalar nodes are the
/// mesh vertices followed (k = 2) by one node per edge midpoint; g_x and g_y
/// reuse the scalar numbering.  H stores (H11, H12, H22) for each of the
/// element-local nodes (the centroid for k = 1, the vertices for k = 2), so
/// it couples nothing across elements.
///
/// Constrained DOFs (Dirichlet u, optional tangential g) stay in the global
/// vector with value zero; total_ndof() counts only the free ones.
class FeSystem {
 public:
  FeSystem(std::shared_ptr<const TriMesh> mesh, int degree, BoundaryMode bc = BoundaryMode::StrongZero,
           TangentialMode tangential = TangentialMode::Relaxed);

  const TriMesh& mesh() const { return *mesh_; }
  std::shared_ptr<const TriMesh> mesh_ptr() const { return mesh_; }
  int degree() const { return degree_; }
  BoundaryMode boundary_mode() const { return bc_; }
  TangentialMode tangential_mode() const { return tangential_; }

  int num_nodes() const { return num_nodes_; }
  int nodes_per_element() const { return degree_ == 1 ? 3 : 6; }
  int matrix_nodes_per_element() const { return degree_ == 1 ? 1 : 3; }
  int local_dof_count() const { return 3 * nodes_per_element() + 3 * matrix_nodes_per_element(); }

  int u_dof(int node) const { return node; }
  int g_dof(int node, int component) const { return (1 + component) * num_nodes_ + node; }
  int h_dof(int t, int local_node, int component) const {
    return 3 * num_nodes_ + (t * matrix_nodes_per_element() + local_node) * 3 + component;
  }

  int num_dofs() const { return 3 * num_nodes_ + size_h(); }
  int size_u() const { return num_nodes_; }
  int size_g() const { return 2 * num_nodes_; }
  int size_h() const { return 3 * matrix_nodes_per_element() * mesh_->num_triangles(); }
  int free_u() const { return free_u_; }
  int free_g() const { return free_g_; }
  /// free(u) + free(g) + size(H).
  int total_ndof() const { return free_u_ + free_g_ + size_h(); }

  bool is_constrained(int dof) const { return constrained_[static_cast<std::size_t>(dof)] != 0; }
  const std::vector<char>& constraint_mask() const { return constrained_; }

  /// Scalar nodes of triangle t: vertices, then (k = 2) midpoints of local edges 0, 1, 2.
  std::array<int, 6> element_nodes(int t) const;
  Point2 node_point(int node) const;
  bool is_boundary_node(int node) const { return boundary_node_[static_cast<std::size_t>(node)] != 0; }

  /// Global dofs of triangle t in local order [u | g_x | g_y | H(node, comp)].
  void element_dofs(int t, std::vector<int>& dofs) const;

  /// Physical gradients of the barycentric coordinates, rows l0, l1, l2.
  Eigen::Matrix<double, 3, 2> barycentric_gradients(int t) const;
  Point2 map_to_physical(int t, const Eigen::Vector3d& bary) const;

  void shape(const Eigen::Matrix<double, 3, 2>& grad_bary, const Eigen::Vector3d& bary, ShapeValues& out) const;
  /// Values of the element-local matrix-space basis.
  Eigen::VectorXd matrix_shape(const Eigen::Vector3d& bary) const;

 private:
  std::shared_ptr<const TriMesh> mesh_;
  int degree_;
  BoundaryMode bc_;
  TangentialMode tangential_;
  int num_nodes_ = 0;
  int free_u_ = 0;
  int free_g_ = 0;
  std::vector<char> constrained_;
  std::vector<char> boundary_node_;
};

/// Evaluates all three fields on triangle t at barycentric point bary.
/// Throws std::out_of_range for a bad triangle id and std::invalid_argument
/// when coeffs does not match num_dofs().
TripleSample evaluate(const FeSystem& system, const Eigen::VectorXd& coeffs, int t, const Eigen::Vector3d& bary);

/// Nodal interpolants.  interpolate_u has num_nodes() entries, interpolate_g
/// 2 * num_nodes() ([x | y]).  Non-finite nodal values throw std::domain_error.
Eigen::VectorXd interpolate_u(const FeSystem& system, const ScalarField& field);
Eigen::VectorXd interpolate_g(const FeSystem& system, const VectorField& field);
/// Element-wise L2 projection onto the matrix space (size_h() entries).
/// Quadrature points are interior, so fields that jump across element edges
/// are handled without ambiguity.
Eigen::VectorXd project_h(const FeSystem& system, const MatrixField& field);

/// Assembles a global coefficient vector from the three blocks.
Eigen::VectorXd compose(const FeSystem& system, const Eigen::VectorXd& u, const Eigen::VectorXd& g,
                        const Eigen::VectorXd& h);

/// Nodal interpolation of (u, grad u) and projection of the Hessian.
Eigen::VectorXd interpolate_triple(const FeSystem& system, const ScalarField& u, const VectorField& grad,
                                   const MatrixField& hess);

/// Per-element integrals of f(sample, x) over the mesh.
std::vector<double> integrate_elementwise(
    const FeSystem& system, const Eigen::VectorXd& coeffs, const QuadratureRule& rule,
    const std::function<double(const TripleSample&, const Point2&)>& f);

double integrate(const FeSystem& system, const Eigen::VectorXd& coeffs, const QuadratureRule& rule,
                 const std::function<double(const TripleSample&, const Point2&)>& f);

/// Integral of f(sample, x, unit tangent) over the boundary with a Gauss rule of the given order.
double integrate_boundary(const FeSystem& system, const Eigen::VectorXd& coeffs, int order,
                          const std::function<double(const TripleSample&, const Point2&, const Eigen::Vector2d&)>& f);

}  // namespace nondiv
