#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace nondiv {

using Point2 = Eigen::Vector2d;

/// Vertex indices of a triangle, counterclockwise.  Local edge i is the edge
/// opposite local vertex i; local edge 0 is the refinement edge used by
/// newest-vertex bisection, so vertex 0 is the "newest" vertex.
using Triangle = std::array<int, 3>;

/// Axis-aligned rectangle [lo.x, hi.x] x [lo.y, hi.y].
struct Box {
  Point2 lo;
  Point2 hi;

  double width() const { return hi.x() - lo.x(); }
  double height() const { return hi.y() - lo.y(); }
  double area() const { return width() * height(); }
};

struct BoundaryEdge {
  int edge;  // global edge id
  int tag;
};

struct MeshQuality {
  double h_max = 0.0;
  double h_min = 0.0;
  double sigma = 0.0;  // max h_K / rho_K
};

/// Conforming triangulation with boundary tags and refinement genealogy.
///
/// Immutable once built.  The constructor derives the edge table and the
/// boundary and throws std::invalid_argument if a triangle is degenerate or
/// clockwise, or if an edge is shared by more than two triangles or by two
/// triangles with the same orientation.
class TriMesh {
 public:
  static constexpr int kBoundaryTag = 1;

  TriMesh(std::vector<Point2> vertices, std::vector<Triangle> triangles,
          std::vector<int> generation = {}, std::vector<int> parent = {});

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const Point2& vertex(int v) const { return vertices_[static_cast<std::size_t>(v)]; }
  const Triangle& triangle(int t) const { return triangles_[static_cast<std::size_t>(t)]; }

  /// Sorted vertex pair (a < b) of global edge e.
  const std::array<int, 2>& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
  /// Global edge ids of triangle t; entry i is opposite local vertex i.
  const std::array<int, 3>& triangle_edges(int t) const {
    return triangle_edges_[static_cast<std::size_t>(t)];
  }
  /// Number of triangles incident to edge e (1 on the boundary, 2 inside).
  int edge_multiplicity(int e) const { return edge_count_[static_cast<std::size_t>(e)]; }
  bool is_boundary_edge(int e) const { return edge_multiplicity(e) == 1; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }
  /// Triangle owning boundary edge e (the only incident one).
  int boundary_owner(int e) const { return edge_owner_[static_cast<std::size_t>(e)]; }
  bool is_boundary_vertex(int v) const { return boundary_vertex_[static_cast<std::size_t>(v)] != 0; }

  int generation(int t) const { return generation_[static_cast<std::size_t>(t)]; }
  /// Index of the parent triangle in the mesh this one was refined from, or -1.
  int parent(int t) const { return parent_[static_cast<std::size_t>(t)]; }

  double area(int t) const;
  Point2 centroid(int t) const;
  double diameter(int t) const;
  double inradius(int t) const;
  double total_area() const;

 private:
  std::vector<Point2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<int> generation_;
  std::vector<int> parent_;

  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> triangle_edges_;
  std::vector<int> edge_count_;
  std::vector<int> edge_owner_;
  std::vector<BoundaryEdge> boundary_edges_;
  std::vector<char> boundary_vertex_;
};

/// Result of an edge-incidence census.
struct ConformityCensus {
  int interior_edges = 0;
  int boundary_edges = 0;
  int euler_characteristic = 0;  // V - E + F
  bool conforming = false;
};

/// Rotates the vertex order of t so that its longest edge is local edge 0.
Triangle with_longest_edge_first(std::span<const Point2> vertices, Triangle t);

/// Structured mesh of a rectangle: n x n cells, each split along the
/// lower-left to upper-right diagonal.  2n^2 triangles, (n+1)^2 vertices.
TriMesh build_rectangle_mesh(const Point2& corner_a, const Point2& corner_b, int n);
TriMesh build_rectangle_mesh(const Box& box, int n);

/// Red refinement: each triangle is split into four similar children.
TriMesh uniform_refine(const TriMesh& mesh);

/// Newest-vertex bisection with conforming closure.  Every marked triangle is
/// bisected at least once; the output shares all input vertices.
TriMesh bisect_refine(const TriMesh& mesh, std::span<const int> marked);

MeshQuality mesh_quality(const TriMesh& mesh);

/// Counts edge incidences and checks V - E + F == 1, which fails on hanging
/// nodes for simply connected domains.
ConformityCensus conformity_census(const TriMesh& mesh);

}  // namespace nondiv
