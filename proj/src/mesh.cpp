#include "nondiv/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>

namespace nondiv {

namespace {

double signed_area(const Point2& a, const Point2& b, const Point2& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

struct EdgeEntry {
  int a, b;   // sorted
  int tri;
  int local;
  bool forward;  // traversed a -> b by the triangle
};

}  // namespace

TriMesh::TriMesh(std::vector<Point2> vertices, std::vector<Triangle> triangles,
                 std::vector<int> generation, std::vector<int> parent)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      generation_(std::move(generation)),
      parent_(std::move(parent)) {
  const auto nt = triangles_.size();
  if (generation_.empty()) generation_.assign(nt, 0);
  if (parent_.empty()) parent_.assign(nt, -1);
  if (generation_.size() != nt || parent_.size() != nt) {
    throw std::invalid_argument("TriMesh: genealogy arrays do not match triangle count");
  }
  for (const auto& p : vertices_) {
    if (!std::isfinite(p.x()) || !std::isfinite(p.y())) {
      throw std::invalid_argument("TriMesh: non-finite vertex coordinate");
    }
  }

  std::vector<EdgeEntry> entries;
  entries.reserve(3 * nt);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& tri = triangles_[t];
    for (int v : tri) {
      if (v < 0 || v >= num_vertices()) {
        throw std::invalid_argument("TriMesh: vertex index out of range in triangle " +
                                    std::to_string(t));
      }
    }
    if (!(signed_area(vertex(tri[0]), vertex(tri[1]), vertex(tri[2])) > 0.0)) {
      throw std::invalid_argument("TriMesh: triangle " + std::to_string(t) +
                                  " is degenerate or clockwise");
    }
    for (int i = 0; i < 3; ++i) {
      const int p = tri[(i + 1) % 3];
      const int q = tri[(i + 2) % 3];
      entries.push_back({std::min(p, q), std::max(p, q), static_cast<int>(t), i, p < q});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const EdgeEntry& x, const EdgeEntry& y) {
    return std::tie(x.a, x.b, x.tri, x.local) < std::tie(y.a, y.b, y.tri, y.local);
  });

  triangle_edges_.assign(nt, {-1, -1, -1});
  for (std::size_t i = 0; i < entries.size();) {
    std::size_t j = i;
    while (j < entries.size() && entries[j].a == entries[i].a && entries[j].b == entries[i].b) ++j;
    const int count = static_cast<int>(j - i);
    if (count > 2) {
      throw std::invalid_argument("TriMesh: edge shared by more than two triangles");
    }
    if (count == 2 && entries[i].forward == entries[i + 1].forward) {
      throw std::invalid_argument("TriMesh: inconsistent orientation across an edge");
    }
    const int id = static_cast<int>(edges_.size());
    edges_.push_back({entries[i].a, entries[i].b});
    edge_count_.push_back(count);
    edge_owner_.push_back(entries[i].tri);
    for (std::size_t k = i; k < j; ++k) {
      triangle_edges_[static_cast<std::size_t>(entries[k].tri)][static_cast<std::size_t>(entries[k].local)] = id;
    }
    i = j;
  }

  boundary_vertex_.assign(vertices_.size(), 0);
  for (int e = 0; e < num_edges(); ++e) {
    if (edge_count_[static_cast<std::size_t>(e)] == 1) {
      boundary_edges_.push_back({e, kBoundaryTag});
      boundary_vertex_[static_cast<std::size_t>(edges_[static_cast<std::size_t>(e)][0])] = 1;
      boundary_vertex_[static_cast<std::size_t>(edges_[static_cast<std::size_t>(e)][1])] = 1;
    }
  }
}

double TriMesh::area(int t) const {
  const auto& tri = triangle(t);
  return signed_area(vertex(tri[0]), vertex(tri[1]), vertex(tri[2]));
}

Point2 TriMesh::centroid(int t) const {
  const auto& tri = triangle(t);
  return (vertex(tri[0]) + vertex(tri[1]) + vertex(tri[2])) / 3.0;
}

double TriMesh::diameter(int t) const {
  const auto& tri = triangle(t);
  const double a = (vertex(tri[1]) - vertex(tri[2])).norm();
  const double b = (vertex(tri[2]) - vertex(tri[0])).norm();
  const double c = (vertex(tri[0]) - vertex(tri[1])).norm();
  return std::max({a, b, c});
}

double TriMesh::inradius(int t) const {
  const auto& tri = triangle(t);
  const double perimeter = (vertex(tri[1]) - vertex(tri[2])).norm() +
                           (vertex(tri[2]) - vertex(tri[0])).norm() +
                           (vertex(tri[0]) - vertex(tri[1])).norm();
  return 2.0 * area(t) / perimeter;
}

double TriMesh::total_area() const {
  double sum = 0.0;
  for (int t = 0; t < num_triangles(); ++t) sum += area(t);
  return sum;
}

Triangle with_longest_edge_first(std::span<const Point2> vertices, Triangle t) {
  int best = 0;
  double best_len = -1.0;
  for (int i = 0; i < 3; ++i) {
    const auto& p = vertices[static_cast<std::size_t>(t[static_cast<std::size_t>((i + 1) % 3)])];
    const auto& q = vertices[static_cast<std::size_t>(t[static_cast<std::size_t>((i + 2) % 3)])];
    const double len = (p - q).squaredNorm();
    // strict comparison with a relative margin keeps ties on the first edge
    if (len > best_len * (1.0 + 1e-12)) {
      best = i;
      best_len = len;
    }
  }
  return {t[static_cast<std::size_t>(best)], t[static_cast<std::size_t>((best + 1) % 3)],
          t[static_cast<std::size_t>((best + 2) % 3)]};
}

TriMesh build_rectangle_mesh(const Point2& corner_a, const Point2& corner_b, int n) {
  if (n < 1) throw std::invalid_argument("build_rectangle_mesh: n must be >= 1");
  const Point2 lo = corner_a.cwiseMin(corner_b);
  const Point2 hi = corner_a.cwiseMax(corner_b);
  if (!(hi.x() > lo.x()) || !(hi.y() > lo.y())) {
    throw std::invalid_argument("build_rectangle_mesh: degenerate rectangle");
  }
  const int m = n + 1;
  std::vector<Point2> vertices;
  vertices.reserve(static_cast<std::size_t>(m * m));
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      // endpoints are set exactly so that boundary coordinates are bitwise equal
      const double x = i == n ? hi.x() : lo.x() + (hi.x() - lo.x()) * i / n;
      const double y = j == n ? hi.y() : lo.y() + (hi.y() - lo.y()) * j / n;
      vertices.emplace_back(x, y);
    }
  }
  std::vector<Triangle> triangles;
  triangles.reserve(static_cast<std::size_t>(2 * n * n));
  auto id = [m](int i, int j) { return j * m + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = id(i, j), v10 = id(i + 1, j), v11 = id(i + 1, j + 1), v01 = id(i, j + 1);
      triangles.push_back(with_longest_edge_first(vertices, {v00, v10, v11}));
      triangles.push_back(with_longest_edge_first(vertices, {v00, v11, v01}));
    }
  }
  return TriMesh(std::move(vertices), std::move(triangles));
}

TriMesh build_rectangle_mesh(const Box& box, int n) { return build_rectangle_mesh(box.lo, box.hi, n); }

TriMesh uniform_refine(const TriMesh& mesh) {
  std::vector<Point2> vertices = mesh.vertices();
  const int nv = mesh.num_vertices();
  vertices.reserve(static_cast<std::size_t>(nv + mesh.num_edges()));
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const auto& ed = mesh.edge(e);
    vertices.push_back(0.5 * (mesh.vertex(ed[0]) + mesh.vertex(ed[1])));
  }
  std::vector<Triangle> triangles;
  std::vector<int> generation, parent;
  triangles.reserve(static_cast<std::size_t>(4 * mesh.num_triangles()));
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& [v0, v1, v2] = mesh.triangle(t);
    const auto& te = mesh.triangle_edges(t);
    const int m12 = nv + te[0], m20 = nv + te[1], m01 = nv + te[2];
    // each child keeps the edge parallel to the parent's refinement edge as its own
    triangles.push_back({v0, m01, m20});
    triangles.push_back({m01, v1, m12});
    triangles.push_back({m20, m12, v2});
    triangles.push_back({m12, m20, m01});
    for (int c = 0; c < 4; ++c) {
      // one red step halves h like two bisections do
      generation.push_back(mesh.generation(t) + 2);
      parent.push_back(t);
    }
  }
  return TriMesh(std::move(vertices), std::move(triangles), std::move(generation), std::move(parent));
}

TriMesh bisect_refine(const TriMesh& mesh, std::span<const int> marked) {
  const int nt = mesh.num_triangles();
  std::vector<char> edge_marked(static_cast<std::size_t>(mesh.num_edges()), 0);
  for (int t : marked) {
    if (t < 0 || t >= nt) throw std::out_of_range("bisect_refine: marked triangle id out of range");
    edge_marked[static_cast<std::size_t>(mesh.triangle_edges(t)[0])] = 1;
  }
  // closure: a triangle with any marked edge must also bisect its refinement edge
  for (bool changed = true; changed;) {
    changed = false;
    for (int t = 0; t < nt; ++t) {
      const auto& te = mesh.triangle_edges(t);
      if (edge_marked[static_cast<std::size_t>(te[0])]) continue;
      if (edge_marked[static_cast<std::size_t>(te[1])] || edge_marked[static_cast<std::size_t>(te[2])]) {
        edge_marked[static_cast<std::size_t>(te[0])] = 1;
        changed = true;
      }
    }
  }

  std::vector<Point2> vertices = mesh.vertices();
  std::vector<int> midpoint(static_cast<std::size_t>(mesh.num_edges()), -1);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (!edge_marked[static_cast<std::size_t>(e)]) continue;
    const auto& ed = mesh.edge(e);
    midpoint[static_cast<std::size_t>(e)] = static_cast<int>(vertices.size());
    vertices.push_back(0.5 * (mesh.vertex(ed[0]) + mesh.vertex(ed[1])));
  }

  // Maps a vertex pair of the coarse mesh back to its global edge.
  auto find_edge = [&mesh](int t, int a, int b) {
    const auto& tri = mesh.triangle(t);
    for (int i = 0; i < 3; ++i) {
      const int p = tri[static_cast<std::size_t>((i + 1) % 3)];
      const int q = tri[static_cast<std::size_t>((i + 2) % 3)];
      if ((p == a && q == b) || (p == b && q == a)) return mesh.triangle_edges(t)[static_cast<std::size_t>(i)];
    }
    return -1;
  };

  std::vector<Triangle> triangles;
  std::vector<int> generation, parent;
  triangles.reserve(static_cast<std::size_t>(nt) * 2);

  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangle(t);
    const int e0 = mesh.triangle_edges(t)[0];
    if (!edge_marked[static_cast<std::size_t>(e0)]) {
      triangles.push_back(tri);
      generation.push_back(mesh.generation(t));
      parent.push_back(t);
      continue;
    }
    const int m = midpoint[static_cast<std::size_t>(e0)];
    const Triangle children[2] = {{m, tri[0], tri[1]}, {m, tri[2], tri[0]}};
    for (const auto& child : children) {
      // the child's refinement edge is an original edge of t
      const int ce = find_edge(t, child[1], child[2]);
      if (edge_marked[static_cast<std::size_t>(ce)]) {
        const int mm = midpoint[static_cast<std::size_t>(ce)];
        triangles.push_back({mm, child[0], child[1]});
        triangles.push_back({mm, child[2], child[0]});
        for (int c = 0; c < 2; ++c) {
          generation.push_back(mesh.generation(t) + 2);
          parent.push_back(t);
        }
      } else {
        triangles.push_back(child);
        generation.push_back(mesh.generation(t) + 1);
        parent.push_back(t);
      }
    }
  }
  return TriMesh(std::move(vertices), std::move(triangles), std::move(generation), std::move(parent));
}

MeshQuality mesh_quality(const TriMesh& mesh) {
  MeshQuality q;
  q.h_min = std::numeric_limits<double>::infinity();
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double h = mesh.diameter(t);
    q.h_max = std::max(q.h_max, h);
    q.h_min = std::min(q.h_min, h);
    q.sigma = std::max(q.sigma, h / mesh.inradius(t));
  }
  return q;
}

ConformityCensus conformity_census(const TriMesh& mesh) {
  ConformityCensus census;
  bool counts_ok = true;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const int m = mesh.edge_multiplicity(e);
    if (m == 1) ++census.boundary_edges;
    else if (m == 2) ++census.interior_edges;
    else counts_ok = false;
  }
  census.euler_characteristic = mesh.num_vertices() - mesh.num_edges() + mesh.num_triangles();
  census.conforming = counts_ok && census.euler_characteristic == 1;
  return census;
}

}  // namespace nondiv
