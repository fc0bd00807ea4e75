#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "nondiv/mesh.hpp"
#include "nondiv/mesh_io.hpp"

using namespace nondiv;

namespace {

const Box kUnit{Point2(0, 0), Point2(1, 1)};

void expect_valid(const TriMesh& m, double area) {
  EXPECT_NEAR(m.total_area(), area, 1e-12 * area);
  for (int t = 0; t < m.num_triangles(); ++t) EXPECT_GT(m.area(t), 0.0);
  const ConformityCensus c = conformity_census(m);
  EXPECT_TRUE(c.conforming);
  EXPECT_EQ(c.euler_characteristic, 1);
}

}  // namespace

TEST(Mesh, RectangleCounts) {
  const TriMesh m = build_rectangle_mesh(kUnit, 2);
  EXPECT_EQ(m.num_vertices(), 9);
  EXPECT_EQ(m.num_triangles(), 8);
  EXPECT_EQ(m.num_edges(), 16);
  EXPECT_EQ(m.boundary_edges().size(), 8u);
  expect_valid(m, 1.0);
  for (const auto& be : m.boundary_edges()) EXPECT_EQ(be.tag, TriMesh::kBoundaryTag);
  EXPECT_FALSE(m.is_boundary_vertex(4));
  EXPECT_TRUE(m.is_boundary_vertex(0));
}

TEST(Mesh, RectangleRefinementEdgeIsLongest) {
  const TriMesh m = build_rectangle_mesh(Point2(-1, -1), Point2(1, 1), 4);
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangle(t);
    const double e0 = (m.vertex(tri[1]) - m.vertex(tri[2])).norm();
    EXPECT_NEAR(e0, m.diameter(t), 1e-14);
  }
  expect_valid(m, 4.0);
}

TEST(Mesh, RectangleRejectsBadInput) {
  EXPECT_THROW(build_rectangle_mesh(kUnit, 0), std::invalid_argument);
  EXPECT_THROW(build_rectangle_mesh(Point2(0, 0), Point2(1, 0), 2), std::invalid_argument);
}

TEST(Mesh, ConstructorRejectsDegenerateAndClockwise) {
  std::vector<Point2> v{{0, 0}, {1, 0}, {2, 0}};
  EXPECT_THROW(TriMesh(v, {{0, 1, 2}}), std::invalid_argument);
  std::vector<Point2> w{{0, 0}, {1, 0}, {0, 1}};
  EXPECT_THROW(TriMesh(w, {{0, 2, 1}}), std::invalid_argument);
  EXPECT_NO_THROW(TriMesh(w, {{0, 1, 2}}));
}

TEST(Mesh, UniformRefineQuadruples) {
  const TriMesh m = build_rectangle_mesh(kUnit, 2);
  const TriMesh r = uniform_refine(m);
  EXPECT_EQ(r.num_triangles(), 4 * m.num_triangles());
  EXPECT_EQ(r.num_vertices(), m.num_vertices() + m.num_edges());
  expect_valid(r, 1.0);
  EXPECT_NEAR(mesh_quality(r).h_max, 0.5 * mesh_quality(m).h_max, 1e-14);
  for (int t = 0; t < r.num_triangles(); ++t) {
    EXPECT_EQ(r.generation(t), m.generation(r.parent(t)) + 2);
  }
}

TEST(Mesh, BisectionSplitsMarkedAndStaysConforming) {
  const TriMesh m = build_rectangle_mesh(kUnit, 4);
  const std::vector<int> marked{5, 17, 30};
  const TriMesh r = bisect_refine(m, marked);
  expect_valid(r, 1.0);
  std::vector<int> children(static_cast<std::size_t>(m.num_triangles()), 0);
  for (int t = 0; t < r.num_triangles(); ++t) ++children[static_cast<std::size_t>(r.parent(t))];
  for (int t : marked) EXPECT_GE(children[static_cast<std::size_t>(t)], 2);
  for (int v = 0; v < m.num_vertices(); ++v) EXPECT_EQ(r.vertex(v), m.vertex(v));
  EXPECT_THROW(bisect_refine(m, std::vector<int>{m.num_triangles()}), std::out_of_range);
}

TEST(Mesh, BisectionWithNothingMarkedIsIdentity) {
  const TriMesh m = build_rectangle_mesh(kUnit, 3);
  const TriMesh r = bisect_refine(m, {});
  EXPECT_EQ(r.num_triangles(), m.num_triangles());
  EXPECT_EQ(r.num_vertices(), m.num_vertices());
}

TEST(Mesh, RepeatedBisectionKeepsShapeRegularity) {
  std::mt19937 rng(42);
  TriMesh m = build_rectangle_mesh(kUnit, 2);
  const double sigma0 = mesh_quality(m).sigma;
  for (int step = 0; step < 12; ++step) {
    std::vector<int> marked;
    std::bernoulli_distribution pick(0.2);
    for (int t = 0; t < m.num_triangles(); ++t) {
      if (pick(rng)) marked.push_back(t);
    }
    m = bisect_refine(m, marked);
    expect_valid(m, 1.0);
    // newest-vertex bisection of right isosceles triangles produces only
    // two similarity classes
    EXPECT_LE(mesh_quality(m).sigma, sigma0 * (1.0 + 1e-12));
  }
}

TEST(Mesh, TriangleFilesRoundTrip) {
  const TriMesh m = bisect_refine(build_rectangle_mesh(kUnit, 2), std::vector<int>{0, 3});
  std::stringstream node, ele;
  write_node(node, m);
  write_ele(ele, m);
  const TriMesh r = read_triangle(node, ele);
  ASSERT_EQ(r.num_vertices(), m.num_vertices());
  ASSERT_EQ(r.num_triangles(), m.num_triangles());
  for (int v = 0; v < m.num_vertices(); ++v) EXPECT_LT((r.vertex(v) - m.vertex(v)).norm(), 1e-15);
  for (int t = 0; t < m.num_triangles(); ++t) EXPECT_EQ(r.triangle(t), m.triangle(t));
}
