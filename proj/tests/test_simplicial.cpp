#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "support.hpp"

namespace {

using namespace tentpole;

// Adjacency oracle: vertices of the subcomplex spanned by `edges`.
std::set<int> span(const std::vector<Edge>& edges) {
  std::set<int> out;
  for (const auto& [i, j] : edges) {
    out.insert(i);
    out.insert(j);
  }
  return out;
}

std::vector<Edge> parent_edges(const SubComplex& sub) {
  std::vector<Edge> out;
  for (const Edge& e : sub.complex.edges()) out.push_back(sub.parent_edge(e));
  return out;
}

TEST(Complex, TriangleBoundary) {
  const Complex1D c = validate(3, {{2, 3}, {1, 2}, {3, 1}});
  EXPECT_EQ(c.edge_count(), 3);
  EXPECT_EQ(c.isolated_count(), 0);
  EXPECT_EQ(c.edges(), (std::vector<Edge>{{1, 2}, {1, 3}, {2, 3}}));
}

TEST(Complex, TwoIsolatedPoints) {
  const Complex1D c = validate(2, {});
  EXPECT_EQ(c.edge_count(), 0);
  EXPECT_EQ(c.isolated(), (std::vector<int>{1, 2}));
}

TEST(Complex, RejectsMalformed) {
  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::numerical;
  };
  EXPECT_EQ(kind_of([] { validate(3, {{1, 2}, {2, 2}}); }), ErrorKind::malformed_complex);
  EXPECT_EQ(kind_of([] { validate(3, {{1, 2}, {2, 1}}); }), ErrorKind::malformed_complex);
  EXPECT_EQ(kind_of([] { validate(3, {{1, 4}}); }), ErrorKind::malformed_complex);
  EXPECT_EQ(kind_of([] { validate(3, {{0, 1}}); }), ErrorKind::malformed_complex);
}

TEST(Complex, Components) {
  EXPECT_EQ(components(validate(3, {{1, 2}, {2, 3}})).size(), 1u);

  const auto two = components(validate(4, {{1, 2}, {3, 4}}));
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0].to_parent, (std::vector<int>{1, 2}));
  EXPECT_EQ(two[1].to_parent, (std::vector<int>{3, 4}));

  const auto points = components(validate(2, {}));
  ASSERT_EQ(points.size(), 2u);
  EXPECT_EQ(points[0].complex.isolated_count(), 1);
  EXPECT_EQ(points[1].complex.isolated_count(), 1);
}

TEST(Complex, ComponentsPartitionEverything) {
  std::mt19937_64 rng(21);
  for (int it = 0; it < 100; ++it) {
    const int m = 1 + static_cast<int>(rng() % 9);
    std::vector<Edge> edges;
    for (int i = 1; i <= m; ++i) {
      for (int j = i + 1; j <= m; ++j) {
        if (rng() % 4 == 0) edges.emplace_back(i, j);
      }
    }
    const Complex1D c(m, edges);
    std::vector<Edge> seen_edges;
    std::vector<int> seen_vertices;
    int isolated = 0;
    for (const SubComplex& comp : components(c)) {
      EXPECT_TRUE(is_connected(comp.complex));
      for (const Edge& e : parent_edges(comp)) seen_edges.push_back(e);
      for (int v : comp.to_parent) seen_vertices.push_back(v);
      isolated += comp.complex.isolated_count();
    }
    std::sort(seen_edges.begin(), seen_edges.end());
    std::sort(seen_vertices.begin(), seen_vertices.end());
    EXPECT_EQ(seen_edges, c.edges());
    EXPECT_EQ(static_cast<int>(seen_vertices.size()), m);
    EXPECT_EQ(std::adjacent_find(seen_vertices.begin(), seen_vertices.end()),
              seen_vertices.end());
    EXPECT_EQ(isolated, c.isolated_count());
  }
}

TEST(Peel, Triangle) {
  const PeelResult p = peel(validate(3, {{1, 2}, {1, 3}, {2, 3}}));
  EXPECT_EQ(p.edge, (Edge{1, 2}));
  EXPECT_EQ(p.shared, SharedVertices::two_vertices);
  EXPECT_TRUE(p.left_shared);
  EXPECT_TRUE(p.right_shared);
  // Path 1-3-2.
  EXPECT_EQ(parent_edges(p.delta2), (std::vector<Edge>{{1, 3}, {2, 3}}));
  EXPECT_EQ(span(parent_edges(p.delta2)), (std::set<int>{1, 2, 3}));
}

TEST(Peel, Path) {
  const PeelResult p = peel(validate(3, {{1, 2}, {2, 3}}));
  EXPECT_EQ(p.shared, SharedVertices::one_vertex);
  EXPECT_FALSE(p.left_shared);
  EXPECT_TRUE(p.right_shared);
  EXPECT_EQ(parent_edges(p.delta2), (std::vector<Edge>{{2, 3}}));
}

TEST(Peel, Star) {
  const PeelResult p = peel(validate(4, {{1, 2}, {1, 3}, {1, 4}}));
  EXPECT_EQ(p.shared, SharedVertices::one_vertex);
  EXPECT_TRUE(p.left_shared);
  EXPECT_FALSE(p.right_shared);
  EXPECT_EQ(p.delta2.complex.isolated_count(), 0);
}

TEST(Peel, ReunionReproducesEdges) {
  std::mt19937_64 rng(4);
  for (int it = 0; it < 100; ++it) {
    const Complex1D c =
        testing_support::random_connected_complex(rng, 3 + static_cast<int>(rng() % 6), 9);
    const PeelResult p = peel(c);
    std::vector<Edge> all = parent_edges(p.delta2);
    all.push_back(p.edge);
    std::sort(all.begin(), all.end());
    EXPECT_EQ(all, c.edges());
    EXPECT_EQ(p.delta2.complex.isolated_count(), 0);
    // Oracle for the shared set: endpoints of the peeled edge that some other
    // edge touches.
    const std::set<int> rest = span(parent_edges(p.delta2));
    EXPECT_EQ(p.left_shared, rest.count(p.edge.first) == 1);
    EXPECT_EQ(p.right_shared, rest.count(p.edge.second) == 1);
  }
}

TEST(Peel, Preconditions) {
  EXPECT_THROW(peel(validate(2, {{1, 2}})), Error);
  EXPECT_THROW(peel(validate(4, {{1, 2}, {3, 4}})), Error);
}

}  // namespace
