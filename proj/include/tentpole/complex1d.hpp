#pragma once

// One-dimensional simplicial complexes: vertices 1..m and straight edges
// (i, j) with i < j. Vertex indices are 1-based throughout the public API.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tentpole/config.hpp"

namespace tentpole {

using Edge = std::pair<int, int>;

inline std::string edge_key(const Edge& e) {
  return std::to_string(e.first) + "-" + std::to_string(e.second);
}

class Complex1D {
 public:
  Complex1D() = default;

  // Validates and canonicalizes; edges may be given in either orientation.
  Complex1D(int m, std::vector<Edge> edges) : m_(m) {
    if (m < 0) throw Error(ErrorKind::malformed_complex, "negative vertex count");
    for (Edge& e : edges) {
      if (e.first == e.second) {
        throw Error(ErrorKind::malformed_complex,
                    "self-loop at vertex " + std::to_string(e.first));
      }
      if (e.first > e.second) std::swap(e.first, e.second);
      if (e.first < 1 || e.second > m) {
        throw Error(ErrorKind::malformed_complex,
                    "edge " + edge_key(e) + " out of range 1.." + std::to_string(m));
      }
    }
    std::sort(edges.begin(), edges.end());
    if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end()) {
      throw Error(ErrorKind::malformed_complex, "duplicate edge " + edge_key(*dup));
    }
    edges_ = std::move(edges);
    std::vector<bool> touched(static_cast<std::size_t>(m_) + 1, false);
    for (const Edge& e : edges_) {
      touched[static_cast<std::size_t>(e.first)] = true;
      touched[static_cast<std::size_t>(e.second)] = true;
    }
    for (int v = 1; v <= m_; ++v) {
      if (!touched[static_cast<std::size_t>(v)]) isolated_.push_back(v);
    }
  }

  int vertex_count() const { return m_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int isolated_count() const { return static_cast<int>(isolated_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& isolated() const { return isolated_; }

  // Position of an edge in edges(), if present.
  std::optional<std::size_t> edge_index(Edge e) const {
    if (e.first > e.second) std::swap(e.first, e.second);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e) return std::nullopt;
    return static_cast<std::size_t>(it - edges_.begin());
  }

  std::optional<std::size_t> isolated_index(int v) const {
    auto it = std::lower_bound(isolated_.begin(), isolated_.end(), v);
    if (it == isolated_.end() || *it != v) return std::nullopt;
    return static_cast<std::size_t>(it - isolated_.begin());
  }

  bool is_isolated(int v) const { return isolated_index(v).has_value(); }

  // Indices into edges() of every edge touching v.
  std::vector<std::size_t> incident_edges(int v) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      if (edges_[i].first == v || edges_[i].second == v) out.push_back(i);
    }
    return out;
  }

  friend bool operator==(const Complex1D& a, const Complex1D& b) {
    return a.m_ == b.m_ && a.edges_ == b.edges_;
  }

 private:
  int m_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> isolated_;
};

inline Complex1D validate(int m, std::vector<Edge> edges) {
  return Complex1D(m, std::move(edges));
}

// A complex together with a strictly increasing map of its vertices into a
// larger complex. to_parent[v - 1] is the parent index of local vertex v.
// Monotone relabeling keeps every edge orientation i < j intact.
struct SubComplex {
  Complex1D complex;
  std::vector<int> to_parent;

  int parent_vertex(int v) const { return to_parent[static_cast<std::size_t>(v - 1)]; }
  Edge parent_edge(const Edge& e) const {
    return {parent_vertex(e.first), parent_vertex(e.second)};
  }
  std::optional<int> local_vertex(int parent) const {
    auto it = std::lower_bound(to_parent.begin(), to_parent.end(), parent);
    if (it == to_parent.end() || *it != parent) return std::nullopt;
    return static_cast<int>(it - to_parent.begin()) + 1;
  }
};

// The subcomplex on the given parent vertices spanned by the given parent edges.
inline SubComplex make_subcomplex(std::vector<int> vertices,
                                  const std::vector<Edge>& parent_edges) {
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  auto local = [&](int v) {
    return static_cast<int>(std::lower_bound(vertices.begin(), vertices.end(), v) -
                            vertices.begin()) + 1;
  };
  std::vector<Edge> edges;
  edges.reserve(parent_edges.size());
  for (const Edge& e : parent_edges) edges.emplace_back(local(e.first), local(e.second));
  return {Complex1D(static_cast<int>(vertices.size()), std::move(edges)),
          std::move(vertices)};
}

// Connected components, ordered by their smallest vertex.
inline std::vector<SubComplex> components(const Complex1D& c) {
  const int m = c.vertex_count();
  std::vector<int> parent(static_cast<std::size_t>(m) + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  };
  for (const Edge& e : c.edges()) {
    const int a = find(e.first);
    const int b = find(e.second);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
  std::vector<SubComplex> out;
  std::vector<int> slot(static_cast<std::size_t>(m) + 1, -1);
  std::vector<std::vector<int>> verts;
  std::vector<std::vector<Edge>> edges;
  for (int v = 1; v <= m; ++v) {
    const int r = find(v);
    if (slot[static_cast<std::size_t>(r)] < 0) {
      slot[static_cast<std::size_t>(r)] = static_cast<int>(verts.size());
      verts.emplace_back();
      edges.emplace_back();
    }
    verts[static_cast<std::size_t>(slot[static_cast<std::size_t>(r)])].push_back(v);
  }
  for (const Edge& e : c.edges()) {
    edges[static_cast<std::size_t>(slot[static_cast<std::size_t>(find(e.first))])].push_back(e);
  }
  for (std::size_t i = 0; i < verts.size(); ++i) {
    out.push_back(make_subcomplex(std::move(verts[i]), edges[i]));
  }
  return out;
}

inline bool is_connected(const Complex1D& c) { return components(c).size() <= 1; }

enum class SharedVertices { one_vertex, two_vertices };

struct PeelResult {
  Edge edge;           // the removed edge, in the parent's labels
  SubComplex delta1;   // that edge alone
  SubComplex delta2;   // closure of everything else
  SharedVertices shared;
  bool left_shared;    // edge.first lies in delta2
  bool right_shared;   // edge.second lies in delta2
};

// Splits off the lexicographically smallest edge of a connected complex with
// at least two edges.
inline PeelResult peel(const Complex1D& c) {
  if (c.edge_count() < 2 || !is_connected(c)) {
    throw Error(ErrorKind::precondition, "peel: complex must be connected with e >= 2");
  }
  PeelResult out;
  out.edge = c.edges().front();
  out.delta1 = make_subcomplex({out.edge.first, out.edge.second}, {out.edge});
  std::vector<Edge> rest(c.edges().begin() + 1, c.edges().end());
  std::vector<int> verts;
  for (const Edge& e : rest) {
    verts.push_back(e.first);
    verts.push_back(e.second);
  }
  out.delta2 = make_subcomplex(verts, rest);
  out.left_shared = out.delta2.local_vertex(out.edge.first).has_value();
  out.right_shared = out.delta2.local_vertex(out.edge.second).has_value();
  out.shared = out.left_shared && out.right_shared ? SharedVertices::two_vertices
                                                   : SharedVertices::one_vertex;
  return out;
}

}  // namespace tentpole
