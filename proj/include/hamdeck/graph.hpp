#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hamdeck/error.hpp"

namespace hamdeck {

/// Undirected edge, always stored with u < v.
struct Edge {
  int u = 0;
  int v = 0;

  Edge() = default;
  Edge(int a, int b) : u(std::min(a, b)), v(std::max(a, b)) {}

  [[nodiscard]] bool touches(int w) const { return u == w || v == w; }
  [[nodiscard]] int other(int w) const { return w == u ? v : u; }

  auto operator<=>(const Edge&) const = default;
};

using EdgeList = std::vector<Edge>;

inline std::string to_string(const Edge& e) {
  return "{" + std::to_string(e.u) + "," + std::to_string(e.v) + "}";
}

/// Sorts and removes duplicates in place.
inline void normalize(EdgeList& edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

/// Threshold count for a fractional quantity such as nu*n. The product is
/// rounded up; the small tolerance keeps 0.3*10 from becoming 4.
inline int ceil_count(double x) {
  return static_cast<int>(std::ceil(x - 1e-9));
}

/// Immutable simple undirected graph on vertices 0..n-1.
///
/// Holds the canonical sorted edge list, sorted adjacency lists and a bit
/// matrix for O(1) adjacency queries.
class Graph {
 public:
  Graph() = default;

  /// Empty graph on n vertices.
  explicit Graph(int n) : n_(n), adjacency_(static_cast<std::size_t>(n)), words_((n + 63) / 64) {
    require(n >= 0, ErrorKind::kInvalidInput, "vertex count must be non-negative");
    matrix_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(words_), 0);
  }

  /// Builds from edges that are already validated (in range, loop-free).
  /// Duplicates are removed.
  Graph(int n, EdgeList edges) : Graph(n) {
    normalize(edges);
    edges_ = std::move(edges);
    for (const Edge& e : edges_) {
      adjacency_[e.u].push_back(e.v);
      adjacency_[e.v].push_back(e.u);
      set_bit(e.u, e.v);
      set_bit(e.v, e.u);
    }
    for (auto& list : adjacency_) std::sort(list.begin(), list.end());
  }

  [[nodiscard]] int order() const { return n_; }
  [[nodiscard]] std::size_t size() const { return edges_.size(); }
  [[nodiscard]] const EdgeList& edges() const { return edges_; }

  [[nodiscard]] std::span<const int> neighbors(int v) const { return adjacency_[v]; }
  [[nodiscard]] int degree(int v) const { return static_cast<int>(adjacency_[v].size()); }

  [[nodiscard]] bool has_edge(int a, int b) const {
    if (a < 0 || b < 0 || a >= n_ || b >= n_) return false;
    return (matrix_[static_cast<std::size_t>(a) * words_ + (b >> 6)] >> (b & 63)) & 1U;
  }
  [[nodiscard]] bool has_edge(const Edge& e) const { return has_edge(e.u, e.v); }

  [[nodiscard]] int min_degree() const {
    int best = n_ == 0 ? 0 : degree(0);
    for (int v = 1; v < n_; ++v) best = std::min(best, degree(v));
    return best;
  }

  [[nodiscard]] int max_degree() const {
    int best = 0;
    for (int v = 0; v < n_; ++v) best = std::max(best, degree(v));
    return best;
  }

  /// The common degree if the graph is regular.
  [[nodiscard]] std::optional<int> regular_degree() const {
    if (n_ == 0) return 0;
    const int d = degree(0);
    for (int v = 1; v < n_; ++v) {
      if (degree(v) != d) return std::nullopt;
    }
    return d;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  void set_bit(int a, int b) {
    matrix_[static_cast<std::size_t>(a) * words_ + (b >> 6)] |= std::uint64_t{1} << (b & 63);
  }

  int n_ = 0;
  EdgeList edges_;
  std::vector<std::vector<int>> adjacency_;
  int words_ = 0;
  std::vector<std::uint64_t> matrix_;
};

/// Validated construction from raw pairs. Rejects loops and out-of-range
/// endpoints; duplicate pairs collapse to one edge.
inline Graph build_graph(int n, std::span<const std::pair<int, int>> pairs) {
  require(n >= 0, ErrorKind::kInvalidInput, "vertex count must be non-negative");
  EdgeList edges;
  edges.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    require(a >= 0 && a < n && b >= 0 && b < n, ErrorKind::kInvalidInput,
            "edge (" + std::to_string(a) + "," + std::to_string(b) + ") has an endpoint outside 0.." +
                std::to_string(n - 1));
    require(a != b, ErrorKind::kInvalidInput, "loop at vertex " + std::to_string(a));
    edges.emplace_back(a, b);
  }
  return Graph(n, std::move(edges));
}

inline Graph build_graph(int n, std::initializer_list<std::pair<int, int>> pairs) {
  return build_graph(n, std::span<const std::pair<int, int>>(pairs.begin(), pairs.size()));
}

/// Set of vertices of a graph on `universe` vertices, kept sorted.
class VertexSet {
 public:
  VertexSet() = default;

  VertexSet(int universe, std::vector<int> members) : universe_(universe), members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    require(std::adjacent_find(members_.begin(), members_.end()) == members_.end(),
            ErrorKind::kInvalidInput, "vertex set has repeated members");
    require(members_.empty() || (members_.front() >= 0 && members_.back() < universe_),
            ErrorKind::kInvalidInput, "vertex set member out of range");
  }

  VertexSet(int universe, std::initializer_list<int> members)
      : VertexSet(universe, std::vector<int>(members)) {}

  /// Members are the set bits of `mask` (universe <= 64).
  static VertexSet from_mask(int universe, std::uint64_t mask) {
    std::vector<int> members;
    for (int v = 0; v < universe; ++v) {
      if ((mask >> v) & 1U) members.push_back(v);
    }
    return VertexSet(universe, std::move(members));
  }

  [[nodiscard]] int universe() const { return universe_; }
  [[nodiscard]] std::size_t size() const { return members_.size(); }
  [[nodiscard]] bool empty() const { return members_.empty(); }
  [[nodiscard]] const std::vector<int>& members() const { return members_; }
  [[nodiscard]] bool contains(int v) const { return std::binary_search(members_.begin(), members_.end(), v); }

  [[nodiscard]] std::vector<bool> indicator() const {
    std::vector<bool> in(static_cast<std::size_t>(universe_), false);
    for (int v : members_) in[v] = true;
    return in;
  }

  [[nodiscard]] bool is_subset_of(const VertexSet& other) const {
    return std::includes(other.members_.begin(), other.members_.end(), members_.begin(), members_.end());
  }

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  int universe_ = 0;
  std::vector<int> members_;
};

// ---------------------------------------------------------------------------
// Edge-set algebra

/// g minus h. Every edge of h must be an edge of g.
inline Graph subtract(const Graph& g, std::span<const Edge> h) {
  EdgeList removed(h.begin(), h.end());
  normalize(removed);
  for (const Edge& e : removed) {
    require(g.has_edge(e), ErrorKind::kPrecondition, "subtract: edge " + to_string(e) + " is not in the graph");
  }
  EdgeList kept;
  kept.reserve(g.size() - removed.size());
  std::set_difference(g.edges().begin(), g.edges().end(), removed.begin(), removed.end(),
                      std::back_inserter(kept));
  return Graph(g.order(), std::move(kept));
}

inline Graph subtract(const Graph& g, const Graph& h) { return subtract(g, h.edges()); }

/// g plus h. h must be edge-disjoint from g and within range.
inline Graph unite(const Graph& g, std::span<const Edge> h) {
  EdgeList all = g.edges();
  for (const Edge& e : h) {
    require(e.u >= 0 && e.v < g.order() && e.u != e.v, ErrorKind::kInvalidInput,
            "unite: edge " + to_string(e) + " is not a valid edge");
    require(!g.has_edge(e), ErrorKind::kPrecondition, "unite: duplicate edge " + to_string(e));
    all.push_back(e);
  }
  const std::size_t expected = all.size();
  normalize(all);
  require(all.size() == expected, ErrorKind::kPrecondition, "unite: the added edge set repeats an edge");
  return Graph(g.order(), std::move(all));
}

inline Graph unite(const Graph& g, const Graph& h) { return unite(g, h.edges()); }

/// Edges present in both graphs.
inline EdgeList common_edges(const Graph& a, const Graph& b) {
  EdgeList out;
  std::set_intersection(a.edges().begin(), a.edges().end(), b.edges().begin(), b.edges().end(),
                        std::back_inserter(out));
  return out;
}

// ---------------------------------------------------------------------------
// Generators

inline Graph complete_graph(int n) {
  EdgeList edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  }
  return Graph(n, std::move(edges));
}

inline Graph cycle_graph(int n) {
  require(n >= 3, ErrorKind::kInvalidInput, "cycle needs at least 3 vertices");
  EdgeList edges;
  for (int v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
  return Graph(n, std::move(edges));
}

inline Graph path_graph(int n) {
  EdgeList edges;
  for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return Graph(n, std::move(edges));
}

/// Vertex-disjoint union; the second graph's vertices are shifted by a.order().
inline Graph disjoint_union(const Graph& a, const Graph& b) {
  EdgeList edges = a.edges();
  for (const Edge& e : b.edges()) edges.emplace_back(e.u + a.order(), e.v + a.order());
  return Graph(a.order() + b.order(), std::move(edges));
}

/// Graph on the vertices of g with the given cyclic vertex sequence as edges.
inline EdgeList cycle_edges(std::span<const int> cycle) {
  EdgeList edges;
  const std::size_t k = cycle.size();
  if (k < 2) return edges;
  for (std::size_t i = 0; i + 1 < k; ++i) edges.emplace_back(cycle[i], cycle[i + 1]);
  if (k >= 3) edges.emplace_back(cycle[k - 1], cycle[0]);
  return edges;
}

inline EdgeList path_edges(std::span<const int> path) {
  EdgeList edges;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) edges.emplace_back(path[i], path[i + 1]);
  return edges;
}

/// True iff every vertex can reach every other.
inline bool is_connected(const Graph& g) {
  const int n = g.order();
  if (n <= 1) return true;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : g.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n;
}

}  // namespace hamdeck
