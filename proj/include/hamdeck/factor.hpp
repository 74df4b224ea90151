#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hamdeck/graph.hpp"
#include "hamdeck/random.hpp"
#include "hamdeck/walecki.hpp"

namespace hamdeck {

enum class ComponentKind { kCycle, kIsolatedEdge, kPath };

/// A component of a spanning structure, as an explicit vertex sequence.
/// Cycles close back to their first vertex; isolated edges have exactly two
/// vertices; paths have at least one.
struct Component {
  ComponentKind kind = ComponentKind::kCycle;
  std::vector<int> vertices;

  [[nodiscard]] std::size_t edge_count() const {
    switch (kind) {
      case ComponentKind::kCycle: return vertices.size();
      case ComponentKind::kIsolatedEdge: return 1;
      case ComponentKind::kPath: return vertices.empty() ? 0 : vertices.size() - 1;
    }
    return 0;
  }

  [[nodiscard]] EdgeList edges() const {
    if (kind == ComponentKind::kCycle) return cycle_edges(vertices);
    return path_edges(vertices);
  }

  friend bool operator==(const Component&, const Component&) = default;
};

/// Spanning collection of vertex-disjoint cycles and isolated edges.
struct TwoFactor {
  int n = 0;
  std::vector<Component> components;
};

/// Spanning structure with exactly one path component; all others are
/// cycles or isolated edges.
struct PartialHC {
  int n = 0;
  std::vector<int> path;
  std::vector<Component> others;
};

inline EdgeList edges_of(const TwoFactor& f) {
  EdgeList out;
  for (const auto& c : f.components) {
    const auto e = c.edges();
    out.insert(out.end(), e.begin(), e.end());
  }
  normalize(out);
  return out;
}

inline EdgeList edges_of(const PartialHC& h) {
  EdgeList out = path_edges(h.path);
  for (const auto& c : h.others) {
    const auto e = c.edges();
    out.insert(out.end(), e.begin(), e.end());
  }
  normalize(out);
  return out;
}

inline std::size_t component_count(const TwoFactor& f) { return f.components.size(); }
inline std::size_t component_count(const PartialHC& h) { return h.others.size() + 1; }

inline std::size_t edge_count(const TwoFactor& f) {
  std::size_t total = 0;
  for (const auto& c : f.components) total += c.edge_count();
  return total;
}

inline std::size_t edge_count(const PartialHC& h) {
  std::size_t total = h.path.empty() ? 0 : h.path.size() - 1;
  for (const auto& c : h.others) total += c.edge_count();
  return total;
}

struct ComponentProfile {
  int components = 0;
  int cycles = 0;
  int isolated_edges = 0;
  friend bool operator==(const ComponentProfile&, const ComponentProfile&) = default;
};

inline ComponentProfile component_profile(const TwoFactor& f) {
  ComponentProfile p;
  p.components = static_cast<int>(f.components.size());
  for (const auto& c : f.components) {
    if (c.kind == ComponentKind::kCycle) ++p.cycles;
    if (c.kind == ComponentKind::kIsolatedEdge) ++p.isolated_edges;
  }
  return p;
}

/// s* = ceil(sqrt(n ln n)).
inline int component_threshold(int n) {
  if (n < 2) return 1;
  return ceil_count(std::sqrt(n * std::log(static_cast<double>(n))));
}

namespace detail {

inline Verdict check_components(int n, const std::vector<const Component*>& parts,
                                const std::function<bool(const Edge&)>& allowed) {
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::size_t covered = 0;
  for (const Component* c : parts) {
    const std::size_t k = c->vertices.size();
    if (c->kind == ComponentKind::kCycle && k < 3) return Verdict::failure("cycle with fewer than 3 vertices");
    if (c->kind == ComponentKind::kIsolatedEdge && k != 2) return Verdict::failure("isolated edge without 2 vertices");
    if (c->kind == ComponentKind::kPath && k < 1) return Verdict::failure("empty path");
    for (int v : c->vertices) {
      if (v < 0 || v >= n) return Verdict::failure("vertex " + std::to_string(v) + " out of range");
      if (seen[v]) return Verdict::failure("vertex " + std::to_string(v) + " appears twice");
      seen[v] = 1;
      ++covered;
    }
    for (const Edge& e : c->edges()) {
      if (!allowed(e)) return Verdict::failure("adjacency " + to_string(e) + " is not a host edge");
    }
  }
  if (static_cast<int>(covered) != n) return Verdict::failure(std::to_string(n - static_cast<int>(covered)) +
                                                              " vertices uncovered");
  return {};
}

}  // namespace detail

/// Spanning, vertex-disjoint, cycles/isolated edges only, edges in `host`.
inline Verdict validate(const TwoFactor& f, const std::function<bool(const Edge&)>& allowed) {
  std::vector<const Component*> parts;
  for (const auto& c : f.components) {
    if (c.kind == ComponentKind::kPath) return Verdict::failure("(<=2)-factor contains a path");
    parts.push_back(&c);
  }
  return detail::check_components(f.n, parts, allowed);
}

inline Verdict validate(const TwoFactor& f, const Graph& host) {
  return validate(f, [&](const Edge& e) { return host.has_edge(e); });
}

inline Verdict validate(const PartialHC& h, const std::function<bool(const Edge&)>& allowed) {
  Component path{ComponentKind::kPath, h.path};
  std::vector<const Component*> parts{&path};
  for (const auto& c : h.others) {
    if (c.kind == ComponentKind::kPath) return Verdict::failure("partial HC has a second path");
    parts.push_back(&c);
  }
  return detail::check_components(h.n, parts, allowed);
}

/// Orientation- and order-free key: canonical cycles and sorted edges.
inline std::vector<std::vector<int>> canonical_key(const TwoFactor& f) {
  std::vector<std::vector<int>> key;
  for (const auto& c : f.components) {
    if (c.kind == ComponentKind::kCycle) {
      key.push_back(canonical_cycle(c.vertices));
    } else {
      key.push_back({std::min(c.vertices[0], c.vertices[1]), std::max(c.vertices[0], c.vertices[1])});
    }
  }
  std::sort(key.begin(), key.end());
  return key;
}

/// Projects a permutation with no fixed points onto its (<=2)-factor:
/// 2-cycles become isolated edges, longer cycles become cycles.
inline TwoFactor factor_from_permutation(const std::vector<int>& sigma) {
  const int n = static_cast<int>(sigma.size());
  TwoFactor f;
  f.n = n;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int start = 0; start < n; ++start) {
    if (seen[start]) continue;
    Component c;
    for (int v = start; !seen[v]; v = sigma[v]) {
      seen[v] = 1;
      c.vertices.push_back(v);
    }
    require(c.vertices.size() >= 2, ErrorKind::kInvalidInput, "permutation has a fixed point");
    c.kind = c.vertices.size() == 2 ? ComponentKind::kIsolatedEdge : ComponentKind::kCycle;
    f.components.push_back(std::move(c));
  }
  return f;
}

/// Random perfect matching of the bipartite double cover of g (left copy i
/// adjacent to right copy j iff ij is an edge), found by augmenting paths
/// over a random vertex order with shuffled adjacency. Returns the matching
/// as a permutation, or nullopt if none exists.
inline std::optional<std::vector<int>> random_cover_matching(const Graph& g, Rng& rng) {
  const int n = g.order();
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    adj[v].assign(g.neighbors(v).begin(), g.neighbors(v).end());
    shuffle(adj[v], rng);
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) order[v] = v;
  shuffle(order, rng);

  std::vector<int> left_of(static_cast<std::size_t>(n), -1);  // right vertex -> left partner
  std::vector<int> right_of(static_cast<std::size_t>(n), -1);
  std::vector<int> visited(static_cast<std::size_t>(n), -1);
  for (int root : order) {
    // Iterative DFS for an augmenting path from `root`.
    std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
    std::vector<int> via;  // right vertices along the current path
    bool found = false;
    while (!stack.empty() && !found) {
      auto& [u, i] = stack.back();
      if (i >= adj[u].size()) {
        stack.pop_back();
        if (!via.empty()) via.pop_back();
        continue;
      }
      const int w = adj[u][i++];
      if (visited[w] == root) continue;
      visited[w] = root;
      via.push_back(w);
      if (left_of[w] < 0) {
        found = true;
        break;
      }
      stack.emplace_back(left_of[w], 0);
    }
    if (!found) return std::nullopt;
    // stack[k].first is matched to via[k] after augmentation.
    for (std::size_t k = 0; k < via.size(); ++k) {
      const int u = stack[k].first;
      const int w = via[k];
      left_of[w] = u;
      right_of[u] = w;
    }
  }
  return right_of;
}

/// One random (<=2)-factor of g. Uniformity is not guaranteed.
inline TwoFactor sample_le2_factor(const Graph& g, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0xf2);
  const auto sigma = random_cover_matching(g, rng);
  if (!sigma) fail(ErrorKind::kInfeasible, "sample_le2_factor: no (<=2)-factor exists (no perfect matching in the double cover)");
  return factor_from_permutation(*sigma);
}

struct SampledFactor {
  TwoFactor factor;
  int draws = 0;
  bool within_threshold = true;  // at most s* components
};

/// Resamples until the factor has at most `max_components` components, up to
/// `attempts` draws; the last draw is returned regardless.
inline SampledFactor sample_le2_factor_capped(const Graph& g, std::uint64_t seed, int max_components, int attempts) {
  SampledFactor out;
  for (int draw = 0; draw < std::max(1, attempts); ++draw) {
    out.factor = sample_le2_factor(g, derive_seed(seed, static_cast<std::uint64_t>(draw)));
    out.draws = draw + 1;
    out.within_threshold = static_cast<int>(out.factor.components.size()) <= max_components;
    if (out.within_threshold) break;
  }
  return out;
}

inline constexpr int kEnumerationCap = 14;

/// Every (<=2)-factor of g as a subgraph, each exactly once. Components are
/// built around the smallest uncovered vertex; cycles are listed from that
/// vertex with second vertex smaller than the last.
inline std::vector<TwoFactor> enumerate_le2_factors(const Graph& g, std::optional<int> max_components = std::nullopt,
                                                    std::size_t limit = 50'000'000) {
  const int n = g.order();
  require(n <= kEnumerationCap, ErrorKind::kCapExceeded,
          "enumerate_le2_factors: limited to n <= " + std::to_string(kEnumerationCap));
  std::vector<TwoFactor> out;
  std::vector<char> covered(static_cast<std::size_t>(n), 0);
  std::vector<Component> current;
  const int cap = max_components.value_or(n);

  std::function<void(int)> place;
  std::function<void(std::vector<int>&)> grow;

  place = [&](int placed) {
    if (out.size() >= limit) fail(ErrorKind::kBudgetExhausted, "enumerate_le2_factors: result limit reached");
    if (placed == n) {
      out.push_back(TwoFactor{n, current});
      return;
    }
    if (static_cast<int>(current.size()) >= cap) return;
    int v = 0;
    while (covered[v]) ++v;
    covered[v] = 1;
    for (int w : g.neighbors(v)) {
      if (covered[w]) continue;
      covered[w] = 1;
      current.push_back({ComponentKind::kIsolatedEdge, {v, w}});
      place(placed + 2);
      current.pop_back();
      covered[w] = 0;
    }
    std::vector<int> path{v};
    grow(path);
    covered[v] = 0;
  };

  grow = [&](std::vector<int>& path) {
    const int start = path.front();
    const int tail = path.back();
    for (int w : g.neighbors(tail)) {
      if (covered[w]) continue;
      covered[w] = 1;
      path.push_back(w);
      if (path.size() >= 3 && path[1] < w && g.has_edge(w, start)) {
        current.push_back({ComponentKind::kCycle, path});
        int placed = 0;
        for (char c : covered) placed += c;
        place(placed);
        current.pop_back();
      }
      grow(path);
      path.pop_back();
      covered[w] = 0;
    }
  };

  place(0);
  return out;
}

}  // namespace hamdeck
