#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hamdeck/graph.hpp"

namespace hamdeck {

using Cycle = std::vector<int>;

/// Rotates and reflects a cyclic sequence so that the smallest vertex comes
/// first and its smaller neighbour second.
inline Cycle canonical_cycle(std::span<const int> cycle) {
  const std::size_t k = cycle.size();
  if (k == 0) return {};
  const auto start = static_cast<std::size_t>(std::min_element(cycle.begin(), cycle.end()) - cycle.begin());
  const int next = cycle[(start + 1) % k];
  const int prev = cycle[(start + k - 1) % k];
  Cycle out;
  out.reserve(k);
  if (k < 3 || next <= prev) {
    for (std::size_t i = 0; i < k; ++i) out.push_back(cycle[(start + i) % k]);
  } else {
    for (std::size_t i = 0; i < k; ++i) out.push_back(cycle[(start + k - i) % k]);
  }
  return out;
}

/// Edge-disjoint Hamilton cycles, optionally with one perfect matching.
struct Decomposition {
  int n = 0;
  std::vector<Cycle> cycles;
  std::optional<EdgeList> matching;

  /// Canonical cycle form, cycles sorted, matching sorted.
  void canonicalize() {
    for (auto& c : cycles) c = canonical_cycle(c);
    std::sort(cycles.begin(), cycles.end());
    if (matching) normalize(*matching);
  }

  [[nodiscard]] std::size_t edge_count() const {
    std::size_t total = 0;
    for (const auto& c : cycles) total += c.size();
    if (matching) total += matching->size();
    return total;
  }

  friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

struct Verdict {
  bool ok = true;
  std::string violation;  // first violation found, empty when ok

  static Verdict failure(std::string why) { return {false, std::move(why)}; }
};

/// True iff the parts are Hamilton cycles (plus a perfect matching) of g that
/// partition its edge set exactly.
inline Verdict verify_decomposition(const Graph& g, const Decomposition& d) {
  const int n = g.order();
  if (d.n != n) {
    return Verdict::failure("decomposition is for " + std::to_string(d.n) + " vertices, graph has " + std::to_string(n));
  }
  std::vector<char> used_matrix(static_cast<std::size_t>(n) * n, 0);
  std::size_t covered = 0;
  auto take = [&](int a, int b, const std::string& where) -> std::optional<std::string> {
    if (a < 0 || b < 0 || a >= n || b >= n || a == b) {
      return where + ": invalid edge (" + std::to_string(a) + "," + std::to_string(b) + ")";
    }
    const Edge e(a, b);
    if (!g.has_edge(e)) return where + ": " + to_string(e) + " is not an edge of the graph";
    char& slot = used_matrix[static_cast<std::size_t>(e.u) * n + e.v];
    if (slot) return where + ": edge reuse " + to_string(e);
    slot = 1;
    ++covered;
    return std::nullopt;
  };

  for (std::size_t i = 0; i < d.cycles.size(); ++i) {
    const auto& cycle = d.cycles[i];
    const std::string where = "cycle " + std::to_string(i);
    if (static_cast<int>(cycle.size()) != n || n < 3) {
      return Verdict::failure(where + ": has " + std::to_string(cycle.size()) + " vertices, expected " +
                              std::to_string(n));
    }
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int v : cycle) {
      if (v < 0 || v >= n) return Verdict::failure(where + ": vertex " + std::to_string(v) + " out of range");
      if (seen[v]) return Verdict::failure(where + ": vertex " + std::to_string(v) + " repeated");
      seen[v] = 1;
    }
    for (std::size_t j = 0; j < cycle.size(); ++j) {
      if (auto bad = take(cycle[j], cycle[(j + 1) % cycle.size()], where)) return Verdict::failure(*bad);
    }
  }
  if (d.matching) {
    if (static_cast<int>(d.matching->size()) * 2 != n) {
      return Verdict::failure("matching: has " + std::to_string(d.matching->size()) + " edges, expected " +
                              std::to_string(n / 2));
    }
    std::vector<char> matched(static_cast<std::size_t>(n), 0);
    for (const Edge& e : *d.matching) {
      if (auto bad = take(e.u, e.v, "matching")) return Verdict::failure(*bad);
      if (matched[e.u] || matched[e.v]) return Verdict::failure("matching: vertex covered twice at " + to_string(e));
      matched[e.u] = matched[e.v] = 1;
    }
  }
  if (covered != g.size()) {
    return Verdict::failure(std::to_string(g.size() - covered) + " edges uncovered");
  }
  return {};
}

/// Walecki's decomposition of K_n, n odd: hub vertex n-1 joined to the ends
/// of the zig-zag path k, k+1, k-1, k+2, k-2, ... on the cycle Z_{n-1},
/// one rotation k = 0..(n-3)/2 per Hamilton cycle.
inline Decomposition walecki_decomposition(int n) {
  require(n >= 3 && n % 2 == 1, ErrorKind::kInvalidInput,
          "walecki_decomposition: n must be odd and at least 3, got " + std::to_string(n));
  const int ring = n - 1;
  const int hub = n - 1;
  const int m = ring / 2;
  Decomposition d;
  d.n = n;
  for (int k = 0; k < m; ++k) {
    Cycle cycle;
    cycle.reserve(static_cast<std::size_t>(n));
    cycle.push_back(hub);
    cycle.push_back(k);
    for (int i = 1; i < m; ++i) {
      cycle.push_back((k + i) % ring);
      cycle.push_back((k - i + ring) % ring);
    }
    cycle.push_back((k + m) % ring);
    d.cycles.push_back(std::move(cycle));
  }
  d.canonicalize();
  return d;
}

}  // namespace hamdeck
