#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hamdeck/graph.hpp"
#include "hamdeck/random.hpp"

namespace hamdeck {

/// Largest n for which exhaustive subset enumeration is offered.
inline constexpr int kExactSubsetCap = 24;

struct ExactMode {
  friend bool operator==(const ExactMode&, const ExactMode&) = default;
};

struct SampledMode {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  friend bool operator==(const SampledMode&, const SampledMode&) = default;
};

using CheckMode = std::variant<ExactMode, SampledMode>;

inline std::string describe(const CheckMode& mode) {
  if (std::holds_alternative<ExactMode>(mode)) return "exact";
  return "sampled(" + std::to_string(std::get<SampledMode>(mode).trials) + ")";
}

/// Edges with one endpoint in A and the other in B. An edge with both
/// endpoints in A and B is counted once.
inline long long edges_between(const Graph& g, const VertexSet& a, const VertexSet& b) {
  require(a.universe() <= g.order() && b.universe() <= g.order(), ErrorKind::kInvalidInput,
          "edges_between: vertex set exceeds graph order");
  const auto in_a = VertexSet(g.order(), a.members()).indicator();
  const auto in_b = VertexSet(g.order(), b.members()).indicator();
  long long count = 0;
  for (const Edge& e : g.edges()) {
    if ((in_a[e.u] && in_b[e.v]) || (in_b[e.u] && in_a[e.v])) ++count;
  }
  return count;
}

/// Vertices with at least ceil(nu * n) neighbours in S.
inline VertexSet robust_neighborhood(const Graph& g, const VertexSet& s, double nu) {
  require(nu > 0.0 && nu <= 1.0, ErrorKind::kInvalidInput, "robust_neighborhood: nu must lie in (0, 1]");
  const int n = g.order();
  const int threshold = ceil_count(nu * n);
  const auto in_s = VertexSet(n, s.members()).indicator();
  std::vector<int> members;
  for (int v = 0; v < n; ++v) {
    int hits = 0;
    for (int w : g.neighbors(v)) hits += in_s[w] ? 1 : 0;
    if (hits >= threshold) members.push_back(v);
  }
  return VertexSet(n, std::move(members));
}

struct ExpanderVerdict {
  bool holds = true;
  std::optional<VertexSet> witness;  // violating S when holds == false
  CheckMode mode = ExactMode{};
  std::uint64_t sets_checked = 0;
};

namespace detail {

inline std::vector<std::uint32_t> adjacency_masks(const Graph& g) {
  std::vector<std::uint32_t> masks(static_cast<std::size_t>(g.order()), 0);
  for (const Edge& e : g.edges()) {
    masks[e.u] |= std::uint32_t{1} << e.v;
    masks[e.v] |= std::uint32_t{1} << e.u;
  }
  return masks;
}

/// Uniformly random subset of exactly k of n vertices.
inline std::vector<int> random_subset(int n, int k, Rng& rng) {
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) all[v] = v;
  for (int i = 0; i < k; ++i) std::swap(all[i], all[i + static_cast<int>(uniform_below(rng, n - i))]);
  all.resize(static_cast<std::size_t>(k));
  return all;
}

}  // namespace detail

/// Checks |RN_nu(S)| >= |S| + nu*n for every S with tau*n <= |S| <= (1-tau)*n.
///
/// Exact mode enumerates every such S (n <= 24). Sampled mode draws a size
/// uniformly from the admissible range and then a uniform subset of that
/// size; it can only certify or refute with a concrete witness.
inline ExpanderVerdict is_robust_expander(const Graph& g, double nu, double tau, const CheckMode& mode) {
  require(nu > 0.0 && nu <= tau && tau < 1.0, ErrorKind::kInvalidInput,
          "is_robust_expander: need 0 < nu <= tau < 1");
  const int n = g.order();
  const int threshold = ceil_count(nu * n);
  const int lo = ceil_count(tau * n);
  const int hi = static_cast<int>(std::floor((1.0 - tau) * n + 1e-9));

  ExpanderVerdict verdict;
  verdict.mode = mode;
  if (lo > hi) return verdict;

  if (std::holds_alternative<ExactMode>(mode)) {
    require(n <= kExactSubsetCap, ErrorKind::kCapExceeded,
            "is_robust_expander: exact mode is limited to n <= " + std::to_string(kExactSubsetCap));
    const auto adj = detail::adjacency_masks(g);
    const std::uint32_t end = std::uint32_t{1} << n;
    for (std::uint32_t mask = 1; mask < end; ++mask) {
      const int size = std::popcount(mask);
      if (size < lo || size > hi) continue;
      ++verdict.sets_checked;
      int robust = 0;
      for (int v = 0; v < n; ++v) robust += std::popcount(adj[v] & mask) >= threshold ? 1 : 0;
      if (robust < size + threshold) {
        verdict.holds = false;
        verdict.witness = VertexSet::from_mask(n, mask);
        return verdict;
      }
    }
    return verdict;
  }

  const auto& sampled = std::get<SampledMode>(mode);
  Rng rng = make_rng(sampled.seed, 0xe8);
  for (std::uint64_t trial = 0; trial < sampled.trials; ++trial) {
    const int size = uniform_int(rng, lo, hi);
    VertexSet s(n, detail::random_subset(n, size, rng));
    ++verdict.sets_checked;
    const auto rn = robust_neighborhood(g, s, nu);
    if (static_cast<int>(rn.size()) < size + threshold) {
      verdict.holds = false;
      verdict.witness = std::move(s);
      return verdict;
    }
  }
  return verdict;
}

struct RegularityVerdict {
  bool holds = true;
  std::string reason;  // empty when holds
  std::optional<VertexSet> s;
  std::optional<VertexSet> t;
  double density = 0.0;  // e(S,T)/(|S||T|) of the witness pair
  CheckMode mode = ExactMode{};
};

/// (alpha, beta)-regularity: min degree >= alpha*n - 1 and every pair of
/// disjoint S, T of size >= beta*n has density within beta of alpha.
///
/// Exact mode enumerates S and, for each size of T, only the two extreme T
/// (the vertices outside S with the most and the fewest neighbours in S),
/// which is enough to bound the density over all T of that size.
inline RegularityVerdict check_alpha_beta_regular(const Graph& g, double alpha, double beta,
                                                  const CheckMode& mode) {
  require(beta > 0.0 && beta < 0.5, ErrorKind::kInvalidInput, "check_alpha_beta_regular: need 0 < beta < 1/2");
  require(alpha > 0.0 && alpha <= 1.0, ErrorKind::kInvalidInput, "check_alpha_beta_regular: need 0 < alpha <= 1");
  const int n = g.order();
  RegularityVerdict verdict;
  verdict.mode = mode;

  if (n > 0 && g.min_degree() < alpha * n - 1.0 - 1e-9) {
    verdict.holds = false;
    verdict.reason = "minimum degree " + std::to_string(g.min_degree()) + " below alpha*n - 1";
    return verdict;
  }
  const int min_size = std::max(1, ceil_count(beta * n));
  if (2 * min_size > n) return verdict;

  auto within = [&](long long edges, int s_size, int t_size) {
    const double density = static_cast<double>(edges) / (static_cast<double>(s_size) * t_size);
    return std::abs(density - alpha) <= beta + 1e-12;
  };

  if (std::holds_alternative<ExactMode>(mode)) {
    require(n <= kExactSubsetCap, ErrorKind::kCapExceeded,
            "check_alpha_beta_regular: exact mode is limited to n <= " + std::to_string(kExactSubsetCap));
    const auto adj = detail::adjacency_masks(g);
    const std::uint32_t full = (n == 32) ? ~std::uint32_t{0} : ((std::uint32_t{1} << n) - 1);
    std::vector<std::pair<int, int>> hits;  // (neighbours in S, vertex)
    for (std::uint32_t mask = 1; mask <= full && mask != 0; ++mask) {
      const int s_size = std::popcount(mask);
      if (s_size < min_size || n - s_size < min_size) continue;
      hits.clear();
      for (int v = 0; v < n; ++v) {
        if (!((mask >> v) & 1U)) hits.emplace_back(std::popcount(adj[v] & mask), v);
      }
      std::sort(hits.begin(), hits.end());
      long long low = 0;
      long long high = 0;
      const int outside = static_cast<int>(hits.size());
      for (int t = 1; t <= outside; ++t) {
        low += hits[t - 1].first;
        high += hits[outside - t].first;
        if (t < min_size) continue;
        for (int pick = 0; pick < 2; ++pick) {
          const long long edges = pick == 0 ? low : high;
          if (!within(edges, s_size, t)) {
            std::vector<int> members;
            for (int i = 0; i < t; ++i) members.push_back(hits[pick == 0 ? i : outside - 1 - i].second);
            verdict.holds = false;
            verdict.reason = "density of a large disjoint pair deviates from alpha by more than beta";
            verdict.s = VertexSet::from_mask(n, mask);
            verdict.t = VertexSet(n, std::move(members));
            verdict.density = static_cast<double>(edges) / (static_cast<double>(s_size) * t);
            return verdict;
          }
        }
      }
    }
    return verdict;
  }

  const auto& sampled = std::get<SampledMode>(mode);
  Rng rng = make_rng(sampled.seed, 0xab);
  for (std::uint64_t trial = 0; trial < sampled.trials; ++trial) {
    auto order = detail::random_subset(n, n, rng);
    const int s_size = uniform_int(rng, min_size, n - min_size);
    const int t_size = uniform_int(rng, min_size, n - s_size);
    VertexSet s(n, std::vector<int>(order.begin(), order.begin() + s_size));
    VertexSet t(n, std::vector<int>(order.begin() + s_size, order.begin() + s_size + t_size));
    const long long edges = edges_between(g, s, t);
    if (!within(edges, s_size, t_size)) {
      verdict.holds = false;
      verdict.reason = "density of a large disjoint pair deviates from alpha by more than beta";
      verdict.density = static_cast<double>(edges) / (static_cast<double>(s_size) * t_size);
      verdict.s = std::move(s);
      verdict.t = std::move(t);
      return verdict;
    }
  }
  return verdict;
}

}  // namespace hamdeck
