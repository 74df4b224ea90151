#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hamdeck/error.hpp"
#include "hamdeck/graph.hpp"

namespace hamdeck {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr int kHamiltonCountCap = 16;
inline constexpr std::size_t kCycleListCap = 2'000'000;

/// Number of Hamilton cycles (as undirected subgraphs) by dynamic
/// programming over (visited set, end vertex) with vertex 0 as the root.
inline BigInt count_hamilton_cycles_exact(const Graph& g) {
  const int n = g.order();
  require(n <= kHamiltonCountCap, ErrorKind::kCapExceeded,
          "count_hamilton_cycles_exact: limited to n <= " + std::to_string(kHamiltonCountCap));
  if (n < 3) return 0;
  const std::size_t states = std::size_t{1} << n;
  std::vector<std::uint64_t> paths(states * static_cast<std::size_t>(n), 0);
  paths[1 * static_cast<std::size_t>(n) + 0] = 1;
  for (std::size_t mask = 1; mask < states; mask += 2) {  // masks containing 0
    for (int v = 0; v < n; ++v) {
      const std::uint64_t here = paths[mask * n + v];
      if (here == 0) continue;
      for (int w : g.neighbors(v)) {
        if ((mask >> w) & 1U) continue;
        paths[(mask | (std::size_t{1} << w)) * n + w] += here;
      }
    }
  }
  BigInt directed = 0;
  for (int v : g.neighbors(0)) directed += paths[(states - 1) * n + v];
  return directed / 2;
}

namespace detail {

/// Hamilton cycles as bitmasks over the sorted edge list (m <= 64). Each
/// cycle is listed once: rooted at 0 with its second vertex smaller than its
/// last.
inline std::vector<std::uint64_t> hamilton_cycle_masks(const Graph& g) {
  const int n = g.order();
  require(g.size() <= 64, ErrorKind::kCapExceeded, "decomposition counting is limited to 64 edges");
  std::vector<std::uint64_t> out;
  if (n < 3) return out;
  const auto& edges = g.edges();
  std::vector<int> bit(static_cast<std::size_t>(n) * n, -1);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    bit[edges[i].u * n + edges[i].v] = static_cast<int>(i);
    bit[edges[i].v * n + edges[i].u] = static_cast<int>(i);
  }
  std::vector<int> path{0};
  std::vector<char> on(static_cast<std::size_t>(n), 0);
  on[0] = 1;
  auto walk = [&](auto&& self, std::uint64_t mask) -> void {
    const int end = path.back();
    if (static_cast<int>(path.size()) == n) {
      if (bit[end * n] >= 0 && path[1] < end) {
        out.push_back(mask | (std::uint64_t{1} << bit[end * n]));
        require(out.size() <= kCycleListCap, ErrorKind::kCapExceeded, "too many Hamilton cycles to list");
      }
      return;
    }
    for (int w : g.neighbors(end)) {
      if (on[w]) continue;
      on[w] = 1;
      path.push_back(w);
      self(self, mask | (std::uint64_t{1} << bit[end * n + w]));
      path.pop_back();
      on[w] = 0;
    }
  };
  walk(walk, 0);
  return out;
}

inline void require_even_regular(const Graph& g, const char* who) {
  const auto r = g.regular_degree();
  require(r.has_value(), ErrorKind::kPrecondition, std::string(who) + ": graph is not regular");
  require(*r % 2 == 0, ErrorKind::kPrecondition, std::string(who) + ": odd degree");
}

inline std::uint64_t full_mask(std::size_t m) { return m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1; }

}  // namespace detail

/// Unordered Hamiltonian decompositions: exact cover of the edge set by
/// Hamilton cycles, always branching on the lowest uncovered edge so every
/// decomposition is reached in exactly one order.
inline BigInt count_decompositions_exact(const Graph& g) {
  detail::require_even_regular(g, "count_decompositions_exact");
  if (g.size() == 0) return 1;
  const auto cycles = detail::hamilton_cycle_masks(g);
  const std::size_t m = g.size();
  std::vector<std::vector<std::uint64_t>> by_edge(m);
  for (std::uint64_t c : cycles) {
    for (std::uint64_t rest = c; rest != 0; rest &= rest - 1) by_edge[std::countr_zero(rest)].push_back(c);
  }
  const std::uint64_t full = detail::full_mask(m);
  auto cover = [&](auto&& self, std::uint64_t covered) -> BigInt {
    if (covered == full) return 1;
    const int e = std::countr_zero(~covered);
    BigInt total = 0;
    for (std::uint64_t c : by_edge[e]) {
      if ((c & covered) == 0) total += self(self, covered | c);
    }
    return total;
  };
  return cover(cover, 0);
}

/// Ordered Hamiltonian decompositions (sequences of cycles), counted by
/// memoised recursion over the covered edge set. Equals the unordered count
/// times k! for k = r / 2 cycles.
inline BigInt count_ordered_decompositions(const Graph& g) {
  detail::require_even_regular(g, "count_ordered_decompositions");
  if (g.size() == 0) return 1;
  const auto cycles = detail::hamilton_cycle_masks(g);
  const std::uint64_t full = detail::full_mask(g.size());
  std::unordered_map<std::uint64_t, BigInt> memo;
  auto sequences = [&](auto&& self, std::uint64_t covered) -> BigInt {
    if (covered == full) return 1;
    if (auto it = memo.find(covered); it != memo.end()) return it->second;
    BigInt total = 0;
    for (std::uint64_t c : cycles) {
      if ((c & covered) == 0) total += self(self, covered | c);
    }
    memo.emplace(covered, total);
    return total;
  };
  return sequences(sequences, 0);
}

/// For 4-regular graphs: Hamilton cycles whose complement is also a Hamilton
/// cycle, halved.
inline BigInt count_decompositions_by_pairing(const Graph& g) {
  const auto r = g.regular_degree();
  require(r.has_value() && *r == 4, ErrorKind::kPrecondition, "count_decompositions_by_pairing: needs a 4-regular graph");
  const auto cycles = detail::hamilton_cycle_masks(g);
  const std::uint64_t full = detail::full_mask(g.size());
  std::vector<std::uint64_t> sorted = cycles;
  std::sort(sorted.begin(), sorted.end());
  std::uint64_t paired = 0;
  for (std::uint64_t c : cycles) paired += std::binary_search(sorted.begin(), sorted.end(), full & ~c) ? 1 : 0;
  return BigInt(paired / 2);
}

inline BigInt factorial(int k) {
  BigInt out = 1;
  for (int i = 2; i <= k; ++i) out *= i;
  return out;
}

/// ln of (r!)^{n/r}, the Bregman bound on Hamilton cycles of an r-regular
/// graph.
inline double bregman_log_bound(int n, int r) {
  require(r >= 1 && r < n, ErrorKind::kInvalidInput, "bregman_log_bound: need 1 <= r < n");
  return static_cast<double>(n) / r * std::lgamma(r + 1.0);
}

struct DecompositionUpper {
  double finite = 0.0;      // sum over k = r, r-2, ..., 2 of (n/k) ln k!
  double asymptotic = 0.0;  // (n r / 2) ln(r / e^2)
};

inline DecompositionUpper decomposition_log_upper(int n, int r) {
  require(r >= 2 && r < n, ErrorKind::kInvalidInput, "decomposition_log_upper: need 2 <= r < n");
  require(r % 2 == 0, ErrorKind::kInvalidInput, "decomposition_log_upper: r must be even");
  DecompositionUpper out;
  for (int k = r; k >= 2; k -= 2) out.finite += static_cast<double>(n) / k * std::lgamma(k + 1.0);
  out.asymptotic = static_cast<double>(n) * r / 2.0 * (std::log(static_cast<double>(r)) - 2.0);
  return out;
}

/// ln of r^{(1 - 5 eps) r n / 2}.
inline double decomposition_log_lower(int n, int r, double eps) {
  require(eps > 0.0 && eps < 0.1, ErrorKind::kInvalidInput, "decomposition_log_lower: need 0 < eps < 1/10");
  require(r >= 1 && n >= 1, ErrorKind::kInvalidInput, "decomposition_log_lower: need positive n and r");
  return (1.0 - 5.0 * eps) * r * n / 2.0 * std::log(static_cast<double>(r));
}

/// The eps -> 0 limit of the lower bound, (r n / 2) ln r.
inline double decomposition_log_exponent(int n, int r) {
  return static_cast<double>(r) * n / 2.0 * std::log(static_cast<double>(r));
}

struct CountReport {
  int n = 0;
  int r = 0;
  double eps = 0.05;
  std::optional<BigInt> exact_count;        // Hamiltonian decompositions
  std::optional<BigInt> hamilton_cycles;
  std::optional<double> log_lower;
  std::optional<double> log_upper;
  std::optional<double> log_upper_asymptotic;
  std::optional<double> log_hamilton_upper;  // Bregman
  std::vector<std::string> methods;
};

/// Bound formulas for an r-regular graph, plus exact counts when asked.
inline CountReport count_report(const Graph& g, double eps, bool exact) {
  const auto r = g.regular_degree();
  require(r.has_value(), ErrorKind::kPrecondition, "count: graph is not regular");
  CountReport report;
  report.n = g.order();
  report.r = *r;
  report.eps = eps;
  if (*r >= 1 && *r < report.n) {
    report.log_hamilton_upper = bregman_log_bound(report.n, *r);
    report.methods.emplace_back("bregman");
    report.log_lower = decomposition_log_lower(report.n, *r, eps);
    report.methods.emplace_back("lower-formula");
  }
  if (*r % 2 == 0 && *r >= 2 && *r < report.n) {
    const auto upper = decomposition_log_upper(report.n, *r);
    report.log_upper = upper.finite;
    report.log_upper_asymptotic = upper.asymptotic;
    report.methods.emplace_back("upper-product");
  }
  if (exact) {
    report.hamilton_cycles = count_hamilton_cycles_exact(g);
    report.methods.emplace_back("held-karp");
    if (*r % 2 == 0) {
      report.exact_count = count_decompositions_exact(g);
      report.methods.emplace_back("exact-cover");
    }
  }
  return report;
}

}  // namespace hamdeck
