#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "hamdeck/graph.hpp"
#include "hamdeck/predicates.hpp"
#include "hamdeck/random.hpp"
#include "hamdeck/walecki.hpp"

namespace hamdeck {

struct Arc {
  int from = 0;
  int to = 0;
  auto operator<=>(const Arc&) const = default;
};

/// Orientation of a simple graph. Internal to regularization.
class Digraph {
 public:
  Digraph() = default;
  Digraph(int n, std::vector<Arc> arcs) : n_(n), arcs_(std::move(arcs)), out_(n, 0), in_(n, 0) {
    for (const Arc& a : arcs_) {
      require(a.from != a.to, ErrorKind::kInvalidInput, "digraph: self-arc");
      ++out_[a.from];
      ++in_[a.to];
    }
  }

  [[nodiscard]] int order() const { return n_; }
  [[nodiscard]] const std::vector<Arc>& arcs() const { return arcs_; }
  [[nodiscard]] int out_degree(int v) const { return out_[v]; }
  [[nodiscard]] int in_degree(int v) const { return in_[v]; }

  friend bool operator==(const Digraph& a, const Digraph& b) { return a.n_ == b.n_ && a.arcs_ == b.arcs_; }

 private:
  int n_ = 0;
  std::vector<Arc> arcs_;
  std::vector<int> out_;
  std::vector<int> in_;
};

/// Each edge gets a direction from an independent fair coin, in canonical
/// edge order.
inline Digraph random_orientation(const Graph& g, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0x0e);
  std::vector<Arc> arcs;
  arcs.reserve(g.size());
  for (const Edge& e : g.edges()) {
    arcs.push_back(coin(rng) ? Arc{e.u, e.v} : Arc{e.v, e.u});
  }
  return Digraph(g.order(), std::move(arcs));
}

struct FlowArc {
  int from = 0;
  int to = 0;
  long long capacity = 0;
};

/// Capacitated network with a designated source and sink.
///
/// When produced by build_flow_network the layout is: nodes 0..n-1 are X,
/// n..2n-1 are Y, 2n is the source and 2n+1 the sink; arcs are source->X,
/// then Y->sink, then one unit arc x->y per digraph arc.
struct FlowNetwork {
  int node_count = 0;
  int source = 0;
  int sink = 0;
  std::vector<FlowArc> arcs;

  int vertex_count = 0;
  int half_degree = 0;
  std::size_t middle_begin = 0;

  [[nodiscard]] int x_node(int v) const { return v; }
  [[nodiscard]] int y_node(int v) const { return vertex_count + v; }
};

inline FlowNetwork build_flow_network(const Digraph& d, int half_degree) {
  require(half_degree >= 1, ErrorKind::kInvalidInput, "build_flow_network: half degree must be at least 1");
  const int n = d.order();
  FlowNetwork net;
  net.vertex_count = n;
  net.half_degree = half_degree;
  net.node_count = 2 * n + 2;
  net.source = 2 * n;
  net.sink = 2 * n + 1;
  net.arcs.reserve(static_cast<std::size_t>(2 * n) + d.arcs().size());
  for (int v = 0; v < n; ++v) net.arcs.push_back({net.source, net.x_node(v), half_degree});
  for (int v = 0; v < n; ++v) net.arcs.push_back({net.y_node(v), net.sink, half_degree});
  net.middle_begin = net.arcs.size();
  for (const Arc& a : d.arcs()) net.arcs.push_back({net.x_node(a.from), net.y_node(a.to), 1});
  return net;
}

struct FlowResult {
  long long value = 0;
  std::vector<long long> flow;  // per arc, same order as FlowNetwork::arcs
};

/// Integral maximum flow (Dinic).
inline FlowResult max_flow(const FlowNetwork& net) {
  struct Residual {
    int to;
    long long cap;
    std::size_t rev;
  };
  const auto nodes = static_cast<std::size_t>(net.node_count);
  std::vector<std::vector<Residual>> graph(nodes);
  std::vector<std::pair<int, std::size_t>> handle;  // network arc -> (node, index)
  handle.reserve(net.arcs.size());
  for (const FlowArc& a : net.arcs) {
    require(a.capacity >= 0, ErrorKind::kInvalidInput, "max_flow: negative capacity");
    require(a.from != a.to, ErrorKind::kInvalidInput, "max_flow: self-arc");
    graph[a.from].push_back({a.to, a.capacity, graph[a.to].size()});
    graph[a.to].push_back({a.from, 0, graph[a.from].size() - 1});
    handle.emplace_back(a.from, graph[a.from].size() - 1);
  }

  std::vector<int> level(nodes);
  std::vector<std::size_t> next(nodes);
  auto bfs = [&]() {
    std::fill(level.begin(), level.end(), -1);
    std::queue<int> queue;
    level[net.source] = 0;
    queue.push(net.source);
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop();
      for (const Residual& r : graph[v]) {
        if (r.cap > 0 && level[r.to] < 0) {
          level[r.to] = level[v] + 1;
          queue.push(r.to);
        }
      }
    }
    return level[net.sink] >= 0;
  };
  // Iterative blocking-flow search to keep stack depth bounded.
  auto push = [&](long long limit) -> long long {
    std::vector<std::pair<int, std::size_t>> path;  // (node, edge index)
    int v = net.source;
    while (true) {
      if (v == net.sink) {
        long long bottleneck = limit;
        for (const auto& [u, i] : path) bottleneck = std::min(bottleneck, graph[u][i].cap);
        for (const auto& [u, i] : path) {
          Residual& r = graph[u][i];
          r.cap -= bottleneck;
          graph[r.to][r.rev].cap += bottleneck;
        }
        return bottleneck;
      }
      bool advanced = false;
      for (std::size_t& i = next[v]; i < graph[v].size(); ++i) {
        const Residual& r = graph[v][i];
        if (r.cap > 0 && level[r.to] == level[v] + 1) {
          path.emplace_back(v, i);
          v = r.to;
          advanced = true;
          break;
        }
      }
      if (!advanced) {
        if (path.empty()) return 0;
        level[v] = -1;  // dead end
        v = path.back().first;
        path.pop_back();
        ++next[v];
      }
    }
  };

  FlowResult result;
  const long long inf = std::numeric_limits<long long>::max();
  while (bfs()) {
    std::fill(next.begin(), next.end(), 0);
    while (const long long pushed = push(inf)) result.value += pushed;
  }
  result.flow.reserve(net.arcs.size());
  for (std::size_t k = 0; k < net.arcs.size(); ++k) {
    const auto& [node, index] = handle[k];
    result.flow.push_back(net.arcs[k].capacity - graph[node][index].cap);
  }
  return result;
}

/// Capacity bounds, conservation at internal nodes, and value consistency.
inline Verdict check_flow(const FlowNetwork& net, const FlowResult& result) {
  if (result.flow.size() != net.arcs.size()) return Verdict::failure("flow vector length mismatch");
  std::vector<long long> balance(static_cast<std::size_t>(net.node_count), 0);
  for (std::size_t k = 0; k < net.arcs.size(); ++k) {
    const long long f = result.flow[k];
    if (f < 0 || f > net.arcs[k].capacity) {
      return Verdict::failure("arc " + std::to_string(k) + " carries " + std::to_string(f) + " outside [0, " +
                              std::to_string(net.arcs[k].capacity) + "]");
    }
    balance[net.arcs[k].from] -= f;
    balance[net.arcs[k].to] += f;
  }
  for (int v = 0; v < net.node_count; ++v) {
    if (v == net.source || v == net.sink) continue;
    if (balance[v] != 0) return Verdict::failure("conservation violated at node " + std::to_string(v));
  }
  if (-balance[net.source] != result.value || balance[net.sink] != result.value) {
    return Verdict::failure("flow value does not match source/sink balance");
  }
  return {};
}

struct RegularizeParams {
  double c0 = 0.5;      // target density fraction
  double eps0 = 0.1;    // degree slack fraction
  double gamma0 = 0.01; // cross-density fraction
  std::uint64_t seed = 0;
  int orientation_attempts = 128;
  std::uint64_t density_samples = 10000;  // 0 skips the sampled hypothesis check
};

/// d = ceil((c0 - eps0) n / 2).
inline int target_half_degree(const RegularizeParams& params, int n) {
  return ceil_count((params.c0 - params.eps0) * n / 2.0);
}

inline double degree_band(int n) { return std::pow(static_cast<double>(n), 2.0 / 3.0); }

struct RegularizeOutcome {
  Graph subgraph;
  int half_degree = 0;
  int attempts = 0;          // orientations tried, including the successful one
  long long best_flow = 0;   // equals half_degree * n on success
};

namespace detail {

inline void check_regularize_params(const RegularizeParams& p) {
  require(p.eps0 > 0.0 && p.eps0 <= p.c0 && p.c0 <= 1.0, ErrorKind::kInvalidInput,
          "regularize: need 0 < eps0 <= c0 <= 1");
  require(p.gamma0 > 0.0, ErrorKind::kInvalidInput, "regularize: gamma0 must be positive");
  require(p.orientation_attempts >= 1, ErrorKind::kInvalidInput, "regularize: need at least one orientation");
}

}  // namespace detail

/// Degrees within n^{2/3} of c0*n.
inline Verdict check_degree_band(const Graph& g, double c0) {
  const int n = g.order();
  const double centre = c0 * n;
  const double band = degree_band(n);
  for (int v = 0; v < n; ++v) {
    if (std::abs(g.degree(v) - centre) > band + 1e-9) {
      return Verdict::failure("vertex " + std::to_string(v) + " has degree " + std::to_string(g.degree(v)) +
                              ", outside c0*n +- n^(2/3) = " + std::to_string(centre) + " +- " +
                              std::to_string(band));
    }
  }
  return {};
}

/// Sampled check of "at least gamma0 n^2 edges between any A, B with
/// |A| >= c0 n / 3 and |B| >= n / 2".
inline Verdict sample_cross_density(const Graph& g, double c0, double gamma0, std::uint64_t samples,
                                    std::uint64_t seed) {
  const int n = g.order();
  if (n == 0 || samples == 0) return {};
  const int min_a = std::max(1, ceil_count(c0 * n / 3.0));
  const int min_b = std::max(1, ceil_count(n / 2.0));
  const long long needed = ceil_count(gamma0 * n * n);
  Rng rng = make_rng(seed, 0xcd);
  for (std::uint64_t trial = 0; trial < samples; ++trial) {
    const int a_size = uniform_int(rng, std::min(min_a, n), n);
    const int b_size = uniform_int(rng, std::min(min_b, n), n);
    VertexSet a(n, detail::random_subset(n, a_size, rng));
    VertexSet b(n, detail::random_subset(n, b_size, rng));
    const long long count = edges_between(g, a, b);
    if (count < needed) {
      return Verdict::failure("sampled pair with |A|=" + std::to_string(a_size) + ", |B|=" + std::to_string(b_size) +
                              " has " + std::to_string(count) + " < gamma0 n^2 = " + std::to_string(needed) +
                              " edges");
    }
  }
  return {};
}

/// Keeps the unit arcs carrying flow and forgets their orientation.
inline Graph subgraph_from_flow(const FlowNetwork& net, const FlowResult& result) {
  EdgeList edges;
  for (std::size_t k = net.middle_begin; k < net.arcs.size(); ++k) {
    if (result.flow[k] == 1) {
      edges.emplace_back(net.arcs[k].from, net.arcs[k].to - net.vertex_count);
    }
  }
  return Graph(net.vertex_count, std::move(edges));
}

/// Tries up to `attempts` random orientations of g and returns the first
/// whose flow network (half degree d) admits a flow of value d*n, as an
/// undirected 2d-regular spanning subgraph.
inline RegularizeOutcome regular_subgraph_with_half_degree(const Graph& g, int d, int attempts,
                                                          std::uint64_t seed) {
  require(d >= 1, ErrorKind::kPrecondition, "regular subgraph: target half degree is below 1");
  const int n = g.order();
  const long long target = static_cast<long long>(d) * n;
  RegularizeOutcome outcome;
  outcome.half_degree = d;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    const Digraph oriented = random_orientation(g, derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    outcome.attempts = attempt + 1;
    // Cheap necessary condition before running the flow.
    bool possible = true;
    for (int v = 0; v < n && possible; ++v) {
      possible = oriented.out_degree(v) >= d && oriented.in_degree(v) >= d;
    }
    if (!possible) continue;
    const FlowNetwork net = build_flow_network(oriented, d);
    const FlowResult flow = max_flow(net);
    outcome.best_flow = std::max(outcome.best_flow, flow.value);
    if (flow.value < target) continue;

    if (const Verdict ok = check_flow(net, flow); !ok.ok) {
      throw std::logic_error("max_flow produced an invalid flow: " + ok.violation);
    }
    outcome.subgraph = subgraph_from_flow(net, flow);
    if (outcome.subgraph.regular_degree() != 2 * d) {
      throw std::logic_error("saturating flow did not yield a 2d-regular subgraph");
    }
    return outcome;
  }
  fail(ErrorKind::kBudgetExhausted, "regular subgraph: no saturating flow in " + std::to_string(attempts) +
                                        " orientations; best flow " + std::to_string(outcome.best_flow) + " of " +
                                        std::to_string(target));
}

/// Spanning subgraph in which every vertex has degree exactly 2d,
/// d = ceil((c0 - eps0) n / 2), via random orientation and max flow.
/// Fresh orientations are tried until one admits a flow of value d*n.
inline RegularizeOutcome extract_regular_subgraph_detailed(const Graph& g, const RegularizeParams& params) {
  detail::check_regularize_params(params);
  if (const Verdict band = check_degree_band(g, params.c0); !band.ok) {
    fail(ErrorKind::kPrecondition, "extract_regular_subgraph: degree hypothesis violated: " + band.violation);
  }
  if (const Verdict density = sample_cross_density(g, params.c0, params.gamma0, params.density_samples, params.seed);
      !density.ok) {
    fail(ErrorKind::kPrecondition, "extract_regular_subgraph: cross-density hypothesis violated: " + density.violation);
  }
  return regular_subgraph_with_half_degree(g, target_half_degree(params, g.order()), params.orientation_attempts,
                                           params.seed);
}

inline Graph extract_regular_subgraph(const Graph& g, const RegularizeParams& params) {
  return extract_regular_subgraph_detailed(g, params).subgraph;
}

enum class CutCase {
  kTrivial,          // |S| <= |T|
  kSmallSource,      // |S| < d
  kLargeImbalance,   // |S| - |T| >= 4 n^{2/3} / eps0
  kModerateSource,   // |S| <= (1 - c0/3) n
  kLargeSource,      // |S| > (1 - c0/3) n
};

inline const char* to_string(CutCase c) {
  switch (c) {
    case CutCase::kTrivial: return "trivial";
    case CutCase::kSmallSource: return "small-source";
    case CutCase::kLargeImbalance: return "large-imbalance";
    case CutCase::kModerateSource: return "moderate-source";
    case CutCase::kLargeSource: return "large-source";
  }
  return "unknown";
}

struct CutReport {
  long long capacity = 0;
  long long target = 0;        // d n
  long long crossing_arcs = 0; // e(S, Y \ T)
  CutCase which = CutCase::kTrivial;
  bool at_least_target = false;
};

/// Capacity d(n - |S|) + e(S, Y\T) + d|T| of the cut {s} + S + T, and the
/// case of the min-cut argument it falls under. S indexes X, T indexes Y.
inline CutReport audit_cut_cases(const FlowNetwork& net, const RegularizeParams& params, const VertexSet& s,
                                 const VertexSet& t) {
  const int n = net.vertex_count;
  const long long d = net.half_degree;
  const auto in_s = VertexSet(n, s.members()).indicator();
  const auto in_t = VertexSet(n, t.members()).indicator();
  CutReport report;
  for (std::size_t k = net.middle_begin; k < net.arcs.size(); ++k) {
    const int x = net.arcs[k].from;
    const int y = net.arcs[k].to - n;
    if (in_s[x] && !in_t[y]) report.crossing_arcs += net.arcs[k].capacity;
  }
  const auto s_size = static_cast<long long>(s.size());
  const auto t_size = static_cast<long long>(t.size());
  report.capacity = d * (n - s_size) + report.crossing_arcs + d * t_size;
  report.target = d * n;
  report.at_least_target = report.capacity >= report.target;

  if (s_size <= t_size) {
    report.which = CutCase::kTrivial;
  } else if (s_size < d) {
    report.which = CutCase::kSmallSource;
  } else if (static_cast<double>(s_size - t_size) >= 4.0 * degree_band(n) / params.eps0) {
    report.which = CutCase::kLargeImbalance;
  } else if (static_cast<double>(s_size) <= (1.0 - params.c0 / 3.0) * n) {
    report.which = CutCase::kModerateSource;
  } else {
    report.which = CutCase::kLargeSource;
  }
  return report;
}

}  // namespace hamdeck
