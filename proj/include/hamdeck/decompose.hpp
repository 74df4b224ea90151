#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>

#include "hamdeck/deadline.hpp"
#include "hamdeck/error.hpp"
#include "hamdeck/graph.hpp"
#include "hamdeck/partition.hpp"
#include "hamdeck/random.hpp"
#include "hamdeck/rotation.hpp"
#include "hamdeck/walecki.hpp"

namespace hamdeck {

struct ResidualLimits {
  std::uint64_t node_budget = 50'000'000;  // search nodes over the whole completion
  std::uint64_t leaf_budget = 200'000;     // nodes per single Hamilton-cycle or split search
  int tries_per_level = 6;                 // cycles drawn per level before backtracking
  std::uint64_t seed = 0;
  Deadline deadline;
};

struct ResidualStats {
  std::uint64_t nodes = 0;
  int cycles_drawn = 0;
  int backtracks = 0;
};

enum class SearchStatus { kFound, kNone, kBudget };

namespace detail {

/// Depth-first Hamilton-cycle search with degree and connectivity pruning.
class HamiltonSearch {
 public:
  HamiltonSearch(const Graph& g, std::uint64_t budget, std::uint64_t* counter)
      : g_(g), n_(g.order()), budget_(budget), counter_(counter), visited_(static_cast<std::size_t>(n_), 0) {}

  /// One cycle; neighbour order is fewest-onward-options first with random
  /// tie-breaks.
  SearchStatus find(Rng& rng, Cycle& out) {
    rng_ = &rng;
    if (!precheck()) return SearchStatus::kNone;
    const int start = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n_)));
    stop_after_first_ = true;
    on_cycle_ = [&](const Cycle& c) { out = c; };
    return run(start, -1);
  }

  /// Every Hamilton cycle through edge {a, b}, each once, traversed a -> b.
  SearchStatus enumerate_through(int a, int b, const std::function<void(const Cycle&)>& visit) {
    rng_ = nullptr;
    if (!precheck() || !g_.has_edge(a, b)) return SearchStatus::kNone;
    stop_after_first_ = false;
    on_cycle_ = visit;
    return run(a, b);
  }

 private:
  bool precheck() const {
    if (n_ < 3) return false;
    for (int v = 0; v < n_; ++v) {
      if (g_.degree(v) < 2) return false;
    }
    return is_connected(g_);
  }

  SearchStatus run(int start, int second) {
    path_.assign(1, start);
    std::fill(visited_.begin(), visited_.end(), 0);
    visited_[start] = 1;
    found_ = false;
    exhausted_ = false;
    if (second >= 0) {
      path_.push_back(second);
      visited_[second] = 1;
      if (feasible()) extend();
    } else {
      extend();
    }
    if (found_ && stop_after_first_) return SearchStatus::kFound;
    if (exhausted_) return SearchStatus::kBudget;
    return found_ ? SearchStatus::kFound : SearchStatus::kNone;
  }

  bool tick() {
    ++*counter_;
    if (++used_ > budget_) {
      exhausted_ = true;
      return false;
    }
    return true;
  }

  /// Every unvisited vertex keeps two usable neighbours, and the unvisited
  /// vertices are reachable from the current end.
  bool feasible() {
    const int end = path_.back();
    const int start = path_.front();
    int unvisited = 0;
    for (int w = 0; w < n_; ++w) {
      if (visited_[w]) continue;
      ++unvisited;
      int usable = 0;
      for (int u : g_.neighbors(w)) {
        if (!visited_[u] || u == end || u == start) ++usable;
      }
      if (usable < 2) return false;
    }
    if (unvisited == 0) return true;
    queue_.clear();
    reach_.assign(static_cast<std::size_t>(n_), 0);
    queue_.push_back(end);
    reach_[end] = 1;
    int reached = 0;
    for (std::size_t i = 0; i < queue_.size(); ++i) {
      for (int u : g_.neighbors(queue_[i])) {
        if (visited_[u] || reach_[u]) continue;
        reach_[u] = 1;
        ++reached;
        queue_.push_back(u);
      }
    }
    return reached == unvisited;
  }

  void extend() {
    if (!tick()) return;
    const int end = path_.back();
    if (static_cast<int>(path_.size()) == n_) {
      if (g_.has_edge(end, path_.front())) {
        found_ = true;
        on_cycle_(path_);
      }
      return;
    }
    std::vector<std::pair<int, int>> next;  // (onward options, vertex)
    for (int w : g_.neighbors(end)) {
      if (visited_[w]) continue;
      int options = 0;
      for (int u : g_.neighbors(w)) options += visited_[u] ? 0 : 1;
      next.emplace_back(options, w);
    }
    if (rng_ != nullptr) {
      shuffle(next, *rng_);
      std::stable_sort(next.begin(), next.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    }
    for (const auto& [options, w] : next) {
      path_.push_back(w);
      visited_[w] = 1;
      if (feasible()) extend();
      visited_[w] = 0;
      path_.pop_back();
      if (exhausted_ || (found_ && stop_after_first_)) return;
    }
  }

  const Graph& g_;
  int n_;
  std::uint64_t budget_;
  std::uint64_t* counter_;
  std::uint64_t used_ = 0;
  Rng* rng_ = nullptr;
  std::vector<char> visited_;
  std::vector<char> reach_;
  std::vector<int> queue_;
  Cycle path_;
  bool found_ = false;
  bool exhausted_ = false;
  bool stop_after_first_ = true;
  std::function<void(const Cycle&)> on_cycle_;
};

/// Splits a 2k-regular graph into k Hamilton cycles by colouring edges:
/// every vertex takes two edges of each colour and a colour class may only
/// close a cycle once it spans all n vertices.
class ColourSplit {
 public:
  ColourSplit(const Graph& g, int colours, std::uint64_t budget, std::uint64_t* counter)
      : g_(g), n_(g.order()), k_(colours), budget_(budget), counter_(counter) {}

  SearchStatus solve(Rng& rng, std::vector<Cycle>& out) {
    // Edge order: breadth-first from a random root so constraints meet early.
    order_.clear();
    std::vector<char> seen(static_cast<std::size_t>(n_), 0);
    std::vector<char> taken(g_.size(), 0);
    std::vector<int> queue{static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n_)))};
    seen[queue[0]] = 1;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const int v = queue[i];
      for (int w : g_.neighbors(v)) {
        const auto idx = index_of(Edge(v, w));
        if (!taken[idx]) {
          taken[idx] = 1;
          order_.push_back(Edge(v, w));
        }
        if (!seen[w]) {
          seen[w] = 1;
          queue.push_back(w);
        }
      }
    }
    if (static_cast<int>(queue.size()) != n_) return SearchStatus::kNone;

    count_.assign(static_cast<std::size_t>(n_) * k_, 0);
    other_end_.assign(static_cast<std::size_t>(n_) * k_, 0);
    for (int c = 0; c < k_; ++c) {
      for (int v = 0; v < n_; ++v) other_end_[slot(v, c)] = v;
    }
    class_size_.assign(static_cast<std::size_t>(k_), 0);
    colour_.assign(order_.size(), -1);
    preference_.resize(order_.size());
    for (auto& p : preference_) {
      p.resize(static_cast<std::size_t>(k_));
      std::iota(p.begin(), p.end(), 0);
      shuffle(p, rng);
    }
    found_ = false;
    exhausted_ = false;
    used_ = 0;
    assign(0, 0);
    if (found_) {
      out = extract();
      return SearchStatus::kFound;
    }
    return exhausted_ ? SearchStatus::kBudget : SearchStatus::kNone;
  }

 private:
  [[nodiscard]] std::size_t slot(int v, int c) const { return static_cast<std::size_t>(v) * k_ + c; }

  std::size_t index_of(const Edge& e) const {
    const auto& edges = g_.edges();
    return static_cast<std::size_t>(std::lower_bound(edges.begin(), edges.end(), e) - edges.begin());
  }

  // `open` is the number of colours already in use; later colours are
  // interchangeable, so only the first unused one is tried.
  void assign(std::size_t i, int open) {
    ++*counter_;
    if (++used_ > budget_) {
      exhausted_ = true;
      return;
    }
    if (i == order_.size()) {
      found_ = true;
      return;
    }
    const Edge e = order_[i];
    bool tried_fresh = false;
    for (int c : preference_[i]) {
      if (c >= open) {
        if (tried_fresh) continue;
        tried_fresh = true;
        c = open;
      }
      if (count_[slot(e.u, c)] == 2 || count_[slot(e.v, c)] == 2) continue;
      const int eu = other_end_[slot(e.u, c)];
      const int ev = other_end_[slot(e.v, c)];
      if (eu == e.v && class_size_[c] != n_ - 1) continue;  // premature cycle
      // apply
      ++count_[slot(e.u, c)];
      ++count_[slot(e.v, c)];
      ++class_size_[c];
      const int saved_eu = other_end_[slot(eu, c)];
      const int saved_ev = other_end_[slot(ev, c)];
      if (eu != e.v) {
        other_end_[slot(eu, c)] = ev;
        other_end_[slot(ev, c)] = eu;
      }
      colour_[i] = c;
      assign(i + 1, std::max(open, c + 1));
      if (found_ || exhausted_) return;
      colour_[i] = -1;
      other_end_[slot(ev, c)] = saved_ev;
      other_end_[slot(eu, c)] = saved_eu;
      --class_size_[c];
      --count_[slot(e.v, c)];
      --count_[slot(e.u, c)];
    }
  }

  std::vector<Cycle> extract() const {
    std::vector<Cycle> cycles;
    for (int c = 0; c < k_; ++c) {
      EdgeList edges;
      for (std::size_t i = 0; i < order_.size(); ++i) {
        if (colour_[i] == c) edges.push_back(order_[i]);
      }
      const Graph part(n_, edges);
      Cycle cycle{0};
      int prev = -1;
      int at = 0;
      while (static_cast<int>(cycle.size()) < n_) {
        const auto nb = part.neighbors(at);
        const int next = nb[0] != prev ? nb[0] : nb[1];
        prev = at;
        at = next;
        cycle.push_back(at);
      }
      cycles.push_back(std::move(cycle));
    }
    return cycles;
  }

  const Graph& g_;
  int n_;
  int k_;
  std::uint64_t budget_;
  std::uint64_t* counter_;
  std::uint64_t used_ = 0;
  std::vector<Edge> order_;
  std::vector<int> count_;
  std::vector<int> other_end_;
  std::vector<int> class_size_;
  std::vector<int> colour_;
  std::vector<std::vector<int>> preference_;
  bool found_ = false;
  bool exhausted_ = false;
};

class ResidualSolver {
 public:
  ResidualSolver(const ResidualLimits& limits, ResidualStats& stats) : limits_(limits), stats_(stats) {}

  SearchStatus solve(const Graph& g, Rng& rng, std::vector<Cycle>& out) {
    limits_.deadline.check("complete_residual");
    if (stats_.nodes >= limits_.node_budget) return SearchStatus::kBudget;
    const int d = *g.regular_degree();
    if (d == 0) return SearchStatus::kFound;
    if (d == 2) {
      if (g.order() < 3 || !is_connected(g)) return SearchStatus::kNone;
      out.push_back(two_regular_cycle(g));
      return SearchStatus::kFound;
    }
    const std::uint64_t leaf = std::min(limits_.leaf_budget, limits_.node_budget - stats_.nodes);
    if (d == 4) {
      std::vector<Cycle> cycles;
      const SearchStatus status = ColourSplit(g, 2, leaf, &stats_.nodes).solve(rng, cycles);
      if (status == SearchStatus::kFound) out.insert(out.end(), cycles.begin(), cycles.end());
      return status;
    }
    for (int attempt = 0; attempt < limits_.tries_per_level; ++attempt) {
      if (stats_.nodes >= limits_.node_budget) return SearchStatus::kBudget;
      Cycle h;
      const SearchStatus found = HamiltonSearch(g, leaf, &stats_.nodes).find(rng, h);
      ++stats_.cycles_drawn;
      if (found == SearchStatus::kNone) return SearchStatus::kNone;
      if (found == SearchStatus::kBudget) continue;
      const Graph rest = subtract(g, cycle_edges(h));
      if (!is_connected(rest)) continue;
      std::vector<Cycle> below;
      if (solve(rest, rng, below) == SearchStatus::kFound) {
        out.push_back(std::move(h));
        out.insert(out.end(), below.begin(), below.end());
        return SearchStatus::kFound;
      }
      ++stats_.backtracks;
    }
    return SearchStatus::kBudget;
  }

 private:
  static Cycle two_regular_cycle(const Graph& g) {
    Cycle c{0};
    int prev = -1;
    int at = 0;
    while (static_cast<int>(c.size()) < g.order()) {
      const auto nb = g.neighbors(at);
      const int next = nb[0] != prev ? nb[0] : nb[1];
      prev = at;
      at = next;
      c.push_back(at);
    }
    return c;
  }

  const ResidualLimits& limits_;
  ResidualStats& stats_;
};

}  // namespace detail

/// Hamiltonian decomposition of a regular graph of even degree by
/// backtracking search: draw a Hamilton cycle, recurse on the rest, draw
/// another on failure. 4-regular remainders are split exactly by a two-colour
/// edge search. kInfeasible means no decomposition exists; kBudgetExhausted
/// means the search gave up.
inline Decomposition complete_residual(const Graph& r, const ResidualLimits& limits, ResidualStats* stats_out = nullptr) {
  const auto d = r.regular_degree();
  require(d.has_value(), ErrorKind::kPrecondition, "complete_residual: graph is not regular");
  require(*d % 2 == 0 && *d >= 2, ErrorKind::kPrecondition,
          "complete_residual: need even degree at least 2, got " + std::to_string(*d));
  ResidualStats stats;
  Rng rng = make_rng(limits.seed, 0xc0);
  std::vector<Cycle> cycles;
  const SearchStatus status = detail::ResidualSolver(limits, stats).solve(r, rng, cycles);
  if (stats_out != nullptr) *stats_out = stats;
  if (status == SearchStatus::kNone) {
    fail(ErrorKind::kInfeasible, "complete_residual: the graph has no Hamiltonian decomposition");
  }
  if (status == SearchStatus::kBudget) {
    fail(ErrorKind::kBudgetExhausted, "complete_residual: node budget exhausted after " +
                                          std::to_string(stats.nodes) + " nodes");
  }
  Decomposition out{r.order(), std::move(cycles), std::nullopt};
  out.canonicalize();
  if (const Verdict v = verify_decomposition(r, out); !v.ok) {
    throw std::logic_error("complete_residual: produced an invalid decomposition: " + v.violation);
  }
  return out;
}

/// Every Hamiltonian decomposition of g, each exactly once: the cycle through
/// edge {0, smallest remaining neighbour of 0} is chosen first at each level.
inline std::vector<Decomposition> enumerate_decompositions(const Graph& g, std::size_t limit = 1'000'000) {
  const auto d = g.regular_degree();
  require(d.has_value() && *d % 2 == 0, ErrorKind::kPrecondition,
          "enumerate_decompositions: graph must be regular with even degree");
  require(g.order() <= 12, ErrorKind::kCapExceeded, "enumerate_decompositions: limited to n <= 12");
  std::vector<Decomposition> all;
  std::vector<Cycle> chosen;
  std::uint64_t nodes = 0;
  std::function<void(const Graph&)> recurse = [&](const Graph& rest) {
    if (all.size() >= limit) return;
    if (rest.size() == 0) {
      Decomposition dec{g.order(), chosen, std::nullopt};
      dec.canonicalize();
      all.push_back(std::move(dec));
      return;
    }
    const int first = rest.neighbors(0).empty() ? -1 : rest.neighbors(0).front();
    if (first < 0) return;
    std::vector<Cycle> through;
    detail::HamiltonSearch(rest, ~std::uint64_t{0}, &nodes).enumerate_through(0, first, [&](const Cycle& c) {
      through.push_back(c);
    });
    for (const Cycle& c : through) {
      chosen.push_back(c);
      recurse(subtract(rest, cycle_edges(c)));
      chosen.pop_back();
    }
  };
  recurse(g);
  std::sort(all.begin(), all.end(), [](const Decomposition& a, const Decomposition& b) { return a.cycles < b.cycles; });
  return all;
}

struct StepTrace {
  int step = 0;
  int core_degree = 0;  // degree of G_i before the step
  int restarts = 0;
  int moves = 0;
  int factor_draws = 0;
  int cycle_reservoir_edges = 0;
  int gadget_core_edges = 0;
  double millis = 0.0;
};

struct PipelineRun {
  Graph input;
  PipelineParams params;
  int degree = 0;
  int core_degree = 0;
  bool core_meets_bound = false;
  int steps_planned = 0;
  std::vector<Cycle> cycles;  // in extraction order
  Graph residual;
  Decomposition completion;
  Decomposition result;
  std::vector<StepTrace> trace;
  ResidualStats residual_stats;
  double partition_millis = 0.0;
  double residual_millis = 0.0;
};

/// t = floor((d0 - eps r) / 2), lowered so that the core keeps degree >= 4,
/// then capped by max_steps.
inline int planned_steps(int core_degree, int r, const PipelineParams& params) {
  int t = static_cast<int>(std::floor((core_degree - params.eps * r) / 2.0 + 1e-9));
  t = std::min(t, (core_degree - 4) / 2);
  if (params.max_steps) t = std::min(t, *params.max_steps);
  return std::max(t, 0);
}

namespace detail {

inline double millis_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

/// Tri-partition, t rotation-extension steps on (G_i, F_i), then
/// completion of the residual R' = input minus the extracted cycles.
inline PipelineRun run_pipeline(const Graph& host, const PipelineParams& params) {
  using Clock = std::chrono::steady_clock;
  const int r = require_dense_even_regular(host, params.c, "decompose_pipeline");
  const int n = host.order();
  require(n >= params.min_order, ErrorKind::kPrecondition,
          "decompose_pipeline: n = " + std::to_string(n) + " is below the minimum order " +
              std::to_string(params.min_order));

  PipelineRun run;
  run.input = host;
  run.params = params;
  run.degree = r;

  auto started = Clock::now();
  const TriPartition tp = tri_partition(host, params);
  run.partition_millis = detail::millis_since(started);
  run.core_degree = tp.core_degree;
  run.core_meets_bound = tp.meets_degree_bound;
  run.steps_planned = planned_steps(tp.core_degree, r, params);

  Graph g = tp.G;
  Graph f = tp.F;
  EdgeList used;
  for (int i = 0; i < run.steps_planned; ++i) {
    started = Clock::now();
    const StepResult step = extract_hamilton_step(g, f, params, derive_seed(params.seed, 0x9000 + i));
    const int expected = tp.core_degree - 2 * (i + 1);
    if (step.g_next.regular_degree() != expected) {
      throw std::logic_error("decompose_pipeline: core lost regularity at step " + std::to_string(i));
    }
    StepTrace t;
    t.step = i;
    t.core_degree = tp.core_degree - 2 * i;
    t.restarts = step.restarts;
    t.moves = static_cast<int>(step.history.size());
    t.factor_draws = step.factor_draws;
    t.cycle_reservoir_edges = static_cast<int>(step.cycle_in_f.size());
    t.gadget_core_edges = static_cast<int>(step.e_g.size());
    t.millis = detail::millis_since(started);
    run.trace.push_back(t);
    const EdgeList h = cycle_edges(step.hamilton);
    used.insert(used.end(), h.begin(), h.end());
    run.cycles.push_back(step.hamilton);
    g = step.g_next;
    f = step.f_next;
  }

  run.residual = subtract(host, used);
  started = Clock::now();
  ResidualLimits limits;
  limits.node_budget = params.residual_node_budget;
  limits.seed = derive_seed(params.seed, 0xa000);
  limits.deadline = params.deadline;
  run.completion = complete_residual(run.residual, limits, &run.residual_stats);
  run.residual_millis = detail::millis_since(started);

  run.result.n = n;
  run.result.cycles = run.cycles;
  run.result.cycles.insert(run.result.cycles.end(), run.completion.cycles.begin(), run.completion.cycles.end());
  run.result.canonicalize();
  if (const Verdict v = verify_decomposition(host, run.result); !v.ok) {
    throw std::logic_error("decompose_pipeline: result fails verification: " + v.violation);
  }
  return run;
}

inline Decomposition decompose_pipeline(const Graph& host, const PipelineParams& params) {
  return run_pipeline(host, params).result;
}

inline Decomposition decompose_pipeline(const Graph& host, PipelineParams params, std::uint64_t seed) {
  params.seed = seed;
  return run_pipeline(host, params).result;
}

/// A perfect matching found by Edmonds' algorithm on a randomly relabelled
/// copy of g, or nothing if g has none.
inline std::optional<EdgeList> random_perfect_matching(const Graph& g, std::uint64_t seed) {
  const int n = g.order();
  if (n % 2 != 0) return std::nullopt;
  Rng rng = make_rng(seed, 0x4d);
  std::vector<int> label(static_cast<std::size_t>(n));
  std::iota(label.begin(), label.end(), 0);
  shuffle(label, rng);
  EdgeList order = g.edges();
  shuffle(order, rng);

  using BoostGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  BoostGraph bg(static_cast<std::size_t>(n));
  for (const Edge& e : order) boost::add_edge(static_cast<std::size_t>(label[e.u]), static_cast<std::size_t>(label[e.v]), bg);
  std::vector<boost::graph_traits<BoostGraph>::vertex_descriptor> mate(static_cast<std::size_t>(n));
  boost::edmonds_maximum_cardinality_matching(bg, &mate[0]);

  std::vector<int> unlabel(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) unlabel[label[v]] = v;
  EdgeList matching;
  const auto none = boost::graph_traits<BoostGraph>::null_vertex();
  for (int v = 0; v < n; ++v) {
    if (mate[v] == none) return std::nullopt;
    if (static_cast<int>(mate[v]) > v) matching.emplace_back(unlabel[v], unlabel[static_cast<int>(mate[v])]);
  }
  normalize(matching);
  return matching;
}

/// Odd degree: a perfect matching plus (r - 1) / 2 Hamilton cycles of the
/// remainder. Remainders below the pipeline's minimum order go straight to
/// the residual completer. Up to 8 matchings are tried.
inline Decomposition decompose_odd(const Graph& host, const PipelineParams& params) {
  const auto r = host.regular_degree();
  const int n = host.order();
  require(r.has_value(), ErrorKind::kPrecondition, "decompose_odd: graph is not regular");
  require(*r % 2 == 1, ErrorKind::kPrecondition, "decompose_odd: degree is even, use decompose_pipeline");
  require(n % 2 == 0, ErrorKind::kPrecondition, "decompose_odd: odd vertex count admits no perfect matching");

  std::string last_failure;
  for (int attempt = 0; attempt < 8; ++attempt) {
    const auto matching = random_perfect_matching(host, derive_seed(params.seed, 0xb000 + attempt));
    if (!matching) fail(ErrorKind::kInfeasible, "decompose_odd: graph has no perfect matching");
    const Graph rest = subtract(host, *matching);
    Decomposition out;
    out.n = n;
    out.matching = *matching;
    try {
      if (*r > 1) {
        if (n < params.min_order) {
          ResidualLimits limits;
          limits.node_budget = params.residual_node_budget;
          limits.seed = derive_seed(params.seed, 0xb100 + attempt);
          limits.deadline = params.deadline;
          out.cycles = complete_residual(rest, limits).cycles;
        } else {
          PipelineParams inner = params;
          inner.c = std::min(params.c, static_cast<double>(*r - 1) / (n - 1));
          inner.seed = derive_seed(params.seed, 0xb200 + attempt);
          out.cycles = run_pipeline(rest, inner).result.cycles;
        }
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kInfeasible && e.kind() != ErrorKind::kBudgetExhausted) throw;
      if (params.deadline.expired()) throw;
      last_failure = e.what();
      continue;
    }
    out.canonicalize();
    if (const Verdict v = verify_decomposition(host, out); !v.ok) {
      throw std::logic_error("decompose_odd: result fails verification: " + v.violation);
    }
    return out;
  }
  fail(ErrorKind::kBudgetExhausted, "decompose_odd: every matching attempt failed; last: " + last_failure);
}

}  // namespace hamdeck
