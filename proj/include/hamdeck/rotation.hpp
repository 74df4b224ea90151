#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hamdeck/factor.hpp"
#include "hamdeck/graph.hpp"
#include "hamdeck/partition.hpp"
#include "hamdeck/random.hpp"

namespace hamdeck {

enum class MoveKind { kMerge, kExtend, kClose };

inline const char* to_string(MoveKind kind) {
  switch (kind) {
    case MoveKind::kMerge: return "merge";
    case MoveKind::kExtend: return "extend";
    case MoveKind::kClose: return "close";
  }
  return "unknown";
}

/// One engine move: the edges it added to and removed from the structure.
/// Rotations performed on the way are folded into the same move.
struct Move {
  MoveKind kind = MoveKind::kMerge;
  EdgeList added;
  EdgeList removed;
  int rotations = 0;
};

using Structure = std::variant<TwoFactor, PartialHC>;

inline EdgeList edges_of(const Structure& s) {
  return std::visit([](const auto& x) { return edges_of(x); }, s);
}

inline std::size_t component_count(const Structure& s) {
  return std::visit([](const auto& x) { return component_count(x); }, s);
}

inline std::size_t edge_count(const Structure& s) {
  return std::visit([](const auto& x) { return edge_count(x); }, s);
}

/// Bookkeeping of the rotation engine for one Hamilton-cycle extraction.
struct RotationState {
  Structure current;
  std::vector<std::vector<int>> segments;  // I_1..I_s of the active path
  std::vector<int> j1;                     // segment holding the front pivots
  std::vector<int> j2;                     // segment holding the back pivots
  std::vector<int> endpoints_a;            // back endpoints after the first rotation round
  std::vector<int> endpoints_b;            // front endpoints after the second round
  std::vector<int> endpoints_s;            // back endpoints after the third round
  std::vector<Move> history;
};

/// Applies the moves in order to a starting edge set.
inline EdgeList replay(EdgeList edges, const std::vector<Move>& history) {
  std::set<Edge> current(edges.begin(), edges.end());
  for (const Move& m : history) {
    for (const Edge& e : m.removed) current.erase(e);
    for (const Edge& e : m.added) current.insert(e);
  }
  return {current.begin(), current.end()};
}

/// The two edge sources of the engine: the regular core G and the reservoir
/// F. At most `reservoir_cap` reservoir edges may sit in the structure at
/// any time (negative means unlimited).
struct EdgePool {
  const Graph* core = nullptr;
  const Graph* reservoir = nullptr;
  int reservoir_cap = -1;

  [[nodiscard]] bool in_core(const Edge& e) const { return core->has_edge(e); }
  [[nodiscard]] bool in_reservoir(const Edge& e) const { return reservoir != nullptr && reservoir->has_edge(e); }
  [[nodiscard]] bool available(const Edge& e) const { return in_core(e) || in_reservoir(e); }

  [[nodiscard]] int reservoir_count(const EdgeList& edges) const {
    int count = 0;
    for (const Edge& e : edges) count += in_reservoir(e) ? 1 : 0;
    return count;
  }

  /// Whether the structure may hold `after` reservoir edges.
  [[nodiscard]] bool within_cap(int after) const { return reservoir_cap < 0 || after <= reservoir_cap; }
};

namespace detail {

inline int reservoir_delta(const EdgePool& pool, const EdgeList& added, const EdgeList& removed) {
  return pool.reservoir_count(added) - pool.reservoir_count(removed);
}

/// Walks cycle `c` starting at `start` and moving away from `skip`, which
/// must be a cycle neighbour of `start`; the edge {start, skip} is dropped.
inline std::vector<int> open_cycle(const std::vector<int>& c, int start, int skip) {
  const std::size_t k = c.size();
  const auto at = static_cast<std::size_t>(std::find(c.begin(), c.end(), start) - c.begin());
  const bool forward = c[(at + k - 1) % k] == skip;  // skip sits behind us
  std::vector<int> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(forward ? c[(at + i) % k] : c[(at + k - i) % k]);
  return out;
}

/// Cycle neighbours of v in c.
inline std::pair<int, int> cycle_neighbors(const std::vector<int>& c, int v) {
  const std::size_t k = c.size();
  const auto at = static_cast<std::size_t>(std::find(c.begin(), c.end(), v) - c.begin());
  return {c[(at + k - 1) % k], c[(at + 1) % k]};
}

/// Opens component `c` at vertex z into a path starting at z. Returns the
/// path and the removed edge, if any.
inline std::pair<std::vector<int>, std::optional<Edge>> open_at(const Component& c, int z, Rng& rng) {
  if (c.kind == ComponentKind::kIsolatedEdge) {
    const int other = c.vertices[0] == z ? c.vertices[1] : c.vertices[0];
    return {{z, other}, std::nullopt};
  }
  const auto [prev, next] = cycle_neighbors(c.vertices, z);
  const int skip = coin(rng) ? prev : next;
  return {open_cycle(c.vertices, z, skip), Edge(z, skip)};
}

inline std::vector<int> component_index(int n, const std::vector<Component>& comps) {
  std::vector<int> where(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    for (int v : comps[i].vertices) where[v] = static_cast<int>(i);
  }
  return where;
}

template <typename T>
T pick(const std::vector<T>& items, Rng& rng) {
  return items[uniform_below(rng, items.size())];
}

}  // namespace detail

/// Joins the smallest component C of a (<=2)-factor to another component
/// through a connecting edge e, dropping the structure edge at each end of
/// e, into a partial HC with one component fewer.
///
/// The edge is taken from G when |C| < d and from F otherwise, falling back
/// to the other source when the preferred one has no connecting edge.
/// Isolated edges are kept whole (no edge is dropped on their side).
inline PartialHC merge_step(const TwoFactor& h, const EdgePool& pool, int core_degree, Rng& rng,
                            Move* move = nullptr) {
  require(h.components.size() >= 2, ErrorKind::kPrecondition, "merge_step: structure has a single component");
  const int n = h.n;
  std::size_t smallest = 0;
  for (std::size_t i = 1; i < h.components.size(); ++i) {
    if (h.components[i].vertices.size() < h.components[smallest].vertices.size()) smallest = i;
  }
  const Component& c = h.components[smallest];
  const auto where = detail::component_index(n, h.components);
  const int reservoir_now = pool.reservoir_count(edges_of(h));

  auto connecting = [&](const Graph* source) {
    std::vector<Edge> found;
    if (source == nullptr) return found;
    for (int u : c.vertices) {
      for (int w : source->neighbors(u)) {
        if (where[w] != static_cast<int>(smallest)) found.emplace_back(u, w);
      }
    }
    return found;
  };
  const bool prefer_core = static_cast<int>(c.vertices.size()) < core_degree;
  const Graph* order[2] = {prefer_core ? pool.core : pool.reservoir, prefer_core ? pool.reservoir : pool.core};

  for (const Graph* source : order) {
    auto candidates = connecting(source);
    shuffle(candidates, rng);
    for (const Edge& e : candidates) {
      const int u = where[e.u] == static_cast<int>(smallest) ? e.u : e.v;
      const int w = e.other(u);
      const Component& d = h.components[where[w]];
      auto [c_path, c_removed] = detail::open_at(c, u, rng);
      auto [d_path, d_removed] = detail::open_at(d, w, rng);
      EdgeList added{e};
      EdgeList removed;
      if (c_removed) removed.push_back(*c_removed);
      if (d_removed) removed.push_back(*d_removed);
      if (!pool.within_cap(reservoir_now + detail::reservoir_delta(pool, added, removed))) continue;

      PartialHC out;
      out.n = n;
      std::reverse(c_path.begin(), c_path.end());  // now ends at u
      out.path = std::move(c_path);
      out.path.insert(out.path.end(), d_path.begin(), d_path.end());
      for (std::size_t i = 0; i < h.components.size(); ++i) {
        if (static_cast<int>(i) != static_cast<int>(smallest) && static_cast<int>(i) != where[w]) {
          out.others.push_back(h.components[i]);
        }
      }
      if (move != nullptr) *move = Move{MoveKind::kMerge, std::move(added), std::move(removed), 0};
      return out;
    }
  }
  fail(ErrorKind::kInfeasible, "merge_step: no connecting edge leaves the smallest component");
}

/// Convenience overload with an unlimited reservoir.
inline PartialHC merge_step(const TwoFactor& h, const Graph& g, const Graph& f, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0x3e);
  const int d = g.order() > 0 ? g.max_degree() : 0;
  return merge_step(h, EdgePool{&g, &f, -1}, d, rng);
}

struct RotationOptions {
  double delta = 0.01;                 // segment count is ceil(2 / delta), clamped
  std::size_t max_candidates = 20000;  // rotated paths examined per call
  int fallback_depth = 3;              // rotations in the unrestricted fallback search
};

namespace detail {

struct Candidate {
  std::vector<int> seq;
  EdgeList added;
  EdgeList removed;
  int rotations = 0;
};

/// seq[k] is adjacent to the back: returns seq[0..k], back, ..., seq[k+1].
inline Candidate rotate_back(const Candidate& p, std::size_t k) {
  Candidate out = p;
  const std::size_t m = p.seq.size() - 1;
  std::reverse(out.seq.begin() + static_cast<std::ptrdiff_t>(k) + 1, out.seq.end());
  out.added.emplace_back(p.seq[k], p.seq[m]);
  out.removed.emplace_back(p.seq[k], p.seq[k + 1]);
  ++out.rotations;
  return out;
}

/// seq[k] is adjacent to the front: returns seq[k-1], ..., seq[0], seq[k..].
inline Candidate rotate_front(const Candidate& p, std::size_t k) {
  Candidate out = p;
  std::reverse(out.seq.begin(), out.seq.begin() + static_cast<std::ptrdiff_t>(k));
  out.added.emplace_back(p.seq[0], p.seq[k]);
  out.removed.emplace_back(p.seq[k - 1], p.seq[k]);
  ++out.rotations;
  return out;
}

/// Tries to finish from a rotated path: absorb a component through an
/// endpoint, or close the path into a cycle.
class Finisher {
 public:
  Finisher(const PartialHC& h, const EdgePool& pool, Rng& rng, RotationState& state)
      : h_(h), pool_(pool), rng_(rng), state_(state), where_(component_index(h.n, h.others)) {
    reservoir_now_ = pool.reservoir_count(edges_of(h));
  }

  bool operator()(const Candidate& p) {
    ++examined_;
    return try_extend(p) || try_close(p);
  }

  [[nodiscard]] std::size_t examined() const { return examined_; }

 private:
  bool fits(const EdgeList& added, const EdgeList& removed) const {
    return pool_.within_cap(reservoir_now_ + reservoir_delta(pool_, added, removed));
  }

  bool try_extend(const Candidate& p) {
    if (h_.others.empty()) return false;
    const Graph* sources[2] = {pool_.core, pool_.reservoir};
    for (const Graph* source : sources) {
      if (source == nullptr) continue;
      std::vector<std::pair<int, int>> options;  // (endpoint side, z)
      for (int side = 0; side < 2; ++side) {
        const int x = side == 0 ? p.seq.back() : p.seq.front();
        for (int z : source->neighbors(x)) {
          if (where_[z] >= 0) options.emplace_back(side, z);
        }
      }
      shuffle(options, rng_);
      for (const auto& [side, z] : options) {
        const int x = side == 0 ? p.seq.back() : p.seq.front();
        const Component& d = h_.others[where_[z]];
        auto [d_path, d_removed] = open_at(d, z, rng_);
        EdgeList added = p.added;
        EdgeList removed = p.removed;
        added.emplace_back(x, z);
        if (d_removed) removed.push_back(*d_removed);
        if (!fits(added, removed)) continue;

        PartialHC out;
        out.n = h_.n;
        if (side == 0) {
          out.path = p.seq;
          out.path.insert(out.path.end(), d_path.begin(), d_path.end());
        } else {
          out.path.assign(d_path.rbegin(), d_path.rend());
          out.path.insert(out.path.end(), p.seq.begin(), p.seq.end());
        }
        for (std::size_t i = 0; i < h_.others.size(); ++i) {
          if (static_cast<int>(i) != where_[z]) out.others.push_back(h_.others[i]);
        }
        state_.history.push_back(Move{MoveKind::kExtend, std::move(added), std::move(removed), p.rotations});
        state_.current = std::move(out);
        return true;
      }
    }
    return false;
  }

  bool try_close(const Candidate& p) {
    if (p.seq.size() < 3) return false;
    const Edge closing(p.seq.front(), p.seq.back());
    // Closing edges come from F when the cap allows, else from G.
    const bool via_reservoir = pool_.in_reservoir(closing);
    if (!via_reservoir && !pool_.in_core(closing)) return false;
    EdgeList added = p.added;
    added.push_back(closing);
    if (!fits(added, p.removed)) return false;

    TwoFactor out;
    out.n = h_.n;
    out.components = h_.others;
    out.components.push_back({ComponentKind::kCycle, p.seq});
    state_.history.push_back(Move{MoveKind::kClose, std::move(added), p.removed, p.rotations});
    state_.current = std::move(out);
    return true;
  }

  const PartialHC& h_;
  const EdgePool& pool_;
  Rng& rng_;
  RotationState& state_;
  std::vector<int> where_;
  int reservoir_now_ = 0;
  std::size_t examined_ = 0;
};

}  // namespace detail

/// One rotation-extension move on a partial HC held in `state.current`.
///
/// In order: absorb a component through a path endpoint; close the path
/// directly; then three rounds of rotations with G-edge pivots (back end
/// with pivots in J2, front end with pivots in J1, back end with pivots
/// outside J1 and J2), trying to absorb or close after every rotation.
/// Closing prefers an F edge. If the structured rounds fail, an
/// unrestricted rotation search of bounded depth runs before giving up.
///
/// On success `state.current` holds either a partial HC with one component
/// fewer, or a (<=2)-factor with the same component count and one more
/// edge; the move is appended to `state.history`.
inline MoveKind rotate_or_close(RotationState& state, const EdgePool& pool, const RotationOptions& options, Rng& rng) {
  require(std::holds_alternative<PartialHC>(state.current), ErrorKind::kPrecondition,
          "rotate_or_close: current structure is not a partial HC");
  const PartialHC h = std::get<PartialHC>(state.current);
  detail::Finisher finish(h, pool, rng, state);
  const detail::Candidate base{h.path, {}, {}, 0};
  if (finish(base)) return state.history.back().kind;

  const auto& seq = h.path;
  const std::size_t t = seq.size();
  const Graph& core = *pool.core;
  state.segments.clear();
  state.j1.clear();
  state.j2.clear();
  state.endpoints_a.clear();
  state.endpoints_b.clear();
  state.endpoints_s.clear();

  if (t >= 4) {
    const auto wanted = static_cast<std::size_t>(std::ceil(2.0 / std::max(options.delta, 1e-9)));
    const std::size_t s = std::max<std::size_t>(2, std::min(wanted, t / 3));
    std::vector<int> segment_of(t);
    for (std::size_t i = 0; i < s; ++i) {
      std::vector<int> chunk;
      for (std::size_t k = i * t / s; k < (i + 1) * t / s; ++k) {
        chunk.push_back(seq[k]);
        segment_of[k] = static_cast<int>(i);
      }
      state.segments.push_back(std::move(chunk));
    }
    auto interior = [&](std::size_t k) {
      const auto i = static_cast<std::size_t>(segment_of[k]);
      return k > i * t / s && k + 1 < (i + 1) * t / s;
    };
    std::vector<std::size_t> front_pivots;  // k >= 2 with seq[0] ~ seq[k]
    std::vector<std::size_t> back_pivots;   // k <= t-3 with seq[k] ~ seq[t-1]
    for (std::size_t k = 2; k < t; ++k) {
      if (core.has_edge(seq[0], seq[k]) && interior(k)) front_pivots.push_back(k);
    }
    for (std::size_t k = 0; k + 3 <= t; ++k) {
      if (core.has_edge(seq[k], seq[t - 1]) && interior(k)) back_pivots.push_back(k);
    }
    std::vector<int> front_count(s, 0);
    std::vector<int> back_count(s, 0);
    for (auto k : front_pivots) ++front_count[segment_of[k]];
    for (auto k : back_pivots) ++back_count[segment_of[k]];
    const auto p = static_cast<std::size_t>(std::max_element(front_count.begin(), front_count.end()) - front_count.begin());
    const auto q = static_cast<std::size_t>(std::max_element(back_count.begin(), back_count.end()) - back_count.begin());

    // Index ranges [lo, hi) of J1 and J2 on the original path.
    std::pair<std::size_t, std::size_t> j1{p * t / s, (p + 1) * t / s};
    std::pair<std::size_t, std::size_t> j2{q * t / s, (q + 1) * t / s};
    if (p == q) {
      const std::size_t mid = (j1.first + j1.second) / 2;
      j1 = {j1.first, mid};
      j2 = {mid, j1.second == mid ? mid : (p + 1) * t / s};
      auto count_in = [](const std::vector<std::size_t>& ks, std::pair<std::size_t, std::size_t> r) {
        return std::count_if(ks.begin(), ks.end(), [&](std::size_t k) { return k > r.first && k + 1 < r.second; });
      };
      if (count_in(front_pivots, j1) + count_in(back_pivots, j2) < count_in(front_pivots, j2) + count_in(back_pivots, j1)) {
        std::swap(j1, j2);
      }
    }
    auto strictly_inside = [](std::size_t k, std::pair<std::size_t, std::size_t> r) {
      return k > r.first && k + 1 < r.second;
    };
    std::vector<char> in_j(static_cast<std::size_t>(h.n), 0);
    for (std::size_t k = j1.first; k < j1.second; ++k) {
      state.j1.push_back(seq[k]);
      in_j[seq[k]] = 1;
    }
    for (std::size_t k = j2.first; k < j2.second; ++k) {
      state.j2.push_back(seq[k]);
      in_j[seq[k]] = 1;
    }

    std::vector<int> j1_pivots;  // vertices
    std::vector<std::size_t> j2_pivots;  // indices on the original path
    for (auto k : front_pivots) {
      if (strictly_inside(k, j1)) j1_pivots.push_back(seq[k]);
    }
    for (auto k : back_pivots) {
      if (strictly_inside(k, j2)) j2_pivots.push_back(k);
    }
    shuffle(j1_pivots, rng);
    shuffle(j2_pivots, rng);

    // Round 1: back end, pivots in J2, front v1 fixed.
    std::vector<detail::Candidate> round_a;
    for (auto k : j2_pivots) {
      auto pa = detail::rotate_back(base, k);
      state.endpoints_a.push_back(pa.seq.back());
      if (finish(pa)) return state.history.back().kind;
      round_a.push_back(std::move(pa));
    }
    // Round 2: front end, pivots in J1, back a fixed.
    std::vector<detail::Candidate> round_b;
    std::vector<int> position(static_cast<std::size_t>(h.n), -1);
    for (const auto& pa : round_a) {
      for (std::size_t k = 0; k < pa.seq.size(); ++k) position[pa.seq[k]] = static_cast<int>(k);
      for (int v : j1_pivots) {
        const auto k = static_cast<std::size_t>(position[v]);
        if (k < 2) continue;
        auto pb = detail::rotate_front(pa, k);
        if (std::find(state.endpoints_b.begin(), state.endpoints_b.end(), pb.seq.front()) == state.endpoints_b.end()) {
          state.endpoints_b.push_back(pb.seq.front());
        }
        if (finish(pb)) return state.history.back().kind;
        round_b.push_back(std::move(pb));
        if (finish.examined() >= options.max_candidates) break;
      }
      if (finish.examined() >= options.max_candidates) break;
    }
    // Round 3: back end again, G-neighbours of a outside J1 and J2.
    for (const auto& pb : round_b) {
      if (finish.examined() >= options.max_candidates) break;
      for (std::size_t k = 0; k < pb.seq.size(); ++k) position[pb.seq[k]] = static_cast<int>(k);
      const int a = pb.seq.back();
      std::vector<int> pivots;
      for (int v : core.neighbors(a)) {
        if (position[v] >= 0 && !in_j[v] && static_cast<std::size_t>(position[v]) + 3 <= pb.seq.size()) {
          pivots.push_back(v);
        }
      }
      shuffle(pivots, rng);
      for (int v : pivots) {
        auto pc = detail::rotate_back(pb, static_cast<std::size_t>(position[v]));
        if (std::find(state.endpoints_s.begin(), state.endpoints_s.end(), pc.seq.back()) == state.endpoints_s.end()) {
          state.endpoints_s.push_back(pc.seq.back());
        }
        if (finish(pc)) return state.history.back().kind;
        if (finish.examined() >= options.max_candidates) break;
      }
    }
  }

  // Unrestricted rotations at either end, breadth first over endpoint pairs.
  std::deque<detail::Candidate> queue{base};
  std::set<std::pair<int, int>> seen{{seq.front(), seq.back()}};
  const int reservoir_now = pool.reservoir_count(edges_of(h));
  while (!queue.empty() && finish.examined() < 2 * options.max_candidates) {
    detail::Candidate current = std::move(queue.front());
    queue.pop_front();
    if (current.rotations >= options.fallback_depth) continue;
    const std::size_t m = current.seq.size();
    std::vector<int> position(static_cast<std::size_t>(h.n), -1);
    for (std::size_t k = 0; k < m; ++k) position[current.seq[k]] = static_cast<int>(k);
    const Graph* sources[2] = {pool.core, pool.reservoir};
    for (const Graph* source : sources) {
      if (source == nullptr) continue;
      for (int end = 0; end < 2; ++end) {
        const int x = end == 0 ? current.seq.back() : current.seq.front();
        std::vector<int> pivots(source->neighbors(x).begin(), source->neighbors(x).end());
        shuffle(pivots, rng);
        for (int v : pivots) {
          if (position[v] < 0) continue;
          const auto k = static_cast<std::size_t>(position[v]);
          detail::Candidate next;
          if (end == 0) {
            if (k + 3 > m) continue;
            next = detail::rotate_back(current, k);
          } else {
            if (k < 2) continue;
            next = detail::rotate_front(current, k);
          }
          if (!pool.within_cap(reservoir_now + detail::reservoir_delta(pool, next.added, next.removed))) continue;
          if (!seen.insert({next.seq.front(), next.seq.back()}).second) continue;
          if (finish(next)) return state.history.back().kind;
          queue.push_back(std::move(next));
        }
      }
    }
  }
  fail(ErrorKind::kInfeasible, "rotate_or_close: rotations exhausted without extension or closing edge");
}

/// Vertices x1, x2, y1, y2 with x x1, y y1, x2 y2 in G and x1 x2, y1 y2 in F.
struct Gadget {
  int x1 = -1;
  int x2 = -1;
  int y1 = -1;
  int y2 = -1;
};

/// |S| cap of the substitution gadget: n^{0.6}.
inline double gadget_exclusion_cap(int n) { return std::pow(static_cast<double>(n), 0.6); }

/// Minimum core degree for the gadget: 2 delta^2 n + n^{0.6}.
inline double gadget_min_degree(int n, double delta) {
  return 2.0 * delta * delta * n + gadget_exclusion_cap(n);
}

/// Finds vertices outside S (all distinct from x, y and each other) with
/// x x1, y y1, x2 y2 in G and x1 x2, y1 y2 in F, none of the five edges
/// forbidden. The search is exhaustive over x1, x2, y2, y1.
inline Gadget substitution_gadget(const Graph& g, const Graph& f, int x, int y, const VertexSet& s, double delta,
                                  const std::function<bool(const Edge&)>& forbidden = {}, Rng* rng = nullptr) {
  const int n = g.order();
  require(x != y, ErrorKind::kInvalidInput, "substitution_gadget: x and y must differ");
  require(x >= 0 && y >= 0 && x < n && y < n, ErrorKind::kInvalidInput, "substitution_gadget: vertex out of range");
  require(static_cast<double>(s.size()) <= gadget_exclusion_cap(n) + 1e-9, ErrorKind::kPrecondition,
          "substitution_gadget: |S| = " + std::to_string(s.size()) + " exceeds n^0.6");
  const auto d = g.regular_degree();
  require(d.has_value() && *d >= gadget_min_degree(n, delta) - 1e-9, ErrorKind::kPrecondition,
          "substitution_gadget: G must be regular with degree at least 2 delta^2 n + n^0.6");

  auto in_s = VertexSet(n, s.members()).indicator();
  auto blocked = [&](const Edge& e) { return forbidden && forbidden(e); };
  std::vector<int> first(g.neighbors(x).begin(), g.neighbors(x).end());
  if (rng != nullptr) shuffle(first, *rng);
  std::size_t a_x = 0;
  for (int x1 : first) {
    if (in_s[x1] || x1 == y || blocked(Edge(x, x1))) continue;
    ++a_x;
    for (int x2 : f.neighbors(x1)) {
      if (in_s[x2] || x2 == x || x2 == y || blocked(Edge(x1, x2))) continue;
      for (int y2 : g.neighbors(x2)) {
        if (in_s[y2] || y2 == x || y2 == y || y2 == x1 || blocked(Edge(x2, y2))) continue;
        for (int y1 : f.neighbors(y2)) {
          if (in_s[y1] || y1 == x || y1 == y || y1 == x1 || y1 == x2) continue;
          if (!g.has_edge(y, y1) || blocked(Edge(y1, y2)) || blocked(Edge(y, y1))) continue;
          return Gadget{x1, x2, y1, y2};
        }
      }
    }
  }
  fail(ErrorKind::kInfeasible, "substitution_gadget: no gadget for edge " + to_string(Edge(x, y)) + " (" +
                                   std::to_string(a_x) + " usable G-neighbours of x)");
}

struct StepResult {
  Cycle hamilton;        // canonical form
  EdgeList e_g;          // removed from G beyond the cycle
  EdgeList e_f;          // moved from F into the core
  EdgeList cycle_in_f;   // the cycle's edges that came from F
  Graph g_next;          // (G + E_F) - (H + E_G), (d-2)-regular
  Graph f_next;          // F - (H + E_F)
  TwoFactor initial_factor;
  std::vector<Move> history;
  int restarts = 0;
  int factor_draws = 0;
};

/// Exact accounting: G + F is the disjoint union of G', F', H and E_G, G'
/// is (d-2)-regular, E_F within F, E_G within G, both disjoint from H.
inline Verdict verify_step(const Graph& g, const Graph& f, const StepResult& step) {
  const int n = g.order();
  const auto d = g.regular_degree();
  if (!d) return Verdict::failure("input core is not regular");
  if (step.g_next.regular_degree() != *d - 2) return Verdict::failure("G' is not (d-2)-regular");
  const EdgeList h = cycle_edges(step.hamilton);
  if (static_cast<int>(step.hamilton.size()) != n) return Verdict::failure("cycle is not spanning");
  std::set<int> vertices(step.hamilton.begin(), step.hamilton.end());
  if (static_cast<int>(vertices.size()) != n) return Verdict::failure("cycle repeats a vertex");
  for (const Edge& e : step.e_f) {
    if (!f.has_edge(e)) return Verdict::failure("E_F edge " + to_string(e) + " not in F");
  }
  for (const Edge& e : step.e_g) {
    if (!g.has_edge(e)) return Verdict::failure("E_G edge " + to_string(e) + " not in G");
  }
  std::vector<Edge> parts;
  auto add_all = [&](const EdgeList& es) { parts.insert(parts.end(), es.begin(), es.end()); };
  add_all(step.g_next.edges());
  add_all(step.f_next.edges());
  add_all(h);
  add_all(step.e_g);
  std::sort(parts.begin(), parts.end());
  if (std::adjacent_find(parts.begin(), parts.end()) != parts.end()) {
    return Verdict::failure("G', F', H, E_G are not pairwise disjoint");
  }
  EdgeList whole = g.edges();
  whole.insert(whole.end(), f.edges().begin(), f.edges().end());
  std::sort(whole.begin(), whole.end());
  if (whole != parts) return Verdict::failure("G + F differs from G' + F' + H + E_G");
  const std::set<Edge> h_set(h.begin(), h.end());
  for (const Edge& e : step.e_f) {
    if (h_set.count(e)) return Verdict::failure("E_F meets H");
  }
  for (const Edge& e : step.e_g) {
    if (h_set.count(e)) return Verdict::failure("E_G meets H");
  }
  return {};
}

/// Largest number of F edges a cycle may carry so that the gadget exclusion
/// set (2 per cycle F-edge, plus 4 per processed edge) stays within n^{0.6}.
inline int reservoir_edge_cap(const Graph& g, double delta) {
  const int n = g.order();
  const auto d = g.regular_degree();
  if (!d || *d < gadget_min_degree(n, delta) - 1e-9) return 0;
  const double cap = gadget_exclusion_cap(n);
  int k = 0;
  while (6.0 * (k + 1) - 4.0 <= cap + 1e-9) ++k;
  return k;
}

/// One Hamilton cycle H of G + F together with E_G, E_F keeping the core
/// regular: samples a (<=2)-factor of G, alternates merge_step and
/// rotate_or_close until a Hamilton cycle remains (at most 2 s* + 1 moves),
/// then applies a substitution gadget to every F edge of H.
///
/// Every dead end discards the attempt and starts over from a fresh factor.
inline StepResult extract_hamilton_step(const Graph& g, const Graph& f, const PipelineParams& params,
                                        std::uint64_t seed) {
  const int n = g.order();
  const auto d = g.regular_degree();
  require(d.has_value(), ErrorKind::kPrecondition, "extract_hamilton_step: G is not regular");
  require(*d % 2 == 0 && *d >= 4, ErrorKind::kPrecondition,
          "extract_hamilton_step: G must have even degree at least 4, got " + std::to_string(*d));
  require(f.order() == n, ErrorKind::kInvalidInput, "extract_hamilton_step: G and F have different orders");
  require(common_edges(g, f).empty(), ErrorKind::kPrecondition, "extract_hamilton_step: G and F share edges");

  const int s_star = component_threshold(n);
  const int move_cap = 2 * s_star + 1;
  const EdgePool pool{&g, &f, reservoir_edge_cap(g, params.delta)};
  RotationOptions options;
  options.delta = params.delta;
  std::string last_failure = "no attempt made";

  for (int attempt = 0; attempt < std::max(1, params.step_restarts); ++attempt) {
    params.deadline.check("extract_hamilton_step");
    Rng rng = make_rng(seed, 0x700000 + static_cast<std::uint64_t>(attempt));
    const SampledFactor sampled =
        sample_le2_factor_capped(g, derive_seed(seed, 0x800000 + static_cast<std::uint64_t>(attempt)), s_star,
                                 params.factor_resamples);
    RotationState state;
    state.current = sampled.factor;
    bool ok = true;
    try {
      while (true) {
        if (const auto* tf = std::get_if<TwoFactor>(&state.current);
            tf != nullptr && tf->components.size() == 1) {
          break;
        }
        if (static_cast<int>(state.history.size()) >= move_cap) {
          ok = false;
          last_failure = "move cap 2s*+1 = " + std::to_string(move_cap) + " reached";
          break;
        }
        if (const auto* tf = std::get_if<TwoFactor>(&state.current)) {
          Move move;
          PartialHC next = merge_step(*tf, pool, *d, rng, &move);
          state.history.push_back(std::move(move));
          state.current = std::move(next);
        } else {
          rotate_or_close(state, pool, options, rng);
        }
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kInfeasible) throw;
      ok = false;
      last_failure = e.what();
    }
    if (!ok) continue;

    const Cycle hamilton = std::get<TwoFactor>(state.current).components.front().vertices;
    const EdgeList h_edges = cycle_edges(hamilton);
    const std::set<Edge> h_set(h_edges.begin(), h_edges.end());
    EdgeList in_f;
    for (const Edge& e : h_edges) {
      if (f.has_edge(e)) in_f.push_back(e);
    }
    std::sort(in_f.begin(), in_f.end());

    // Gadgets for the F edges of H.
    std::vector<int> excluded;
    for (const Edge& e : in_f) {
      excluded.push_back(e.u);
      excluded.push_back(e.v);
    }
    std::sort(excluded.begin(), excluded.end());
    excluded.erase(std::unique(excluded.begin(), excluded.end()), excluded.end());
    EdgeList e_g;
    EdgeList e_f;
    std::set<Edge> used;
    auto forbidden = [&](const Edge& e) { return h_set.count(e) > 0 || used.count(e) > 0; };
    try {
      for (const Edge& e : in_f) {
        if (static_cast<double>(excluded.size()) > gadget_exclusion_cap(n) + 1e-9) {
          fail(ErrorKind::kInfeasible, "gadget exclusion set exceeds n^0.6");
        }
        const Gadget gadget = substitution_gadget(g, f, e.u, e.v, VertexSet(n, excluded), params.delta, forbidden, &rng);
        const Edge new_g[3] = {Edge(e.u, gadget.x1), Edge(e.v, gadget.y1), Edge(gadget.x2, gadget.y2)};
        const Edge new_f[2] = {Edge(gadget.x1, gadget.x2), Edge(gadget.y1, gadget.y2)};
        for (const Edge& x : new_g) {
          e_g.push_back(x);
          used.insert(x);
        }
        for (const Edge& x : new_f) {
          e_f.push_back(x);
          used.insert(x);
        }
        for (int v : {gadget.x1, gadget.x2, gadget.y1, gadget.y2}) excluded.push_back(v);
        std::sort(excluded.begin(), excluded.end());
      }
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::kInfeasible) throw;
      last_failure = err.what();
      continue;
    }

    StepResult result;
    result.hamilton = canonical_cycle(hamilton);
    std::sort(e_g.begin(), e_g.end());
    std::sort(e_f.begin(), e_f.end());
    EdgeList h_core;
    for (const Edge& e : h_edges) {
      if (g.has_edge(e)) h_core.push_back(e);
    }
    EdgeList drop = h_core;
    drop.insert(drop.end(), e_g.begin(), e_g.end());
    result.g_next = unite(subtract(g, drop), e_f);
    EdgeList f_drop = in_f;
    f_drop.insert(f_drop.end(), e_f.begin(), e_f.end());
    result.f_next = subtract(f, f_drop);
    result.e_g = std::move(e_g);
    result.e_f = std::move(e_f);
    result.cycle_in_f = std::move(in_f);
    result.initial_factor = sampled.factor;
    result.history = std::move(state.history);
    result.restarts = attempt;
    result.factor_draws = sampled.draws;
    if (const Verdict check = verify_step(g, f, result); !check.ok) {
      throw std::logic_error("extract_hamilton_step: accounting check failed: " + check.violation);
    }
    return result;
  }
  fail(ErrorKind::kBudgetExhausted, "extract_hamilton_step: restart budget of " +
                                        std::to_string(params.step_restarts) + " exhausted; last failure: " +
                                        last_failure);
}

}  // namespace hamdeck
