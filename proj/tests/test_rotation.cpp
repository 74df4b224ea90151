#include <gtest/gtest.h>

#include <iostream>
#include <set>

#include "hamdeck/partition.hpp"
#include "hamdeck/rotation.hpp"
#include "support/oracles.hpp"

using namespace hamdeck;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorKind::kInvalidInput;
}

EdgeList sorted(EdgeList e) {
  std::sort(e.begin(), e.end());
  return e;
}

Component cycle_of(std::vector<int> v) { return {ComponentKind::kCycle, std::move(v)}; }

std::function<bool(const Edge&)> within(const Graph& g, const Graph& f) {
  return [&g, &f](const Edge& e) { return g.has_edge(e) || f.has_edge(e); };
}

const TriPartition& k21_partition() {
  static const TriPartition tp = tri_partition(complete_graph(21), derive_params(1.0, 0.05, 0.01, 0.2, 1));
  return tp;
}

}  // namespace

TEST(MergeStep, TwoTrianglesJoinedByOneEdge) {
  const Graph g = build_graph(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}, {2, 3}});
  const TwoFactor h{6, {cycle_of({0, 1, 2}), cycle_of({3, 4, 5})}};
  const PartialHC p = merge_step(h, g, Graph(6), 1);
  EXPECT_EQ(p.path.size(), 6u);
  EXPECT_TRUE(p.others.empty());
  EXPECT_EQ(edge_count(p), 5u);
  EXPECT_EQ(component_count(p), 1u);
  EXPECT_TRUE(validate(p, within(g, Graph(6))).ok);
}

TEST(MergeStep, Errors) {
  const TwoFactor single{5, {cycle_of({0, 1, 2, 3, 4})}};
  EXPECT_EQ(kind_of([&] { merge_step(single, complete_graph(5), Graph(5), 0); }), ErrorKind::kPrecondition);
  const Graph apart = disjoint_union(cycle_graph(3), cycle_graph(3));
  const TwoFactor two{6, {cycle_of({0, 1, 2}), cycle_of({3, 4, 5})}};
  EXPECT_EQ(kind_of([&] { merge_step(two, apart, Graph(6), 0); }), ErrorKind::kInfeasible);
}

TEST(MergeStep, UsesReservoirWhenCoreHasNoEdge) {
  const Graph g = disjoint_union(cycle_graph(3), cycle_graph(3));
  const Graph f = build_graph(6, {{1, 4}});
  const TwoFactor h{6, {cycle_of({0, 1, 2}), cycle_of({3, 4, 5})}};
  const PartialHC p = merge_step(h, g, f, 0);
  const EdgeList e = edges_of(p);
  EXPECT_TRUE(std::binary_search(e.begin(), e.end(), Edge(1, 4)));
}

TEST(MergeStep, InvariantsOnRandomFactors) {
  Rng rng = make_rng(41);
  int merges = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = uniform_int(rng, 6, 30);
    const Graph g = oracle::random_graph(n, 0.5, rng);
    const Graph f = subtract(complete_graph(n), g);
    TwoFactor h;
    try {
      h = sample_le2_factor(g, trial);
    } catch (const Error&) {
      continue;
    }
    if (h.components.size() < 2) continue;
    bool touches_edge = false;
    for (const auto& c : h.components) touches_edge |= c.kind == ComponentKind::kIsolatedEdge;
    Rng step_rng = make_rng(trial);
    Move move;
    const PartialHC p = merge_step(h, EdgePool{&g, &f, -1}, g.max_degree(), step_rng, &move);
    ++merges;
    EXPECT_EQ(component_count(p), h.components.size() - 1);
    const Verdict v = validate(p, within(g, f));
    ASSERT_TRUE(v.ok) << v.violation;
    if (!touches_edge) EXPECT_EQ(edge_count(p), edge_count(h) - 1);
    // One edge joins the parts; each opened cycle loses one edge.
    EXPECT_EQ(move.added.size(), 1u);
    EXPECT_LE(move.removed.size(), 2u);
    EXPECT_EQ(edge_count(p) + move.removed.size(), edge_count(h) + 1);
    EXPECT_EQ(replay(edges_of(h), {move}), sorted(edges_of(p)));
  }
  EXPECT_GT(merges, 100);
}

TEST(RotateOrClose, ClosesSpanningPathInCompleteGraph) {
  const Graph k7 = complete_graph(7);
  const Graph none(7);
  RotationState state;
  state.current = PartialHC{7, {0, 1, 2, 3, 4, 5, 6}, {}};
  Rng rng = make_rng(0);
  EXPECT_EQ(rotate_or_close(state, EdgePool{&k7, &none, -1}, RotationOptions{}, rng), MoveKind::kClose);
  const auto* t = std::get_if<TwoFactor>(&state.current);
  ASSERT_NE(t, nullptr);
  ASSERT_EQ(t->components.size(), 1u);
  EXPECT_EQ(t->components[0].vertices.size(), 7u);
  EXPECT_EQ(edge_count(state.current), 7u);
}

TEST(RotateOrClose, RotationClosesFiveCycle) {
  // Path 0-1-2-3-4 plus chords (1,4) and (0,2) only.
  const Graph g = build_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {1, 4}, {0, 2}});
  const Graph none(5);
  RotationState state;
  state.current = PartialHC{5, {0, 1, 2, 3, 4}, {}};
  Rng rng = make_rng(3);
  EXPECT_EQ(rotate_or_close(state, EdgePool{&g, &none, -1}, RotationOptions{}, rng), MoveKind::kClose);
  const auto& t = std::get<TwoFactor>(state.current);
  ASSERT_EQ(t.components.size(), 1u);
  EXPECT_EQ(canonical_cycle(t.components[0].vertices), (Cycle{0, 1, 4, 3, 2}));
  for (const Edge& e : edges_of(t)) EXPECT_TRUE(g.has_edge(e));
  EXPECT_EQ(replay(path_edges(std::vector<int>{0, 1, 2, 3, 4}), state.history), sorted(edges_of(t)));
}

TEST(RotateOrClose, ExtendsThroughNeighbouringCycle) {
  const Graph g = build_graph(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}, {5, 3}, {2, 3}});
  const Graph none(6);
  RotationState state;
  state.current = PartialHC{6, {0, 1, 2}, {cycle_of({3, 4, 5})}};
  Rng rng = make_rng(0);
  EXPECT_EQ(rotate_or_close(state, EdgePool{&g, &none, -1}, RotationOptions{}, rng), MoveKind::kExtend);
  const auto& p = std::get<PartialHC>(state.current);
  EXPECT_EQ(p.path.size(), 6u);
  EXPECT_TRUE(p.others.empty());
  EXPECT_TRUE(validate(p, within(g, none)).ok);
}

TEST(RotateOrClose, DeadEndIsInfeasible) {
  const Graph g = path_graph(5);
  const Graph none(5);
  RotationState state;
  state.current = PartialHC{5, {0, 1, 2, 3, 4}, {}};
  Rng rng = make_rng(0);
  EXPECT_EQ(kind_of([&] { rotate_or_close(state, EdgePool{&g, &none, -1}, RotationOptions{}, rng); }),
            ErrorKind::kInfeasible);
  state.current = TwoFactor{5, {cycle_of({0, 1, 2, 3, 4})}};
  EXPECT_EQ(kind_of([&] { rotate_or_close(state, EdgePool{&g, &none, -1}, RotationOptions{}, rng); }),
            ErrorKind::kPrecondition);
}

TEST(RotateOrClose, MoveInvariantsOnRandomPaths) {
  Rng rng = make_rng(42);
  int closes = 0;
  int extends = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = uniform_int(rng, 8, 30);
    const Graph g = oracle::random_graph(n, 0.5, rng);
    const Graph none(n);
    TwoFactor h;
    try {
      h = sample_le2_factor(g, trial);
    } catch (const Error&) {
      continue;
    }
    if (h.components.size() < 2) continue;
    RotationState state;
    Rng step_rng = make_rng(trial, 1);
    Move first;
    state.current = merge_step(h, EdgePool{&g, &none, -1}, g.max_degree(), step_rng, &first);
    state.history.push_back(first);
    const std::size_t comps = component_count(state.current);
    const std::size_t edges = edge_count(state.current);
    MoveKind kind;
    try {
      kind = rotate_or_close(state, EdgePool{&g, &none, -1}, RotationOptions{}, step_rng);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kInfeasible);
      continue;
    }
    for (const Edge& e : edges_of(state.current)) ASSERT_TRUE(g.has_edge(e));
    EXPECT_EQ(replay(edges_of(h), state.history), sorted(edges_of(state.current)));
    if (kind == MoveKind::kClose) {
      ++closes;
      ASSERT_TRUE(std::holds_alternative<TwoFactor>(state.current));
      EXPECT_EQ(component_count(state.current), comps);
      EXPECT_EQ(edge_count(state.current), edges + 1);
      EXPECT_TRUE(validate(std::get<TwoFactor>(state.current), g).ok);
    } else {
      ++extends;
      ASSERT_TRUE(std::holds_alternative<PartialHC>(state.current));
      EXPECT_EQ(component_count(state.current), comps - 1);
      EXPECT_TRUE(validate(std::get<PartialHC>(state.current), within(g, none)).ok);
    }
  }
  EXPECT_GT(closes + extends, 100);
}

TEST(SubstitutionGadget, CompleteGraphs) {
  const Graph k20 = complete_graph(20);
  const Gadget gd = substitution_gadget(k20, k20, 0, 1, VertexSet(20, {}), 0.01);
  const std::set<int> distinct{0, 1, gd.x1, gd.x2, gd.y1, gd.y2};
  EXPECT_EQ(distinct.size(), 6u);
  EXPECT_TRUE(k20.has_edge(0, gd.x1));
  EXPECT_TRUE(k20.has_edge(1, gd.y1));

  const VertexSet s(20, {2, 3, 4, 5, 6, 7});
  const Gadget avoid = substitution_gadget(k20, k20, 0, 1, s, 0.01);
  for (int v : {avoid.x1, avoid.x2, avoid.y1, avoid.y2}) EXPECT_FALSE(s.contains(v));
}

TEST(SubstitutionGadget, Errors) {
  const Graph k20 = complete_graph(20);
  EXPECT_EQ(kind_of([&] { substitution_gadget(k20, k20, 3, 3, VertexSet(20, {}), 0.01); }), ErrorKind::kInvalidInput);
  std::vector<int> all_neighbours(k20.neighbors(0).begin(), k20.neighbors(0).end());
  EXPECT_EQ(kind_of([&] { substitution_gadget(k20, k20, 0, 1, VertexSet(20, all_neighbours), 0.01); }),
            ErrorKind::kPrecondition);
  EXPECT_EQ(kind_of([&] { substitution_gadget(cycle_graph(20), k20, 0, 1, VertexSet(20, {}), 0.01); }),
            ErrorKind::kPrecondition);
  EXPECT_EQ(kind_of([&] { substitution_gadget(k20, Graph(20), 0, 1, VertexSet(20, {}), 0.01); }),
            ErrorKind::kInfeasible);
}

TEST(SubstitutionGadget, RandomReservoirs) {
  const TriPartition& tp = k21_partition();
  Rng rng = make_rng(43);
  int found = 0;
  for (const Edge& e : tp.F.edges()) {
    try {
      const Gadget gd = substitution_gadget(tp.G, tp.F, e.u, e.v, VertexSet(21, {}), tp.params.delta, {}, &rng);
      ++found;
      EXPECT_TRUE(tp.G.has_edge(e.u, gd.x1));
      EXPECT_TRUE(tp.G.has_edge(e.v, gd.y1));
      EXPECT_TRUE(tp.G.has_edge(gd.x2, gd.y2));
      EXPECT_TRUE(tp.F.has_edge(gd.x1, gd.x2));
      EXPECT_TRUE(tp.F.has_edge(gd.y1, gd.y2));
    } catch (const Error& err) {
      EXPECT_EQ(err.kind(), ErrorKind::kInfeasible);
    }
  }
  EXPECT_GT(found, 0);
}

TEST(ExtractHamiltonStep, CompleteNineWithoutReservoir) {
  const Graph k9 = complete_graph(9);
  const StepResult step = extract_hamilton_step(k9, Graph(9), PipelineParams{}, 5);
  EXPECT_TRUE(verify_step(k9, Graph(9), step).ok);
  EXPECT_EQ(step.hamilton.size(), 9u);
  EXPECT_TRUE(step.e_g.empty());
  EXPECT_TRUE(step.e_f.empty());
  EXPECT_EQ(step.g_next.regular_degree(), 6);
  EXPECT_EQ(unite(step.g_next, cycle_edges(step.hamilton)), k9);
}

TEST(ExtractHamiltonStep, Preconditions) {
  EXPECT_EQ(kind_of([] { extract_hamilton_step(cycle_graph(9), Graph(9), PipelineParams{}, 0); }),
            ErrorKind::kPrecondition);
  const Graph isolated = disjoint_union(complete_graph(5), Graph(1));
  EXPECT_EQ(kind_of([&] { extract_hamilton_step(isolated, Graph(6), PipelineParams{}, 0); }),
            ErrorKind::kPrecondition);
  const Graph k9 = complete_graph(9);
  EXPECT_EQ(kind_of([&] { extract_hamilton_step(k9, build_graph(9, {{0, 1}}), PipelineParams{}, 0); }),
            ErrorKind::kPrecondition);
}

TEST(ExtractHamiltonStep, AccountingOnPartitionedHost) {
  const TriPartition& tp = k21_partition();
  ASSERT_GE(tp.core_degree, 4);
  const int s_star = component_threshold(21);
  std::size_t reservoir_edges = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const StepResult step = extract_hamilton_step(tp.G, tp.F, tp.params, seed);
    const Verdict v = verify_step(tp.G, tp.F, step);
    ASSERT_TRUE(v.ok) << v.violation;
    EXPECT_EQ(step.g_next.regular_degree(), tp.core_degree - 2);
    EXPECT_LE(static_cast<int>(step.history.size()), 2 * s_star + 1);
    EXPECT_EQ(replay(edges_of(step.initial_factor), step.history), sorted(cycle_edges(step.hamilton)));
    EXPECT_TRUE(validate(step.initial_factor, tp.G).ok);
    EXPECT_EQ(step.e_g.size(), 3 * step.cycle_in_f.size());
    EXPECT_EQ(step.e_f.size(), 2 * step.cycle_in_f.size());
    reservoir_edges += step.cycle_in_f.size();
  }
  std::cout << "core degree " << tp.core_degree << ", reservoir edges used " << reservoir_edges << "\n";
}

TEST(ExtractHamiltonStep, RepeatedStepsLowerDegreeByTwo) {
  const TriPartition& tp = k21_partition();
  Graph g = tp.G;
  Graph f = tp.F;
  std::set<Edge> used;
  int steps = 0;
  for (int i = 0; g.regular_degree().value_or(0) >= 4; ++i) {
    const StepResult step = extract_hamilton_step(g, f, tp.params, 100 + i);
    ASSERT_TRUE(verify_step(g, f, step).ok);
    for (const Edge& e : cycle_edges(step.hamilton)) EXPECT_TRUE(used.insert(e).second);
    EXPECT_EQ(step.g_next.regular_degree(), *g.regular_degree() - 2);
    g = step.g_next;
    f = step.f_next;
    ++steps;
  }
  EXPECT_EQ(steps, (tp.core_degree - 2) / 2);
}

TEST(VerifyStep, DetectsTampering) {
  const Graph k9 = complete_graph(9);
  StepResult step = extract_hamilton_step(k9, Graph(9), PipelineParams{}, 2);
  StepResult bad = step;
  bad.g_next = complete_graph(9);
  EXPECT_FALSE(verify_step(k9, Graph(9), bad).ok);
  bad = step;
  bad.e_g.push_back(Edge(0, 1));
  EXPECT_FALSE(verify_step(k9, Graph(9), bad).ok);
  bad = step;
  bad.hamilton.pop_back();
  EXPECT_FALSE(verify_step(k9, Graph(9), bad).ok);
}
