#include <gtest/gtest.h>

#include <sstream>

#include "hamdeck/edge_list.hpp"
#include "hamdeck/graph.hpp"
#include "hamdeck/predicates.hpp"
#include "support/oracles.hpp"

using namespace hamdeck;

namespace {

std::vector<int> degrees(const Graph& g) {
  std::vector<int> out;
  for (int v = 0; v < g.order(); ++v) out.push_back(g.degree(v));
  return out;
}

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorKind::kInvalidInput;
}

}  // namespace

TEST(BuildGraph, Triangle) {
  const Graph g = build_graph(3, {{0, 1}, {1, 2}, {2, 0}});
  EXPECT_EQ(g.size(), 3u);
  EXPECT_EQ(degrees(g), (std::vector<int>{2, 2, 2}));
  EXPECT_EQ(g.edges(), (EdgeList{Edge(0, 1), Edge(0, 2), Edge(1, 2)}));
}

TEST(BuildGraph, RejectsLoopAndRange) {
  EXPECT_EQ(kind_of([] { build_graph(2, {{0, 0}}); }), ErrorKind::kInvalidInput);
  EXPECT_EQ(kind_of([] { build_graph(2, {{0, 2}}); }), ErrorKind::kInvalidInput);
  EXPECT_EQ(kind_of([] { build_graph(2, {{-1, 1}}); }), ErrorKind::kInvalidInput);
}

TEST(BuildGraph, CompleteFiveIsFourRegular) {
  std::vector<std::pair<int, int>> pairs;
  for (int u = 0; u < 5; ++u) {
    for (int v = u + 1; v < 5; ++v) pairs.emplace_back(v, u);
  }
  const Graph g = build_graph(5, pairs);
  EXPECT_EQ(g.regular_degree(), 4);
  EXPECT_EQ(g, complete_graph(5));
}

TEST(BuildGraph, DeduplicatesAndAgreesWithAdjacency) {
  const Graph g = build_graph(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}, {1, 2}});
  EXPECT_EQ(g.size(), 3u);
  for (int u = 0; u < 4; ++u) {
    for (int v : g.neighbors(u)) {
      EXPECT_TRUE(g.has_edge(u, v));
      EXPECT_TRUE(std::binary_search(g.edges().begin(), g.edges().end(), Edge(u, v)));
    }
  }
}

TEST(EdgeAlgebra, SubtractAndUnite) {
  const Graph k5 = complete_graph(5);
  const Graph rest = subtract(k5, cycle_edges(std::vector<int>{0, 1, 2, 3, 4}));
  EXPECT_EQ(rest.regular_degree(), 2);

  const Graph triangle = cycle_graph(3);
  EXPECT_EQ(kind_of([&] { unite(triangle, EdgeList{Edge(0, 1)}); }), ErrorKind::kPrecondition);

  const Graph c5 = cycle_graph(5);
  EXPECT_EQ(subtract(c5, c5.edges()).size(), 0u);
  EXPECT_EQ(kind_of([&] { subtract(c5, EdgeList{Edge(0, 2)}); }), ErrorKind::kPrecondition);
}

TEST(EdgeAlgebra, SubtractThenUniteIsIdentity) {
  Rng rng = make_rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Graph g = oracle::random_graph(10, 0.5, rng);
    EdgeList part;
    for (const Edge& e : g.edges()) {
      if (coin(rng)) part.push_back(e);
    }
    EXPECT_EQ(unite(subtract(g, part), part), g);
  }
}

TEST(EdgesBetween, Examples) {
  const Graph k5 = complete_graph(5);
  EXPECT_EQ(edges_between(k5, VertexSet(5, {0, 1}), VertexSet(5, {2, 3, 4})), 6);
  // Distinct edges with one end in {0,1,2} and the other in {1,2,3}:
  // 01 02 03 12 13 23.
  EXPECT_EQ(edges_between(k5, VertexSet(5, {0, 1, 2}), VertexSet(5, {1, 2, 3})), 6);
  EXPECT_EQ(oracle::edges_between(k5, {0, 1, 2}, {1, 2, 3}), 6);
  EXPECT_EQ(edges_between(cycle_graph(3), VertexSet(3, {0}), VertexSet(3, {0})), 0);
}

TEST(EdgesBetween, SymmetricAndMatchesOracle) {
  Rng rng = make_rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = uniform_int(rng, 2, 12);
    const Graph g = oracle::random_graph(n, uniform_real(rng), rng);
    std::vector<int> a;
    std::vector<int> b;
    for (int v = 0; v < n; ++v) {
      if (coin(rng)) a.push_back(v);
      if (coin(rng)) b.push_back(v);
    }
    const VertexSet sa(n, a);
    const VertexSet sb(n, b);
    const long long ab = edges_between(g, sa, sb);
    EXPECT_EQ(ab, edges_between(g, sb, sa));
    EXPECT_EQ(ab, oracle::edges_between(g, a, b));
  }
}

TEST(EdgesBetween, DisjointSetsSumNeighbourCounts) {
  Rng rng = make_rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = uniform_int(rng, 2, 12);
    const Graph g = oracle::random_graph(n, 0.5, rng);
    std::vector<int> a;
    std::vector<int> b;
    for (int v = 0; v < n; ++v) {
      const auto side = uniform_below(rng, 3);
      if (side == 0) a.push_back(v);
      if (side == 1) b.push_back(v);
    }
    long long sum = 0;
    for (int v : a) {
      for (int w : b) sum += g.has_edge(v, w) ? 1 : 0;
    }
    EXPECT_EQ(edges_between(g, VertexSet(n, a), VertexSet(n, b)), sum);
  }
}

TEST(RobustNeighborhood, Examples) {
  EXPECT_EQ(robust_neighborhood(cycle_graph(4), VertexSet(4, {0}), 0.25).members(), (std::vector<int>{1, 3}));
  EXPECT_EQ(robust_neighborhood(complete_graph(5), VertexSet(5, {0, 1}), 0.2).size(), 5u);
  EXPECT_EQ(robust_neighborhood(complete_graph(5), VertexSet(5, {0}), 0.5).size(), 0u);
}

TEST(RobustNeighborhood, MonotoneInS) {
  Rng rng = make_rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = uniform_int(rng, 3, 12);
    const Graph g = oracle::random_graph(n, 0.5, rng);
    std::vector<int> s;
    std::vector<int> bigger;
    for (int v = 0; v < n; ++v) {
      const bool in_s = coin(rng);
      if (in_s) s.push_back(v);
      if (in_s || coin(rng)) bigger.push_back(v);
    }
    const double nu = 0.05 + 0.3 * uniform_real(rng);
    const auto small_rn = robust_neighborhood(g, VertexSet(n, s), nu);
    const auto big_rn = robust_neighborhood(g, VertexSet(n, bigger), nu);
    EXPECT_TRUE(small_rn.is_subset_of(big_rn));
  }
}

TEST(RobustExpander, CompleteGraphHolds) {
  const auto v = is_robust_expander(complete_graph(8), 0.1, 0.25, ExactMode{});
  EXPECT_TRUE(v.holds);
  EXPECT_FALSE(v.witness.has_value());
  EXPECT_GT(v.sets_checked, 0u);
}

TEST(RobustExpander, EmptyGraphFails) {
  const auto v = is_robust_expander(Graph(8), 0.1, 0.25, ExactMode{});
  ASSERT_FALSE(v.holds);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_GE(v.witness->size(), 2u);
  EXPECT_LE(v.witness->size(), 6u);
}

TEST(RobustExpander, TwoCliquesFailWithValidWitness) {
  const Graph g = disjoint_union(complete_graph(4), complete_graph(4));
  const auto v = is_robust_expander(g, 0.2, 0.25, ExactMode{});
  ASSERT_FALSE(v.holds);
  ASSERT_TRUE(v.witness.has_value());
  const auto rn = robust_neighborhood(g, *v.witness, 0.2);
  EXPECT_LT(rn.size(), v.witness->size() + 2);  // ceil(0.2 * 8) = 2
  // One side of the union is a violating set.
  EXPECT_LT(robust_neighborhood(g, VertexSet(8, {0, 1, 2, 3}), 0.2).size(), 4u + 2u);
}

TEST(RobustExpander, ExactCapAndSampledMode) {
  EXPECT_EQ(kind_of([] { is_robust_expander(complete_graph(25), 0.1, 0.25, ExactMode{}); }), ErrorKind::kCapExceeded);
  const auto sampled = is_robust_expander(complete_graph(30), 0.1, 0.25, SampledMode{2000, 1});
  EXPECT_TRUE(sampled.holds);
  EXPECT_EQ(sampled.sets_checked, 2000u);
  const auto refuted = is_robust_expander(Graph(30), 0.1, 0.25, SampledMode{2000, 1});
  EXPECT_FALSE(refuted.holds);
  EXPECT_TRUE(refuted.witness.has_value());
}

TEST(RobustExpander, AgreesWithOracle) {
  Rng rng = make_rng(14);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = uniform_int(rng, 4, 10);
    const Graph g = oracle::random_graph(n, 0.3 + 0.6 * uniform_real(rng), rng);
    EXPECT_EQ(is_robust_expander(g, 0.1, 0.25, ExactMode{}).holds, oracle::robust_expander(g, 0.1, 0.25));
  }
}

TEST(RobustExpander, MonotoneUnderEdgeAddition) {
  Rng rng = make_rng(15);
  int pairs = 0;
  int holding = 0;
  while (pairs < 500) {
    const int n = uniform_int(rng, 4, 12);
    const Graph g = oracle::random_graph(n, 0.4 + 0.5 * uniform_real(rng), rng);
    EdgeList extra;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (!g.has_edge(u, v) && coin(rng)) extra.emplace_back(u, v);
      }
    }
    const Graph bigger = unite(g, extra);
    ++pairs;
    if (!is_robust_expander(g, 0.1, 0.25, ExactMode{}).holds) continue;
    ++holding;
    EXPECT_TRUE(is_robust_expander(bigger, 0.1, 0.25, ExactMode{}).holds);
  }
  EXPECT_GT(holding, 50);
}

TEST(AlphaBetaRegular, Examples) {
  EXPECT_TRUE(check_alpha_beta_regular(complete_graph(10), 1.0, 0.3, ExactMode{}).holds);
  const auto empty = check_alpha_beta_regular(Graph(10), 0.5, 0.3, ExactMode{});
  EXPECT_FALSE(empty.holds);
  EXPECT_FALSE(check_alpha_beta_regular(cycle_graph(10), 0.5, 0.2, ExactMode{}).holds);
  // Minimum degree passes at alpha = 0.2, so the failure must come with a pair.
  const auto cycle = check_alpha_beta_regular(cycle_graph(10), 0.2, 0.2, ExactMode{});
  ASSERT_FALSE(cycle.holds);
  ASSERT_TRUE(cycle.s && cycle.t);
  const long long e = edges_between(cycle_graph(10), *cycle.s, *cycle.t);
  const double density = static_cast<double>(e) / (cycle.s->size() * cycle.t->size());
  EXPECT_GT(std::abs(density - 0.2), 0.2);
}

TEST(AlphaBetaRegular, SampledModeOnLargeGraph) {
  EXPECT_TRUE(check_alpha_beta_regular(complete_graph(40), 1.0, 0.3, SampledMode{500, 3}).holds);
  EXPECT_EQ(kind_of([] { check_alpha_beta_regular(complete_graph(30), 1.0, 0.3, ExactMode{}); }),
            ErrorKind::kCapExceeded);
}

TEST(EdgeListFormat, RoundTrip) {
  const Graph g = complete_graph(6);
  std::istringstream in(to_edge_list(g));
  EXPECT_EQ(read_edge_list(in), g);
}

TEST(EdgeListFormat, RejectsMalformedInput) {
  const char* bad[] = {
      "3 1\n1 1\n",          // loop
      "3 2\n0 1\n0 1\n",     // duplicate
      "3 1\n1 0\n",          // u > v
      "3 1\n0 3\n",          // out of range
      "3 2\n0 1\n",          // too few rows
      "3 1\n0 1\n1 2\n",     // trailing row
      "x 1\n0 1\n",          // bad header
  };
  for (const char* text : bad) {
    std::istringstream in(text);
    EXPECT_EQ(kind_of([&] { read_edge_list(in); }), ErrorKind::kInvalidInput) << text;
  }
}
