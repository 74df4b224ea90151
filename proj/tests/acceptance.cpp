// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Usage: acceptance PATH_TO_CLI

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hamdeck/hamdeck.hpp"
#include "support/oracles.hpp"
#include "support/run.hpp"

using namespace hamdeck;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string cli_path;

std::string describe(const VertexSet& s) {
  std::string out = "{";
  for (int v : s.members()) out += (out.size() > 1 ? "," : "") + std::to_string(v);
  return out + "}";
}
const std::string kSamples = HAMDECK_SAMPLES_DIR;

void walecki_suite(Outcome& o) {
  const auto start = Clock::now();
  int verified = 0;
  for (int n = 3; n <= 201; n += 2) {
    const Decomposition d = walecki_decomposition(n);
    const bool ok = d.cycles.size() == static_cast<std::size_t>((n - 1) / 2) &&
                    d.edge_count() == static_cast<std::size_t>(n * (n - 1) / 2) &&
                    verify_decomposition(complete_graph(n), d).ok;
    o.check(ok, "n = " + std::to_string(n));
    verified += ok ? 1 : 0;
  }
  const double s = seconds_since(start);
  o.check(s < 10.0, "runtime");
  o.detail << verified << "/100 orders verified in " << s << " s";
}

void oracle_values(Outcome& o) {
  const auto start = Clock::now();
  const BigInt h5 = count_hamilton_cycles_exact(complete_graph(5));
  const BigInt h7 = count_hamilton_cycles_exact(complete_graph(7));
  o.check(h5 == 12, "H-cycles(K5) = " + h5.str());
  o.check(h7 == 360, "H-cycles(K7) = " + h7.str());
  const BigInt by_cover = count_decompositions_exact(complete_graph(5));
  const BigInt by_pairing = count_decompositions_by_pairing(complete_graph(5));
  o.check(by_cover == 6 && by_pairing == 6, "decompositions(K5) = " + by_cover.str() + " / " + by_pairing.str());
  int graphs = 0;
  int consistent = 0;
  for (int n = 3; n <= 8; ++n) {
    for (int r = 2; r < n; r += 2) {
      oracle::regular_graphs(n, r, [&](const Graph& g) {
        ++graphs;
        consistent += count_ordered_decompositions(g) == count_decompositions_exact(g) * factorial(r / 2) ? 1 : 0;
      });
    }
  }
  o.check(graphs == consistent, "ordered/unordered factor");
  const double s = seconds_since(start);
  o.check(s < 60.0, "runtime");
  o.detail << "K5: " << h5 << " cycles, " << by_cover << " decompositions (pairing " << by_pairing << "); K7: " << h7
           << " cycles; ordered = unordered * k! on " << consistent << "/" << graphs << " regular graphs; " << s << " s";
}

void factor_oracle(Outcome& o) {
  const auto start = Clock::now();
  const auto k4 = enumerate_le2_factors(complete_graph(4));
  const auto k5 = enumerate_le2_factors(complete_graph(5));
  o.check(k4.size() == 6, "K4 factors");
  o.check(k5.size() == 22, "K5 factors");
  std::set<std::vector<std::vector<int>>> all;
  for (const auto& f : k4) all.insert(canonical_key(f));
  std::set<std::vector<std::vector<int>>> seen;
  int draws = 0;
  while (draws < 10000 && seen.size() < all.size()) {
    seen.insert(canonical_key(sample_le2_factor(complete_graph(4), static_cast<std::uint64_t>(draws))));
    ++draws;
  }
  o.check(seen == all, "sampler support on K4");
  const double s = seconds_since(start);
  o.check(s < 30.0, "runtime");
  o.detail << "K4: " << k4.size() << ", K5: " << k5.size() << "; sampler covered " << seen.size() << "/" << all.size()
           << " K4 factors in " << draws << " draws; " << s << " s";
}

void bound_sanity(Outcome& o) {
  int graphs = 0;
  int violations = 0;
  for (int n = 3; n <= 8; ++n) {
    for (int r = 1; r < n; ++r) {
      oracle::regular_graphs(n, r, [&](const Graph& g) {
        ++graphs;
        const double count = count_hamilton_cycles_exact(g).convert_to<double>();
        violations += count > std::exp(bregman_log_bound(n, r)) * (1 + 1e-12) ? 1 : 0;
      });
    }
  }
  o.check(violations == 0, "Bregman violations");
  const double upper = decomposition_log_upper(5, 4).finite;
  o.check(std::log(6.0) <= upper, "ln 6 <= upper(5,4)");
  o.detail << graphs << " connected regular graphs (n <= 8), " << violations << " violations; ln 6 = " << std::log(6.0)
           << " <= " << upper;
}

void regularize_suite(Outcome& o) {
  RegularizeParams p;
  p.c0 = 8.0 / 9.0;
  p.eps0 = 2.0 / 9.0;
  int successes = 0;
  double slowest = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    p.seed = seed;
    const auto start = Clock::now();
    try {
      const Graph h = extract_regular_subgraph(complete_graph(9), p);
      const double s = seconds_since(start);
      slowest = std::max(slowest, s);
      bool spanning = h.order() == 9;
      for (const Edge& e : h.edges()) spanning = spanning && complete_graph(9).has_edge(e);
      o.check(h.regular_degree() == 6 && spanning, "seed " + std::to_string(seed) + " output");
      successes += s < 1.0 ? 1 : 0;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kBudgetExhausted) throw;
    }
  }
  o.check(successes >= 95, "success rate");
  o.detail << successes << "/100 seeds gave a 6-regular spanning subgraph within 1 s (slowest " << slowest << " s)";
}

void rotation_suite(Outcome& o) {
  const Graph host = complete_graph(21);
  const TriPartition tp = tri_partition(host, derive_params(1.0, 0.05, 0.01, 0.2, 1));
  const int cap = 2 * component_threshold(21) + 1;
  int verified = 0;
  int max_moves = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const StepResult step = extract_hamilton_step(tp.G, tp.F, tp.params, seed);
    const bool ok = verify_step(tp.G, tp.F, step).ok && step.g_next.regular_degree() == tp.core_degree - 2 &&
                    static_cast<int>(step.history.size()) <= cap;
    max_moves = std::max(max_moves, static_cast<int>(step.history.size()));
    verified += ok ? 1 : 0;
  }
  o.check(verified == 100, "verified steps");
  o.detail << verified << "/100 steps verified on K21 (core degree " << tp.core_degree << ", |F| = " << tp.F.size()
           << "), max moves " << max_moves << " <= " << cap;
}

void pipeline_suite(Outcome& o) {
  const auto start = Clock::now();
  struct Case {
    int n;
    std::size_t cycles;
  };
  for (const Case c : {Case{9, 4}, Case{21, 10}, Case{51, 25}}) {
    const Graph host = complete_graph(c.n);
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Decomposition d = decompose_pipeline(host, derive_params(1.0, 0.05, 0.01, 0.2), seed);
      ok += d.cycles.size() == c.cycles && verify_decomposition(host, d).ok ? 1 : 0;
    }
    o.check(ok == 5, "K" + std::to_string(c.n));
    o.detail << "K" << c.n << ": " << ok << "/5; ";
  }
  const double s = seconds_since(start);
  o.check(s < 120.0, "runtime");
  for (int n : {6, 12}) {
    const Decomposition d = decompose_odd(complete_graph(n), PipelineParams{});
    const bool ok = d.cycles.size() == static_cast<std::size_t>((n - 2) / 2) && d.matching &&
                    verify_decomposition(complete_graph(n), d).ok;
    o.check(ok, "odd K" + std::to_string(n));
    o.detail << "K" << n << " odd: " << (ok ? "ok" : "failed") << "; ";
  }
  o.detail << "even pipelines took " << s << " s";
}

void expander_suite(Outcome& o) {
  const Graph two_k4 = disjoint_union(complete_graph(4), complete_graph(4));
  const auto rejected = is_robust_expander(two_k4, 0.1, 0.25, ExactMode{});
  bool witness_ok = false;
  if (rejected.witness) {
    const auto& s = *rejected.witness;
    const auto rn = robust_neighborhood(two_k4, s, 0.1);
    witness_ok = s.size() >= 2 && s.size() <= 6 && rn.size() < s.size() + 1;  // ceil(0.1 * 8) = 1
  }
  o.check(!rejected.holds && witness_ok, "two-K4 rejection");
  o.check(is_robust_expander(complete_graph(8), 0.1, 0.25, ExactMode{}).holds, "K8 acceptance");
  Rng rng = make_rng(15);
  int holding = 0;
  int monotone = 0;
  for (int pair = 0; pair < 500; ++pair) {
    const int n = uniform_int(rng, 4, 12);
    const Graph g = oracle::random_graph(n, 0.4 + 0.5 * uniform_real(rng), rng);
    EdgeList extra;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (!g.has_edge(u, v) && coin(rng)) extra.emplace_back(u, v);
      }
    }
    if (!is_robust_expander(g, 0.1, 0.25, ExactMode{}).holds) continue;
    ++holding;
    monotone += is_robust_expander(unite(g, extra), 0.1, 0.25, ExactMode{}).holds ? 1 : 0;
  }
  o.check(holding == monotone, "monotonicity");
  o.detail << "two-K4 rejected with witness " << (rejected.witness ? describe(*rejected.witness) : std::string("none"))
           << ", K8 accepted; monotone on " << monotone << "/" << holding << " expanding pairs of 500";
}

void determinism_suite(Outcome& o) {
  const std::string cli = support::quote(cli_path);
  auto sample = [](const std::string& name) { return support::quote(kSamples + "/" + name); };
  const std::string prefix = (support::scratch_dir() / "acceptance-part").string();
  const std::string decomposition = (support::scratch_dir() / "k9.json").string();
  {
    const auto d = support::run(cli + " walecki 9 --no-meta");
    std::ofstream(decomposition) << d.out;
  }
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"walecki", "walecki 11"},
      {"decompose", "decompose " + sample("k21.edges") + " --seed 7 --trace " +
                        support::quote((support::scratch_dir() / "trace.jsonl").string())},
      {"decompose-odd", "decompose-odd " + sample("k12.edges") + " --seed 7"},
      {"count", "count " + sample("k7.edges") + " --exact"},
      {"verify", "verify " + sample("k9.edges") + " " + support::quote(decomposition)},
      {"partition", "partition " + sample("k21.edges") + " --seed 7 --trials 200 --out " + support::quote(prefix)},
      {"sample-factor", "sample-factor " + sample("k21.edges") + " --seed 7"},
      {"check-expander", "check-expander " + sample("petersen.edges") + " --seed 7 --trials 500"},
      {"bounds", "bounds 51 50"},
  };
  int stable = 0;
  for (const auto& [name, args] : commands) {
    std::string outputs[2];
    std::string files[2];
    int codes[2];
    for (int round = 0; round < 2; ++round) {
      const auto r = support::run(cli + " " + args + " --no-meta");
      outputs[round] = r.out;
      codes[round] = r.exit_code;
      if (name == "partition") {
        for (const char* ext : {".G.edges", ".F.edges", ".R.edges", ".json"}) files[round] += support::slurp(prefix + ext);
      }
      if (name == "decompose") files[round] = support::slurp(support::scratch_dir() / "trace.jsonl");
    }
    const bool same = codes[0] == codes[1] && outputs[0] == outputs[1] && files[0] == files[1] && !outputs[0].empty() &&
                      codes[0] != 3;
    o.check(same, name);
    stable += same ? 1 : 0;
  }
  o.detail << stable << "/" << commands.size() << " subcommands byte-identical across two runs";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance PATH_TO_CLI\n";
    return 2;
  }
  cli_path = argv[1];
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"Walecki suite", walecki_suite},
      {"oracle values", oracle_values},
      {"(<=2)-factor oracle", factor_oracle},
      {"bound sanity", bound_sanity},
      {"regularize suite", regularize_suite},
      {"rotation-step suite", rotation_suite},
      {"end-to-end pipeline", pipeline_suite},
      {"expander predicates", expander_suite},
      {"CLI determinism", determinism_suite},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = Clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    failures += o.pass ? 0 : 1;
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " (" << criteria[i].first << ", "
              << seconds_since(start) << " s) " << o.detail.str() << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
