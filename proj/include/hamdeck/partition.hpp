#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hamdeck/deadline.hpp"
#include "hamdeck/graph.hpp"
#include "hamdeck/predicates.hpp"
#include "hamdeck/random.hpp"
#include "hamdeck/regularize.hpp"

namespace hamdeck {

/// Parameters of the constructive pipeline plus the retry and sampling
/// budgets used at desk scale.
struct PipelineParams {
  double c = 1.0;       // density: r >= c (n - 1)
  double eps = 0.05;    // slack, in (0, 1/10)
  double delta = 0.01;  // expansion margin
  double gamma = 0.01;  // cross-density
  double nu = 0.00025;  // robust-expander parameters
  double tau = 0.2;
  double alpha = 0.15;  // residual degree fraction, 3 eps c
  std::uint64_t seed = 0;

  int partition_attempts = 16;
  int orientation_attempts = 128;
  std::uint64_t density_samples = 10000;
  std::uint64_t expander_trials = 100000;
  std::uint64_t f_density_floor = 1;
  int factor_resamples = 64;
  int step_restarts = 200;
  int min_order = 8;
  std::optional<int> max_steps;               // early stop t' <= t
  std::uint64_t residual_node_budget = 50'000'000;
  Deadline deadline;
};

/// delta = min(eps c / 5, tau / 2), nu = min(delta, eps gamma / 2),
/// alpha = 3 eps c.
inline PipelineParams derive_params(double c, double eps, double gamma, double tau, std::uint64_t seed = 0) {
  require(c > 0.0 && c <= 1.0, ErrorKind::kInvalidInput, "derive_params: need 0 < c <= 1");
  require(eps > 0.0 && eps < 0.1, ErrorKind::kInvalidInput, "derive_params: need 0 < eps < 1/10");
  require(gamma > 0.0, ErrorKind::kInvalidInput, "derive_params: gamma must be positive");
  require(tau > 0.0 && tau < 1.0, ErrorKind::kInvalidInput, "derive_params: need 0 < tau < 1");
  PipelineParams p;
  p.c = c;
  p.eps = eps;
  p.gamma = gamma;
  p.tau = tau;
  p.alpha = 3.0 * eps * c;
  p.delta = std::min(eps * c / 5.0, tau / 2.0);
  p.nu = std::min(p.delta, eps * gamma / 2.0);
  p.seed = seed;
  return p;
}

/// Probability that an edge lands in the reservoir F: 1 / ln n, clamped to
/// 1/2 for n <= 3.
inline double reservoir_probability(int n) {
  if (n <= 3) return 0.5;
  return std::min(0.5, 1.0 / std::log(static_cast<double>(n)));
}

/// Checks that g is r-regular with r even and r >= c (n - 1); returns r.
inline int require_dense_even_regular(const Graph& g, double c, const std::string& who) {
  const auto r = g.regular_degree();
  require(r.has_value(), ErrorKind::kPrecondition, who + ": graph is not regular");
  require(*r % 2 == 0, ErrorKind::kPrecondition, who + ": odd degree " + std::to_string(*r));
  require(*r >= ceil_count(c * (g.order() - 1)), ErrorKind::kPrecondition,
          who + ": degree " + std::to_string(*r) + " is below c (n - 1) = " + std::to_string(c * (g.order() - 1)));
  return *r;
}

struct TriPartition {
  Graph host;  // the partitioned graph
  Graph G;     // regular core, even degree core_degree
  Graph F;     // reservoir
  Graph R;     // residual
  PipelineParams params;
  int core_degree = 0;
  int first_core_degree = 0;    // 2 ceil((c0 - eps0) n / 2), the first degree attempted
  bool meets_degree_bound = false;  // core_degree >= (1 - 2 eps) r
  int split_attempt = 0;
  int orientations_tried = 0;
};

namespace detail {

struct Split {
  Graph f;
  Graph r_star;
  Graph g_star;
  bool admissible = false;
  std::string rejection;
};

inline Split random_split(const Graph& host, const PipelineParams& params, std::uint64_t seed, double c0,
                          double gamma0) {
  const int n = host.order();
  const double p_f = reservoir_probability(n);
  const double p_r = params.eps;
  Rng rng = make_rng(seed, 0x51);
  EdgeList f;
  EdgeList r;
  EdgeList g;
  for (const Edge& e : host.edges()) {
    const double u = uniform_real(rng);
    if (u < p_f) {
      f.push_back(e);
    } else if (u < p_f + p_r) {
      r.push_back(e);
    } else {
      g.push_back(e);
    }
  }
  Split split{Graph(n, std::move(f)), Graph(n, std::move(r)), Graph(n, std::move(g)), true, {}};
  if (const Verdict band = check_degree_band(split.g_star, c0); !band.ok) {
    split.admissible = false;
    split.rejection = band.violation;
  } else if (const Verdict dense = sample_cross_density(split.g_star, c0, gamma0, params.density_samples, seed);
             !dense.ok) {
    split.admissible = false;
    split.rejection = dense.violation;
  }
  return split;
}

}  // namespace detail

/// Random edge split into F (prob. 1/ln n), R* (prob. eps) and G* (the
/// rest), followed by extraction of an even-regular core G from G*; G*
/// minus G joins R* to form R.
///
/// The first core degree tried is 2 ceil((c0 - eps0) n / 2) with
/// c0 = (1 - eps - 1/ln n) r / n and eps0 = eps r / (2n). When no split
/// admits a saturating flow at that degree, the half degree is lowered one
/// step at a time and all splits are retried; the largest feasible degree
/// wins.
inline TriPartition tri_partition(const Graph& host, const PipelineParams& params) {
  const int r = require_dense_even_regular(host, params.c, "tri_partition");
  const int n = host.order();
  require(params.partition_attempts >= 1, ErrorKind::kInvalidInput, "tri_partition: need at least one attempt");

  const double p_f = reservoir_probability(n);
  RegularizeParams reg;
  reg.c0 = (1.0 - params.eps - p_f) * r / n;
  reg.eps0 = params.eps * r / (2.0 * n);
  reg.gamma0 = params.gamma / 2.0;
  require(reg.c0 > 0.0 && reg.eps0 <= reg.c0, ErrorKind::kPrecondition,
          "tri_partition: derived c0 is not above eps0 at this n");

  std::vector<detail::Split> splits;
  splits.reserve(static_cast<std::size_t>(params.partition_attempts));
  std::string last_rejection;
  for (int attempt = 0; attempt < params.partition_attempts; ++attempt) {
    splits.push_back(detail::random_split(host, params, derive_seed(params.seed, 0x5000 + attempt), reg.c0,
                                          reg.gamma0));
    if (!splits.back().admissible) last_rejection = splits.back().rejection;
  }

  const int first_half = target_half_degree(reg, n);
  int orientations = 0;
  for (int half = first_half; half >= 1; --half) {
    for (int attempt = 0; attempt < params.partition_attempts; ++attempt) {
      params.deadline.check("tri_partition");
      const auto& split = splits[attempt];
      if (!split.admissible) continue;
      const std::uint64_t seed = derive_seed(params.seed, 0x6000 + static_cast<std::uint64_t>(attempt) * 4096 + half);
      try {
        const RegularizeOutcome outcome =
            regular_subgraph_with_half_degree(split.g_star, half, params.orientation_attempts, seed);
        orientations += outcome.attempts;
        TriPartition tp;
        tp.host = host;
        tp.G = outcome.subgraph;
        tp.F = split.f;
        tp.R = unite(split.r_star, subtract(split.g_star, tp.G));
        tp.params = params;
        tp.core_degree = 2 * outcome.half_degree;
        tp.first_core_degree = 2 * first_half;
        tp.meets_degree_bound = tp.core_degree >= (1.0 - 2.0 * params.eps) * r - 1e-9;
        tp.split_attempt = attempt;
        tp.orientations_tried = orientations;
        return tp;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kBudgetExhausted) throw;
        orientations += params.orientation_attempts;
      }
    }
  }
  fail(ErrorKind::kBudgetExhausted,
       "tri_partition: no split admitted a regular core" +
           (last_rejection.empty() ? std::string() : " (last rejected split: " + last_rejection + ")"));
}

struct PartitionReport {
  bool exact_ok = true;  // disjoint, covering, G regular with even degree
  std::string exact_detail;

  bool f_density_ok = true;  // every sampled pair reaches the floor
  double f_literal_threshold = 0.0;  // n^{1.6}
  std::uint64_t f_floor = 1;
  long long f_min_observed = -1;
  bool f_literal_met = true;  // the literal n^{1.6} held on every sample
  std::optional<VertexSet> f_witness_a;
  std::optional<VertexSet> f_witness_b;

  bool r_expander_ok = true;
  CheckMode r_mode = ExactMode{};
  std::optional<VertexSet> r_witness;

  [[nodiscard]] bool all_ok() const { return exact_ok && f_density_ok && r_expander_ok; }
};

/// Checks the three properties of a partition: exactness and regularity
/// (exact), F density between large pairs (sampled), and robust expansion
/// of R (exact for n <= 24, sampled above).
inline PartitionReport verify_partition(const TriPartition& tp, std::uint64_t trials, std::uint64_t seed) {
  PartitionReport report;
  const int n = tp.host.order();
  const Graph* parts[] = {&tp.G, &tp.F, &tp.R};
  for (const Graph* part : parts) {
    if (part->order() != n) {
      report.exact_ok = false;
      report.exact_detail = "part has the wrong vertex count";
    }
  }
  if (report.exact_ok) {
    std::size_t total = 0;
    for (const Graph* part : parts) total += part->size();
    for (int i = 0; i < 3 && report.exact_ok; ++i) {
      for (int j = i + 1; j < 3 && report.exact_ok; ++j) {
        const auto shared = common_edges(*parts[i], *parts[j]);
        if (!shared.empty()) {
          report.exact_ok = false;
          report.exact_detail = "parts share edge " + to_string(shared.front());
        }
      }
    }
    if (report.exact_ok) {
      for (const Graph* part : parts) {
        for (const Edge& e : part->edges()) {
          if (!tp.host.has_edge(e)) {
            report.exact_ok = false;
            report.exact_detail = "edge " + to_string(e) + " is not in the host graph";
            break;
          }
        }
      }
    }
    if (report.exact_ok && total != tp.host.size()) {
      report.exact_ok = false;
      report.exact_detail = std::to_string(tp.host.size() - total) + " host edges are not covered";
    }
    if (report.exact_ok) {
      const auto d = tp.G.regular_degree();
      if (!d.has_value()) {
        report.exact_ok = false;
        report.exact_detail = "G is not regular";
      } else if (*d % 2 != 0) {
        report.exact_ok = false;
        report.exact_detail = "G has odd degree " + std::to_string(*d);
      }
    }
  }

  const double delta = tp.params.delta;
  report.f_literal_threshold = std::pow(static_cast<double>(n), 1.6);
  report.f_floor = tp.params.f_density_floor;
  const int min_a = std::max(1, ceil_count(delta * delta * n));
  const int min_b = std::max(1, ceil_count((0.5 - delta) * n));
  Rng rng = make_rng(seed, 0xfd);
  for (std::uint64_t trial = 0; trial < trials && n > 0; ++trial) {
    VertexSet a(n, detail::random_subset(n, uniform_int(rng, std::min(min_a, n), n), rng));
    VertexSet b(n, detail::random_subset(n, uniform_int(rng, std::min(min_b, n), n), rng));
    const long long count = edges_between(tp.F, a, b);
    if (report.f_min_observed < 0 || count < report.f_min_observed) report.f_min_observed = count;
    if (static_cast<double>(count) < report.f_literal_threshold) report.f_literal_met = false;
    if (count < static_cast<long long>(report.f_floor) && report.f_density_ok) {
      report.f_density_ok = false;
      report.f_witness_a = a;
      report.f_witness_b = b;
    }
  }

  if (n <= kExactSubsetCap) {
    report.r_mode = ExactMode{};
  } else {
    report.r_mode = SampledMode{std::min<std::uint64_t>(trials, tp.params.expander_trials), seed};
  }
  const ExpanderVerdict expander = is_robust_expander(tp.R, tp.params.nu, tp.params.tau, report.r_mode);
  report.r_expander_ok = expander.holds;
  report.r_witness = expander.witness;
  return report;
}

}  // namespace hamdeck
