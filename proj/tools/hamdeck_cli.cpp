#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hamdeck/hamdeck.hpp"

namespace {

using hamdeck::Json;

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kFailed = 1, kBudget = 2, kInput = 3 };

struct Common {
  std::uint64_t seed = 0;
  std::string format = "json";
  bool no_meta = false;
};

struct ParamFlags {
  double c = 1.0;
  double eps = 0.05;
  double gamma = 0.01;
  double tau = 0.2;
  std::optional<int> max_steps;
  std::string trace;
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--seed", common.seed, "Random seed")->capture_default_str();
  cmd->add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  cmd->add_flag("--no-meta", common.no_meta, "Omit timestamp and timings from the output");
}

void add_params(CLI::App* cmd, ParamFlags& p) {
  cmd->add_option("--c", p.c, "Density: r >= c (n - 1)")->capture_default_str();
  cmd->add_option("--eps", p.eps, "Slack parameter, in (0, 0.1)")->capture_default_str();
  cmd->add_option("--gamma", p.gamma, "Cross-density parameter")->capture_default_str();
  cmd->add_option("--tau", p.tau, "Expander size parameter")->capture_default_str();
  cmd->add_option("--max-steps", p.max_steps, "Stop cycle extraction after this many steps");
  cmd->add_option("--trace", p.trace, "Write per-step statistics as JSON lines to this file");
}

hamdeck::PipelineParams make_params(const ParamFlags& flags, std::uint64_t seed) {
  hamdeck::PipelineParams p = hamdeck::derive_params(flags.c, flags.eps, flags.gamma, flags.tau, seed);
  p.max_steps = flags.max_steps;
  p.deadline = hamdeck::Deadline::from_env();
  return p;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

void attach_meta(Json& out, const std::string& command, const Common& common) {
  Json meta;
  meta["command"] = command;
  meta["seed"] = common.seed;
  meta["version"] = kVersion;
  if (!common.no_meta) meta["timestamp"] = utc_timestamp();
  out["meta"] = meta;
}

void print_text(const Json& j) {
  if (j.contains("cycles")) {
    for (const auto& c : j["cycles"]) {
      for (std::size_t i = 0; i < c.size(); ++i) std::cout << (i ? " " : "") << c[i].get<int>();
      std::cout << "\n";
    }
    for (const char* key : {"matching", "edges"}) {
      if (!j.contains(key) || j[key].is_null() || !j[key].is_array()) continue;
      std::cout << key << ":";
      for (const auto& e : j[key]) std::cout << " " << e[0].get<int>() << "-" << e[1].get<int>();
      std::cout << "\n";
    }
    return;
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "meta") continue;
    std::cout << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
  }
}

void emit(const Json& j, const Common& common) {
  if (common.format == "text") {
    print_text(j);
  } else {
    std::cout << j.dump(2) << "\n";
  }
}

void write_trace(const std::string& path, const hamdeck::PipelineRun& run, bool timings) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) hamdeck::fail(hamdeck::ErrorKind::kInvalidInput, "cannot open trace file " + path);
  for (const auto& step : run.trace) out << hamdeck::to_json(step, timings).dump() << "\n";
  Json summary;
  summary["summary"] = hamdeck::pipeline_summary(run, timings);
  out << summary.dump() << "\n";
}

int exit_code(hamdeck::ErrorKind kind) {
  switch (kind) {
    case hamdeck::ErrorKind::kInfeasible: return kFailed;
    case hamdeck::ErrorKind::kBudgetExhausted: return kBudget;
    default: return kInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamiltonian decompositions of dense regular graphs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common common;
  ParamFlags params;

  auto* walecki = app.add_subcommand("walecki", "Walecki decomposition of K_n, n odd");
  int walecki_n = 0;
  walecki->add_option("n", walecki_n, "Number of vertices (odd)")->required();
  add_common(walecki, common);

  auto* decompose = app.add_subcommand("decompose", "Hamiltonian decomposition of an even-regular graph");
  std::string graph_path;
  decompose->add_option("graph", graph_path, "Edge-list file")->required();
  add_common(decompose, common);
  add_params(decompose, params);

  auto* decompose_odd = app.add_subcommand("decompose-odd", "Hamilton cycles plus a perfect matching, odd degree");
  decompose_odd->add_option("graph", graph_path, "Edge-list file")->required();
  add_common(decompose_odd, common);
  add_params(decompose_odd, params);

  auto* count = app.add_subcommand("count", "Bound formulas and exact counts");
  bool exact = false;
  count->add_option("graph", graph_path, "Edge-list file")->required();
  count->add_flag("--exact", exact, "Compute exact counts (small graphs only)");
  count->add_option("--eps", params.eps, "Slack parameter of the lower bound")->capture_default_str();
  add_common(count, common);

  auto* verify = app.add_subcommand("verify", "Check a decomposition against a graph");
  std::string decomposition_path;
  verify->add_option("graph", graph_path, "Edge-list file")->required();
  verify->add_option("decomposition", decomposition_path, "Decomposition JSON file")->required();
  add_common(verify, common);

  auto* partition = app.add_subcommand("partition", "Split a graph into core G, reservoir F and residual R");
  std::string prefix;
  std::uint64_t trials = 1000;
  partition->add_option("graph", graph_path, "Edge-list file")->required();
  partition->add_option("--out", prefix, "Write PREFIX.G.edges, PREFIX.F.edges, PREFIX.R.edges and PREFIX.json");
  partition->add_option("--trials", trials, "Samples for the density and expansion checks")->capture_default_str();
  add_common(partition, common);
  add_params(partition, params);

  auto* sample = app.add_subcommand("sample-factor", "Random (<=2)-factor of a graph");
  std::optional<int> max_components;
  int attempts = 64;
  sample->add_option("graph", graph_path, "Edge-list file")->required();
  sample->add_option("--max-components", max_components, "Resample until at most this many components");
  sample->add_option("--attempts", attempts, "Draws allowed with --max-components")->capture_default_str();
  add_common(sample, common);

  auto* expander = app.add_subcommand("check-expander", "Robust (nu, tau)-expansion test");
  double nu = 0.1;
  double tau = 0.25;
  std::optional<std::uint64_t> expander_trials;
  bool force_exact = false;
  expander->add_option("graph", graph_path, "Edge-list file")->required();
  expander->add_option("--nu", nu, "Robust neighbourhood threshold")->capture_default_str();
  expander->add_option("--tau", tau, "Set size range")->capture_default_str();
  auto* exact_flag = expander->add_flag("--exact", force_exact, "Enumerate every subset (n <= 24)");
  expander->add_option("--trials", expander_trials, "Sampled subsets (default: exact when n <= 24, else 100000)")
      ->excludes(exact_flag);
  add_common(expander, common);

  auto* bounds = app.add_subcommand("bounds", "Counting bound formulas for (n, r)");
  int bn = 0;
  int br = 0;
  bounds->add_option("n", bn, "Number of vertices")->required();
  bounds->add_option("r", br, "Degree")->required();
  bounds->add_option("--eps", params.eps, "Slack parameter of the lower bound")->capture_default_str();
  add_common(bounds, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const bool timings = !common.no_meta;
  try {
    Json out;
    int code = kOk;
    if (*walecki) {
      out = hamdeck::to_json(hamdeck::walecki_decomposition(walecki_n));
    } else if (*decompose) {
      const hamdeck::Graph g = hamdeck::read_edge_list_file(graph_path);
      const hamdeck::PipelineRun run = hamdeck::run_pipeline(g, make_params(params, common.seed));
      write_trace(params.trace, run, timings);
      out = hamdeck::to_json(run.result);
      out["pipeline"] = hamdeck::pipeline_summary(run, timings);
    } else if (*decompose_odd) {
      const hamdeck::Graph g = hamdeck::read_edge_list_file(graph_path);
      out = hamdeck::to_json(hamdeck::decompose_odd(g, make_params(params, common.seed)));
    } else if (*count) {
      const hamdeck::Graph g = hamdeck::read_edge_list_file(graph_path);
      out = hamdeck::to_json(hamdeck::count_report(g, params.eps, exact));
    } else if (*verify) {
      const hamdeck::Graph g = hamdeck::read_edge_list_file(graph_path);
      std::ifstream in(decomposition_path);
      if (!in) hamdeck::fail(hamdeck::ErrorKind::kInvalidInput, "cannot open " + decomposition_path);
      Json parsed;
      try {
        parsed = Json::parse(in);
      } catch (const Json::parse_error& e) {
        hamdeck::fail(hamdeck::ErrorKind::kInvalidInput, std::string("decomposition JSON: ") + e.what());
      }
      const hamdeck::Verdict verdict = hamdeck::verify_decomposition(g, hamdeck::decomposition_from_json(parsed));
      out["ok"] = verdict.ok;
      out["violation"] = verdict.ok ? Json(nullptr) : Json(verdict.violation);
      code = verdict.ok ? kOk : kFailed;
    } else if (*partition) {
      const hamdeck::Graph g = hamdeck::read_edge_list_file(graph_path);
      const hamdeck::PipelineParams p = make_params(params, common.seed);
      const hamdeck::TriPartition tp = hamdeck::tri_partition(g, p);
      const hamdeck::PartitionReport report = hamdeck::verify_partition(tp, trials, common.seed);
      out = hamdeck::to_json(tp);
      out["report"] = hamdeck::to_json(report);
      if (!prefix.empty()) {
        const std::pair<const char*, const hamdeck::Graph*> parts[] = {{"G", &tp.G}, {"F", &tp.F}, {"R", &tp.R}};
        for (const auto& [name, part] : parts) {
          std::ofstream file(prefix + "." + name + ".edges");
          if (!file) hamdeck::fail(hamdeck::ErrorKind::kInvalidInput, "cannot write " + prefix + "." + name + ".edges");
          hamdeck::write_edge_list(file, *part);
        }
        std::ofstream file(prefix + ".json");
        if (!file) hamdeck::fail(hamdeck::ErrorKind::kInvalidInput, "cannot write " + prefix + ".json");
        file << out.dump(2) << "\n";
      }
      code = report.exact_ok ? kOk : kFailed;
    } else if (*sample) {
      const hamdeck::Graph g = hamdeck::read_edge_list_file(graph_path);
      if (max_components) {
        const hamdeck::SampledFactor s = hamdeck::sample_le2_factor_capped(g, common.seed, *max_components, attempts);
        out = hamdeck::to_json(s.factor);
        out["draws"] = s.draws;
        out["within_cap"] = s.within_threshold;
      } else {
        out = hamdeck::to_json(hamdeck::sample_le2_factor(g, common.seed));
      }
    } else if (*expander) {
      const hamdeck::Graph g = hamdeck::read_edge_list_file(graph_path);
      hamdeck::CheckMode mode = hamdeck::ExactMode{};
      if (expander_trials) {
        mode = hamdeck::SampledMode{*expander_trials, common.seed};
      } else if (!force_exact && g.order() > hamdeck::kExactSubsetCap) {
        mode = hamdeck::SampledMode{100000, common.seed};
      }
      const hamdeck::ExpanderVerdict verdict = hamdeck::is_robust_expander(g, nu, tau, mode);
      out = hamdeck::to_json(verdict, nu, tau);
      code = verdict.holds ? kOk : kFailed;
    } else if (*bounds) {
      out["n"] = bn;
      out["r"] = br;
      out["eps"] = params.eps;
      out["log_hamilton_upper"] = hamdeck::bregman_log_bound(bn, br);
      if (br % 2 == 0 && br >= 2) {
        const auto upper = hamdeck::decomposition_log_upper(bn, br);
        out["log_upper"] = upper.finite;
        out["log_upper_asymptotic"] = upper.asymptotic;
      } else {
        out["log_upper"] = nullptr;
        out["log_upper_asymptotic"] = nullptr;
      }
      out["log_lower"] = hamdeck::decomposition_log_lower(bn, br, params.eps);
      out["log_exponent"] = hamdeck::decomposition_log_exponent(bn, br);
    }
    attach_meta(out, command, common);
    emit(out, common);
    if (!out.value("ok", true) && out.contains("violation")) std::cerr << out["violation"].get<std::string>() << "\n";
    return code;
  } catch (const hamdeck::Error& e) {
    Json err;
    err["error"] = hamdeck::to_string(e.kind());
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return exit_code(e.kind());
  }
}
