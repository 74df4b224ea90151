#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "hamdeck/counting.hpp"
#include "hamdeck/decompose.hpp"
#include "hamdeck/factor.hpp"
#include "hamdeck/partition.hpp"
#include "hamdeck/predicates.hpp"
#include "hamdeck/walecki.hpp"

namespace hamdeck {

using Json = nlohmann::ordered_json;

inline Json edges_json(const EdgeList& edges) {
  Json out = Json::array();
  for (const Edge& e : edges) out.push_back({e.u, e.v});
  return out;
}

inline Json to_json(const Decomposition& d) {
  Json out;
  out["n"] = d.n;
  out["cycles"] = d.cycles;
  out["matching"] = d.matching ? edges_json(*d.matching) : Json(nullptr);
  return out;
}

/// Parses the Decomposition schema. Structural problems (wrong types,
/// missing fields) are input errors; graph-level validity is left to
/// verify_decomposition.
inline Decomposition decomposition_from_json(const Json& j) {
  auto bad = [](const std::string& why) { fail(ErrorKind::kInvalidInput, "decomposition JSON: " + why); };
  if (!j.is_object()) bad("expected an object");
  if (!j.contains("n") || !j["n"].is_number_integer()) bad("missing integer field n");
  if (!j.contains("cycles") || !j["cycles"].is_array()) bad("missing array field cycles");
  Decomposition d;
  d.n = j["n"].get<int>();
  for (const auto& c : j["cycles"]) {
    if (!c.is_array()) bad("each cycle must be an array of vertices");
    Cycle cycle;
    for (const auto& v : c) {
      if (!v.is_number_integer()) bad("vertices must be integers");
      cycle.push_back(v.get<int>());
    }
    d.cycles.push_back(std::move(cycle));
  }
  if (j.contains("matching") && !j["matching"].is_null()) {
    if (!j["matching"].is_array()) bad("matching must be an array of pairs");
    EdgeList m;
    for (const auto& e : j["matching"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
        bad("matching entries must be integer pairs");
      }
      const int a = e[0].get<int>();
      const int b = e[1].get<int>();
      if (a == b) bad("matching contains a loop");
      m.emplace_back(a, b);
    }
    d.matching = std::move(m);
  }
  return d;
}

inline const char* to_string(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::kCycle: return "cycle";
    case ComponentKind::kIsolatedEdge: return "edge";
    case ComponentKind::kPath: return "path";
  }
  return "unknown";
}

inline Json to_json(const Component& c) {
  Json out;
  out["kind"] = to_string(c.kind);
  out["vertices"] = c.vertices;
  return out;
}

inline Json to_json(const TwoFactor& f) {
  const ComponentProfile p = component_profile(f);
  Json out;
  out["n"] = f.n;
  out["cycles"] = Json::array();
  out["edges"] = Json::array();
  for (const auto& c : f.components) {
    if (c.kind == ComponentKind::kIsolatedEdge) {
      out["edges"].push_back({c.vertices[0], c.vertices[1]});
    } else {
      out["cycles"].push_back(c.vertices);
    }
  }
  out["profile"] = {{"components", p.components}, {"cycles", p.cycles}, {"isolated_edges", p.isolated_edges}};
  return out;
}

inline Json optional_number(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

inline Json to_json(const CountReport& r) {
  Json out;
  out["exact_count"] = r.exact_count ? Json(r.exact_count->str()) : Json(nullptr);
  out["hamilton_cycles"] = r.hamilton_cycles ? Json(r.hamilton_cycles->str()) : Json(nullptr);
  out["log_lower"] = optional_number(r.log_lower);
  out["log_upper"] = optional_number(r.log_upper);
  out["log_upper_asymptotic"] = optional_number(r.log_upper_asymptotic);
  out["log_hamilton_upper"] = optional_number(r.log_hamilton_upper);
  out["formula_inputs"] = {{"n", r.n}, {"r", r.r}, {"eps", r.eps}};
  out["methods"] = r.methods;
  return out;
}

inline Json vertex_set_json(const std::optional<VertexSet>& s) {
  return s ? Json(s->members()) : Json(nullptr);
}

inline Json to_json(const ExpanderVerdict& v, double nu, double tau) {
  Json out;
  out["holds"] = v.holds;
  out["mode"] = describe(v.mode);
  out["nu"] = nu;
  out["tau"] = tau;
  out["sets_checked"] = v.sets_checked;
  out["witness"] = vertex_set_json(v.witness);
  return out;
}

inline Json to_json(const PartitionReport& r) {
  Json out;
  out["ok"] = r.all_ok();
  out["exact"] = {{"ok", r.exact_ok}, {"detail", r.exact_detail}};
  out["reservoir_density"] = {{"ok", r.f_density_ok},
                              {"floor", r.f_floor},
                              {"min_observed", r.f_min_observed},
                              {"literal_threshold", r.f_literal_threshold},
                              {"literal_met", r.f_literal_met},
                              {"witness_a", vertex_set_json(r.f_witness_a)},
                              {"witness_b", vertex_set_json(r.f_witness_b)}};
  out["residual_expander"] = {{"ok", r.r_expander_ok}, {"mode", describe(r.r_mode)}, {"witness", vertex_set_json(r.r_witness)}};
  return out;
}

inline Json to_json(const TriPartition& tp) {
  Json out;
  out["n"] = tp.host.order();
  out["edges"] = {{"G", tp.G.size()}, {"F", tp.F.size()}, {"R", tp.R.size()}};
  out["core_degree"] = tp.core_degree;
  out["first_degree_tried"] = tp.first_core_degree;
  out["meets_degree_bound"] = tp.meets_degree_bound;
  out["split_attempt"] = tp.split_attempt;
  out["orientations_tried"] = tp.orientations_tried;
  return out;
}

/// One trace line per extraction step. Timings only when `timings` is set.
inline Json to_json(const StepTrace& t, bool timings) {
  Json out;
  out["step"] = t.step;
  out["core_degree"] = t.core_degree;
  out["restarts"] = t.restarts;
  out["moves"] = t.moves;
  out["factor_draws"] = t.factor_draws;
  out["cycle_reservoir_edges"] = t.cycle_reservoir_edges;
  out["gadget_core_edges"] = t.gadget_core_edges;
  if (timings) out["millis"] = t.millis;
  return out;
}

inline Json pipeline_summary(const PipelineRun& run, bool timings) {
  Json out;
  out["degree"] = run.degree;
  out["core_degree"] = run.core_degree;
  out["core_meets_bound"] = run.core_meets_bound;
  out["steps"] = run.steps_planned;
  out["residual_degree"] = run.residual.regular_degree().value_or(-1);
  out["residual_nodes"] = run.residual_stats.nodes;
  out["residual_cycles_drawn"] = run.residual_stats.cycles_drawn;
  out["residual_backtracks"] = run.residual_stats.backtracks;
  if (timings) {
    out["partition_millis"] = run.partition_millis;
    out["residual_millis"] = run.residual_millis;
  }
  return out;
}

}  // namespace hamdeck
