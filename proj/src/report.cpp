#include "tandem/report.hpp"

namespace tandem {

Json path_to_json(const Model& m, const Path& path) {
  Json steps = Json::array();
  for (const auto& t : path) {
    const auto& op = m.operations.at(t.op);
    steps.push_back({{"op", op.name}, {"params", encode_binding(m, op, t.binding)}});
  }
  return steps;
}

Json report_to_json(const Model& m, const ExplorationReport& r, bool with_timing) {
  Json out;
  out["model"] = m.name;
  out["states_visited"] = r.states_visited;
  out["transitions_fired"] = r.transitions_fired;
  out["frontier_exhausted"] = r.frontier_exhausted;
  out["violations"] = Json::array();
  for (const auto& v : r.violations) {
    out["violations"].push_back(
        {{"invariant", v.invariant}, {"state", encode_state(m, v.state)}, {"path", path_to_json(m, v.path)}});
  }
  out["deadlocks"] = Json::array();
  for (const auto& d : r.deadlocks) {
    out["deadlocks"].push_back({{"state", encode_state(m, d.state)}, {"path", path_to_json(m, d.path)}});
  }
  if (with_timing) out["wall_time_ms"] = r.wall_time.count();
  return out;
}

Json report_to_json(const ConformanceReport& r) {
  Json out;
  out["verdict"] = to_string(r.verdict);
  out["first_bad_seq"] = r.first_bad_seq ? Json(*r.first_bad_seq) : Json(nullptr);
  out["frontier_sizes"] = r.frontier_sizes;
  out["diagnosis"] = r.diagnosis;
  out["violated"] = r.violated;
  out["warnings"] = r.warnings;
  return out;
}

Json summary_to_json(const CorpusSummary& s, bool with_timing) {
  Json out;
  out["traces"] = s.entries.size();
  out["conforms"] = s.conforms;
  out["diverges"] = s.diverges;
  out["invariant_violations"] = s.violations;
  out["unreadable"] = s.unreadable;
  out["events"] = s.events;
  out["files"] = Json::array();
  for (const auto& e : s.entries) {
    Json f;
    f["file"] = e.file;
    if (e.report) {
      f["report"] = report_to_json(*e.report);
    } else {
      f["error"] = e.error;
    }
    out["files"].push_back(std::move(f));
  }
  if (with_timing) {
    out["wall_time_ms"] = s.wall_time.count();
    const double secs = static_cast<double>(s.wall_time.count()) / 1000.0;
    out["events_per_second"] = secs > 0 ? static_cast<double>(s.events) / secs : 0.0;
  }
  return out;
}

}  // namespace tandem
