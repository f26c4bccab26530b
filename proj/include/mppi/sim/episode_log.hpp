#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "mppi/core/types.hpp"

namespace mppi {

enum class Outcome { success, collision, deadlock, timeout };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::success: return "success";
    case Outcome::collision: return "collision";
    case Outcome::deadlock: return "deadlock";
    case Outcome::timeout: return "timeout";
  }
  return "unknown";
}

// One control tick: the state observed at its start, the command applied
// through it, and the planner diagnostics that produced the command.
// Positions carry per-agent planar coordinates for path-length metrics
// (empty for the pendulum).
struct StepRecord {
  int step = 0;
  Eigen::VectorXd state;             // concatenated agent states
  Eigen::VectorXd command;           // concatenated executed inputs
  std::vector<StepDiagnostics> diag; // one per planning agent; empty for baselines
  std::vector<Eigen::Vector2d> positions;
  double stage_cost = 0.0;           // plant-side running cost at `state`
};

struct Event {
  int step = 0;
  std::string type;  // collision | rule_violation | goal_reached | deadlock | obstacle_injected
  int agent = -1;    // -1 = episode-wide
};

struct EpisodeLog {
  std::string scenario;
  std::string variant;
  std::uint64_t seed = 0;
  int run_index = 0;
  double dt = 0.0;
  int agent_count = 1;

  std::vector<StepRecord> steps;
  std::vector<Event> events;
  Eigen::VectorXd final_state;
  double final_stage_cost = 0.0;
  Outcome outcome = Outcome::timeout;

  void add_event(int step, const std::string& type, int agent = -1) {
    events.push_back({step, type, agent});
  }

  bool has_event(const std::string& type) const {
    for (const auto& e : events)
      if (e.type == type) return true;
    return false;
  }

  int count_events(const std::string& type) const {
    int n = 0;
    for (const auto& e : events)
      if (e.type == type) ++n;
    return n;
  }

  // First step at which `type` fired for `agent`, -1 if never.
  int event_step(const std::string& type, int agent) const {
    for (const auto& e : events)
      if (e.type == type && e.agent == agent) return e.step;
    return -1;
  }
};

namespace detail {

inline nlohmann::json to_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

inline nlohmann::json to_json(const StepDiagnostics& d) {
  return {{"iteration", d.iteration},
          {"lambda", d.lambda},
          {"eta", d.eta},
          {"min_cost", d.min_cost},
          {"command", to_json(d.command)},
          {"ancillary_weight", to_json(d.ancillary_weight)},
          {"ancillary_cost", to_json(d.ancillary_cost)},
          {"best_gaussian_cost", d.best_gaussian_cost},
          {"best_sample", d.best_sample}};
}

}  // namespace detail

// Line-delimited records: one header object, one object per step, one
// object per event, one trailer object.
inline void write_jsonl(const EpisodeLog& log, std::ostream& out) {
  nlohmann::json header = {{"record", "header"},
                           {"scenario", log.scenario},
                           {"variant", log.variant},
                           {"seed", log.seed},
                           {"run", log.run_index},
                           {"dt", log.dt},
                           {"agents", log.agent_count}};
  out << header.dump() << "\n";
  for (const auto& s : log.steps) {
    nlohmann::json rec = {{"record", "step"},
                          {"step", s.step},
                          {"t", s.step * log.dt},
                          {"state", detail::to_json(s.state)},
                          {"command", detail::to_json(s.command)},
                          {"stage_cost", s.stage_cost}};
    if (!s.diag.empty()) {
      nlohmann::json diags = nlohmann::json::array();
      for (const auto& d : s.diag) diags.push_back(detail::to_json(d));
      rec["diag"] = diags;
    }
    out << rec.dump() << "\n";
  }
  for (const auto& e : log.events) {
    nlohmann::json rec = {{"record", "event"},
                          {"step", e.step},
                          {"type", e.type},
                          {"agent", e.agent}};
    out << rec.dump() << "\n";
  }
  nlohmann::json trailer = {{"record", "end"},
                            {"outcome", to_string(log.outcome)},
                            {"final_state", detail::to_json(log.final_state)},
                            {"final_stage_cost", log.final_stage_cost},
                            {"steps", log.steps.size()}};
  out << trailer.dump() << "\n";
}

}  // namespace mppi
