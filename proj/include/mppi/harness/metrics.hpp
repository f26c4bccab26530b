#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mppi/sim/episode_log.hpp"
#include "mppi/sim/scenario_config.hpp"

namespace mppi {

// Per-episode scores. time_to_arrival and distance_traveled have one
// entry per agent; arrival is NaN for agents that never reached their
// goal.
struct RunMetrics {
  int run_index = 0;
  Outcome outcome = Outcome::timeout;
  int steps = 0;
  double total_cost = 0.0;
  double total_effort = 0.0;
  int collisions = 0;
  bool rule_violations = false;
  std::vector<double> time_to_arrival;
  std::vector<double> distance_traveled;
};

namespace detail {

// Agent planar positions in the final state, by scenario state layout.
inline std::vector<Eigen::Vector2d> final_positions(const EpisodeLog& log,
                                                    const ScenarioConfig& cfg) {
  std::vector<Eigen::Vector2d> out;
  if ((cfg.scenario == "crossing" || cfg.scenario == "corridor") &&
      log.final_state.size() == 6 * log.agent_count) {
    for (int a = 0; a < log.agent_count; ++a)
      out.push_back(log.final_state.segment<2>(6 * a));
  } else if (cfg.scenario == "braking" && log.final_state.size() == 3) {
    out.push_back(log.final_state.head<2>());
  }
  return out;
}

}  // namespace detail

inline RunMetrics score_episode(const EpisodeLog& log,
                                const ScenarioConfig& cfg) {
  RunMetrics m;
  m.run_index = log.run_index;
  m.outcome = log.outcome;
  m.steps = static_cast<int>(log.steps.size());
  for (const auto& rec : log.steps) {
    m.total_cost += rec.stage_cost;
    m.total_effort += rec.command.cwiseAbs().sum();
  }
  m.total_cost += log.final_stage_cost;
  m.collisions = log.count_events("collision");
  m.rule_violations = log.has_event("rule_violation");

  const double nan = std::numeric_limits<double>::quiet_NaN();
  m.time_to_arrival.assign(log.agent_count, nan);
  for (int a = 0; a < log.agent_count; ++a) {
    const int step = log.event_step("goal_reached", a);
    if (step >= 0) m.time_to_arrival[a] = step * log.dt;
  }

  m.distance_traveled.assign(log.agent_count, 0.0);
  const bool have_positions =
      !log.steps.empty() &&
      static_cast<int>(log.steps.front().positions.size()) == log.agent_count;
  if (have_positions) {
    for (std::size_t i = 1; i < log.steps.size(); ++i) {
      for (int a = 0; a < log.agent_count; ++a) {
        m.distance_traveled[a] += (log.steps[i].positions[a] -
                                   log.steps[i - 1].positions[a])
                                      .norm();
      }
    }
    const auto last = detail::final_positions(log, cfg);
    if (static_cast<int>(last.size()) == log.agent_count) {
      for (int a = 0; a < log.agent_count; ++a) {
        m.distance_traveled[a] +=
            (last[a] - log.steps.back().positions[a]).norm();
      }
    }
  }
  return m;
}

// Summary statistics over a scalar series. NaN entries (e.g. arrival
// times of agents that never arrived) are dropped before aggregating; a
// series with no finite values reports count 0 and NaN stats.
struct Aggregate {
  int count = 0;
  double mean = std::numeric_limits<double>::quiet_NaN();
  double stddev = std::numeric_limits<double>::quiet_NaN();
  double median = std::numeric_limits<double>::quiet_NaN();
  double q1 = std::numeric_limits<double>::quiet_NaN();
  double q3 = std::numeric_limits<double>::quiet_NaN();
  double min = std::numeric_limits<double>::quiet_NaN();
  double max = std::numeric_limits<double>::quiet_NaN();
};

// Linear-interpolation quantile of an ascending-sorted series.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline Aggregate aggregate(const std::vector<double>& values) {
  std::vector<double> v;
  v.reserve(values.size());
  for (double x : values)
    if (std::isfinite(x)) v.push_back(x);
  Aggregate agg;
  agg.count = static_cast<int>(v.size());
  if (v.empty()) return agg;
  std::sort(v.begin(), v.end());

  double sum = 0.0;
  for (double x : v) sum += x;
  agg.mean = sum / agg.count;
  if (agg.count > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - agg.mean) * (x - agg.mean);
    agg.stddev = std::sqrt(ss / (agg.count - 1));
  } else {
    agg.stddev = 0.0;
  }
  agg.median = quantile_sorted(v, 0.5);
  agg.q1 = quantile_sorted(v, 0.25);
  agg.q3 = quantile_sorted(v, 0.75);
  agg.min = v.front();
  agg.max = v.back();
  return agg;
}

struct OutcomeTally {
  int successes = 0;
  int collisions = 0;
  int deadlocks = 0;
  int timeouts = 0;
};

inline OutcomeTally tally_outcomes(const std::vector<RunMetrics>& runs) {
  OutcomeTally t;
  for (const auto& r : runs) {
    switch (r.outcome) {
      case Outcome::success: ++t.successes; break;
      case Outcome::collision: ++t.collisions; break;
      case Outcome::deadlock: ++t.deadlocks; break;
      case Outcome::timeout: ++t.timeouts; break;
    }
  }
  return t;
}

// Paired comparison support: keep only runs (matched by position, which
// is run index under shared seeds) successful under BOTH methods.
inline std::pair<std::vector<RunMetrics>, std::vector<RunMetrics>>
paired_successes(const std::vector<RunMetrics>& a,
                 const std::vector<RunMetrics>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("paired_successes: run count mismatch");
  std::pair<std::vector<RunMetrics>, std::vector<RunMetrics>> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].outcome == Outcome::success && b[i].outcome == Outcome::success) {
      out.first.push_back(a[i]);
      out.second.push_back(b[i]);
    }
  }
  return out;
}

inline std::vector<double> collect_costs(const std::vector<RunMetrics>& runs) {
  std::vector<double> v;
  v.reserve(runs.size());
  for (const auto& r : runs) v.push_back(r.total_cost);
  return v;
}

inline std::vector<double> collect_efforts(const std::vector<RunMetrics>& runs) {
  std::vector<double> v;
  v.reserve(runs.size());
  for (const auto& r : runs) v.push_back(r.total_effort);
  return v;
}

inline std::vector<double> collect_arrivals(const std::vector<RunMetrics>& runs) {
  std::vector<double> v;
  for (const auto& r : runs)
    for (double t : r.time_to_arrival) v.push_back(t);
  return v;
}

inline std::vector<double> collect_distances(const std::vector<RunMetrics>& runs) {
  std::vector<double> v;
  for (const auto& r : runs)
    for (double d : r.distance_traveled) v.push_back(d);
  return v;
}

inline int count_collision_events(const std::vector<RunMetrics>& runs) {
  int n = 0;
  for (const auto& r : runs) n += r.collisions;
  return n;
}

inline int count_rule_violation_experiments(
    const std::vector<RunMetrics>& runs) {
  int n = 0;
  for (const auto& r : runs) n += r.rule_violations ? 1 : 0;
  return n;
}

}  // namespace mppi
