#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "mppi/harness/metrics.hpp"
#include "mppi/harness/runner.hpp"

namespace mppi {

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_csv(std::ostream& os,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) os << ',';
    os << header[i];
  }
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << row[i];
    }
    os << '\n';
  }
}

// Per-run table, one row per episode.
inline std::vector<std::string> run_csv_header() {
  return {"run",        "outcome",  "steps",           "total_cost",
          "total_effort", "collisions", "rule_violations", "arrival_mean",
          "distance_total"};
}

inline std::vector<std::string> run_csv_row(const RunMetrics& m) {
  double arrivals = 0.0;
  int arrived = 0;
  for (double t : m.time_to_arrival) {
    if (std::isfinite(t)) {
      arrivals += t;
      ++arrived;
    }
  }
  double distance = 0.0;
  for (double d : m.distance_traveled) distance += d;
  return {std::to_string(m.run_index),
          to_string(m.outcome),
          std::to_string(m.steps),
          format_number(m.total_cost),
          format_number(m.total_effort),
          std::to_string(m.collisions),
          m.rule_violations ? "1" : "0",
          format_number(arrived ? arrivals / arrived
                                : std::numeric_limits<double>::quiet_NaN()),
          format_number(distance)};
}

// One aggregated row per (variant, sample count) cell of a sweep.
struct SweepRow {
  std::string scenario;
  std::string variant;
  int samples = 0;
  int runs = 0;
  OutcomeTally outcomes;
  int collision_events = 0;
  int rule_violation_experiments = 0;
  Aggregate cost;
  Aggregate effort;
  Aggregate arrival;
  Aggregate distance;
};

inline SweepRow summarize(const std::string& scenario,
                          const std::string& variant, int samples,
                          const std::vector<RunMetrics>& runs) {
  SweepRow row;
  row.scenario = scenario;
  row.variant = variant;
  row.samples = samples;
  row.runs = static_cast<int>(runs.size());
  row.outcomes = tally_outcomes(runs);
  row.collision_events = count_collision_events(runs);
  row.rule_violation_experiments = count_rule_violation_experiments(runs);
  row.cost = aggregate(collect_costs(runs));
  row.effort = aggregate(collect_efforts(runs));
  row.arrival = aggregate(collect_arrivals(runs));
  row.distance = aggregate(collect_distances(runs));
  return row;
}

// Cross product {variants} x {K values} over shared seeds; plant
// randomization is keyed by (seed, run) only, so every cell sees the
// same worlds. Rows come out K-major, variants inner, like the paper's
// tables.
inline std::vector<SweepRow> sweep(ScenarioConfig cfg,
                                   const std::vector<Variant>& variants,
                                   const std::vector<int>& k_list, int runs,
                                   int jobs = 1) {
  std::vector<SweepRow> rows;
  for (int k : k_list) {
    cfg.plan.samples = k;
    for (Variant v : variants) {
      const auto logs = run_batch(cfg, v, runs, jobs);
      rows.push_back(
          summarize(cfg.scenario, to_string(v), k, score_batch(logs, cfg)));
    }
  }
  return rows;
}

inline std::vector<std::string> sweep_csv_header() {
  return {"scenario",      "variant",        "samples",
          "runs",          "successes",      "collisions",
          "deadlocks",     "timeouts",       "collision_events",
          "rule_violation_experiments",      "cost_mean",
          "cost_std",      "cost_median",    "cost_q1",
          "cost_q3",       "cost_min",       "cost_max",
          "effort_mean",   "effort_std",     "effort_median",
          "arrival_count", "arrival_mean",   "arrival_std",
          "arrival_median", "distance_mean", "distance_std",
          "distance_median"};
}

inline std::vector<std::string> sweep_csv_row(const SweepRow& r) {
  return {r.scenario,
          r.variant,
          std::to_string(r.samples),
          std::to_string(r.runs),
          std::to_string(r.outcomes.successes),
          std::to_string(r.outcomes.collisions),
          std::to_string(r.outcomes.deadlocks),
          std::to_string(r.outcomes.timeouts),
          std::to_string(r.collision_events),
          std::to_string(r.rule_violation_experiments),
          format_number(r.cost.mean),
          format_number(r.cost.stddev),
          format_number(r.cost.median),
          format_number(r.cost.q1),
          format_number(r.cost.q3),
          format_number(r.cost.min),
          format_number(r.cost.max),
          format_number(r.effort.mean),
          format_number(r.effort.stddev),
          format_number(r.effort.median),
          std::to_string(r.arrival.count),
          format_number(r.arrival.mean),
          format_number(r.arrival.stddev),
          format_number(r.arrival.median),
          format_number(r.distance.mean),
          format_number(r.distance.stddev),
          format_number(r.distance.median)};
}

// Two-variant comparison at fixed K: each variant summarized over all
// runs and again over the paired-success subset.
struct CompareResult {
  SweepRow a_all, b_all;
  SweepRow a_paired, b_paired;
};

inline CompareResult compare_variants(ScenarioConfig cfg, Variant va,
                                      Variant vb, int runs, int jobs = 1) {
  const auto logs_a = run_batch(cfg, va, runs, jobs);
  const auto logs_b = run_batch(cfg, vb, runs, jobs);
  const auto ma = score_batch(logs_a, cfg);
  const auto mb = score_batch(logs_b, cfg);
  const auto [pa, pb] = paired_successes(ma, mb);
  const int k = cfg.plan.samples;
  CompareResult res;
  res.a_all = summarize(cfg.scenario, to_string(va), k, ma);
  res.b_all = summarize(cfg.scenario, to_string(vb), k, mb);
  res.a_paired = summarize(cfg.scenario, to_string(va), k, pa);
  res.b_paired = summarize(cfg.scenario, to_string(vb), k, pb);
  return res;
}

inline std::vector<std::string> compare_csv_header() {
  auto h = sweep_csv_header();
  h.insert(h.begin(), "filter");
  return h;
}

inline std::vector<std::vector<std::string>> compare_csv_rows(
    const CompareResult& res) {
  const auto with = [](const char* filter, const SweepRow& row) {
    auto cells = sweep_csv_row(row);
    cells.insert(cells.begin(), filter);
    return cells;
  };
  return {with("all", res.a_all), with("all", res.b_all),
          with("paired", res.a_paired), with("paired", res.b_paired)};
}

}  // namespace mppi
