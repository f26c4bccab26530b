#pragma once

#include <stdexcept>
#include <vector>

#include "mppi/harness/metrics.hpp"
#include "mppi/sim/braking_scenario.hpp"
#include "mppi/sim/pendulum_scenario.hpp"
#include "mppi/sim/scenario_config.hpp"
#include "mppi/sim/vessel_scenarios.hpp"
#include "mppi/util/parallel.hpp"

namespace mppi {

inline EpisodeLog run_episode(const ScenarioConfig& cfg, Variant variant,
                              int run_index, int jobs = 1) {
  if (cfg.scenario == "pendulum")
    return run_pendulum_episode(cfg, variant, run_index, jobs);
  if (cfg.scenario == "crossing")
    return run_crossing_episode(cfg, variant, run_index, jobs);
  if (cfg.scenario == "corridor")
    return run_corridor_episode(cfg, variant, run_index, jobs);
  if (cfg.scenario == "braking")
    return run_braking_episode(cfg, variant, run_index, jobs);
  throw std::invalid_argument("unknown scenario: " + cfg.scenario);
}

// N episodes with run indices 0..N-1, parallelized across episodes.
// Each episode derives everything from (experiment seed, run index), so
// results land in run order and are independent of the job count.
inline std::vector<EpisodeLog> run_batch(const ScenarioConfig& cfg,
                                         Variant variant, int runs,
                                         int jobs = 1) {
  if (runs < 0) throw std::invalid_argument("run_batch: negative run count");
  std::vector<EpisodeLog> logs(runs);
  parallel_for(runs, jobs,
               [&](int r) { logs[r] = run_episode(cfg, variant, r, 1); });
  return logs;
}

inline std::vector<RunMetrics> score_batch(const std::vector<EpisodeLog>& logs,
                                           const ScenarioConfig& cfg) {
  std::vector<RunMetrics> out;
  out.reserve(logs.size());
  for (const auto& log : logs) out.push_back(score_episode(log, cfg));
  return out;
}

}  // namespace mppi
