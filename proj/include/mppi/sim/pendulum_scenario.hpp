#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mppi/control/pendulum_swingup.hpp"
#include "mppi/control/propose.hpp"
#include "mppi/core/planner.hpp"
#include "mppi/costs/stage_costs.hpp"
#include "mppi/dynamics/furuta.hpp"
#include "mppi/math/rng.hpp"
#include "mppi/sim/episode_log.hpp"
#include "mppi/sim/scenario_config.hpp"

namespace mppi {

inline bool pendulum_success(const Eigen::Vector4d& x) {
  return std::abs(wrap_angle(x[1])) < 0.05 && std::abs(x[3]) < 0.1;
}

// Swing-up from the hanging rest: the plant runs perturbed parameters,
// every controller and the planner's rollout model run the nominal ones.
// Variants: vanilla (Gaussian samples only), biased (LQR, LQI and EBC
// proposals injected), switching (the region law in closed loop, no
// planner).
inline EpisodeLog run_pendulum_episode(const ScenarioConfig& cfg,
                                       Variant variant, int run_index,
                                       int jobs = 1) {
  cfg.validate();
  const double dt = cfg.dt();
  const FurutaParams nominal;
  const FurutaParams plant_params =
      perturb_params(nominal, cfg.plan.seed,
                     static_cast<std::uint32_t>(run_index), cfg.perturb_std);
  const FurutaModel plant(plant_params, dt);
  const FurutaModel model(nominal, dt);

  SwitchingConfig switching_cfg;
  LqrController lqr(pendulum_lqr_gain(nominal, dt), cfg.pendulum_cost.theta_ref,
                    nominal.voltage_limit);
  LqiController lqi(pendulum_lqi_gain(nominal, dt), cfg.pendulum_cost.theta_ref,
                    dt, nominal.voltage_limit);
  EbcController ebc(nominal, EbcConfig{});
  SwitchingController switching(lqr, lqi, ebc, switching_cfg);

  PlanConfig plan = cfg.plan;
  plan.seed = derive_seed(cfg.plan.seed, static_cast<std::uint64_t>(run_index));
  plan.ancillary_count =
      variant == Variant::biased ? static_cast<int>(cfg.ancillaries.size()) : 0;

  const auto stage_cost = [&](const Eigen::VectorXd& x, int) {
    return pendulum_running_cost(x, cfg.pendulum_cost);
  };

  EpisodeLog log;
  log.scenario = cfg.scenario;
  log.variant = to_string(variant);
  log.seed = cfg.plan.seed;
  log.run_index = run_index;
  log.dt = dt;
  log.agent_count = 1;

  Eigen::Vector4d x{0.0, M_PI, 0.0, 0.0};

  if (variant == Variant::switching) {
    for (int step = 0; step < cfg.episode_steps; ++step) {
      const Eigen::VectorXd u = switching.input(x);
      StepRecord rec;
      rec.step = step;
      rec.state = x;
      rec.command = u;
      rec.stage_cost = pendulum_running_cost(x, cfg.pendulum_cost);
      log.steps.push_back(std::move(rec));
      x = plant.step(x, u);
    }
  } else {
    Planner planner(plan);
    for (int step = 0; step < cfg.episode_steps; ++step) {
      std::vector<InputSequence> proposals;
      if (plan.ancillary_count > 0) {
        proposals.reserve(cfg.ancillaries.size());
        for (const auto& name : cfg.ancillaries) {
          if (name == "lqr")
            proposals.push_back(propose(lqr, x, plan.horizon, model));
          else if (name == "lqi")
            proposals.push_back(propose(lqi, x, plan.horizon, model));
          else if (name == "ebc")
            proposals.push_back(propose(ebc, x, plan.horizon, model));
          else
            throw std::invalid_argument("pendulum: unknown ancillary " + name);
        }
      }
      const StepResult res =
          planner.step(x, model, stage_cost, proposals, jobs);
      StepRecord rec;
      rec.step = step;
      rec.state = x;
      rec.command = res.command;
      rec.diag.push_back(res.diag);
      rec.stage_cost = pendulum_running_cost(x, cfg.pendulum_cost);
      log.steps.push_back(std::move(rec));
      x = plant.step(x, res.command);
      // The live LQI integrator follows the executed trajectory, but only
      // inside its own operating region; elsewhere it would just wind up.
      if (std::abs(wrap_angle(x[1])) < switching_cfg.alpha_track &&
          std::abs(x[3]) < switching_cfg.alpha_dot_track) {
        lqi.observe(x);
      }
    }
  }

  log.final_state = x;
  log.final_stage_cost = pendulum_running_cost(x, cfg.pendulum_cost);
  if (cfg.episode_steps == 0) {
    log.outcome = Outcome::timeout;
  } else if (pendulum_success(x)) {
    log.outcome = Outcome::success;
    log.add_event(cfg.episode_steps, "goal_reached", 0);
  } else {
    log.outcome = Outcome::timeout;
  }
  return log;
}

}  // namespace mppi
