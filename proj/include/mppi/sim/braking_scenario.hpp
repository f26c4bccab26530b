#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mppi/core/planner.hpp"
#include "mppi/costs/stage_costs.hpp"
#include "mppi/dynamics/unicycle.hpp"
#include "mppi/math/rng.hpp"
#include "mppi/sim/episode_log.hpp"
#include "mppi/sim/scenario_config.hpp"

namespace mppi {

// A thrown obstacle that appears mid-episode. Spawned relative to the
// robot's pose at the injection step, offset to one side of the path and
// flying across it, until it lands dead on the robot's line and stays
// there. While it flies, the constant-velocity prediction says it will
// sweep through and clear the path. Side and offset are randomized per
// run; the offset sets the flight time, not the resting point.
struct CrossingBox {
  Eigen::Vector2d position;
  Eigen::Vector2d velocity;
  double flight_time = 0.0;  // s until landing, measured from injection
};

inline CrossingBox spawn_box(const ScenarioConfig& cfg,
                             const Eigen::Vector3d& robot, int run) {
  const CounterRng rng(cfg.plan.seed, RngDomain::scenario);
  const auto r = static_cast<std::uint32_t>(run);
  const double side = rng.uniform(r, 0, 0, 0) < 0.5 ? -1.0 : 1.0;
  const double jitter =
      (2.0 * rng.uniform(r, 0, 1, 0) - 1.0) * cfg.box_lateral_jitter;

  const Eigen::Vector2d heading{std::cos(robot[2]), std::sin(robot[2])};
  const Eigen::Vector2d left{-heading[1], heading[0]};
  CrossingBox box;
  box.position = robot.head<2>() + cfg.box_distance * heading +
                 side * (cfg.box_lateral + jitter) * left;
  box.velocity = -side * cfg.box_speed * left;
  box.flight_time = (cfg.box_lateral + jitter) / cfg.box_speed;
  return box;
}

// Point robot driving at a goal; the planner's stage cost adds the
// obstacle penalty only once the box exists, predicting it forward with
// a constant-velocity model re-anchored at the observed box state every
// control period. The lone biased ancillary is the all-zero input
// sequence, an immediate full stop.
inline EpisodeLog run_braking_episode(const ScenarioConfig& cfg,
                                      Variant variant, int run_index,
                                      int jobs = 1) {
  cfg.validate();
  if (variant == Variant::switching)
    throw std::invalid_argument("braking scenario has no switching variant");
  if (cfg.plan.sigma.size() != 2)
    throw std::invalid_argument("braking episode: need 2 sigma channels");

  const double dt = cfg.dt();
  const UnicycleParams uparams;
  const UnicycleModel model(uparams, dt);

  PlanConfig plan = cfg.plan;
  plan.seed = derive_seed(cfg.plan.seed, run_index);
  plan.ancillary_count =
      variant == Variant::biased ? static_cast<int>(cfg.ancillaries.size()) : 0;
  Planner planner(plan);

  std::vector<InputSequence> proposals;
  if (variant == Variant::biased) {
    for (const auto& name : cfg.ancillaries) {
      if (name != "braking")
        throw std::invalid_argument("braking: unknown ancillary " + name);
      proposals.push_back(InputSequence::Zero(plan.horizon, 2));
    }
  }

  EpisodeLog log;
  log.scenario = cfg.scenario;
  log.variant = to_string(variant);
  log.seed = cfg.plan.seed;
  log.run_index = run_index;
  log.dt = dt;
  log.agent_count = 1;

  const int inject_step =
      static_cast<int>(std::lround(cfg.inject_time / dt));
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  CrossingBox box;
  bool box_visible = false;

  const auto plant_cost = [&]() {
    double c = (x.head<2>() - cfg.goal).norm();
    if (box_visible &&
        (x.head<2>() - box.position).norm() < cfg.goal_cost.collision_radius)
      c += cfg.goal_cost.collision_penalty;
    return c;
  };

  for (int step = 0; step < cfg.episode_steps; ++step) {
    if (!box_visible && step == inject_step) {
      box = spawn_box(cfg, x, run_index);
      box_visible = true;
      log.add_event(step, "obstacle_injected");
    }

    // Stage cost over the rollout: row index t is t control periods ahead
    // of now, which is where the constant-velocity box prediction sits.
    const bool seen = box_visible;
    const CrossingBox box_now = box;
    const auto stage = [&, seen, box_now](const Eigen::VectorXd& xs, int t) {
      double c = (xs.head<2>() - cfg.goal).norm();
      if (seen) {
        const Eigen::Vector2d predicted = constant_velocity_propagate(
            box_now.position, box_now.velocity, t * dt);
        if ((xs.head<2>() - predicted).norm() <
            cfg.goal_cost.collision_radius)
          c += cfg.goal_cost.collision_penalty;
      }
      return c;
    };

    const StepResult res = planner.step(x, model, stage, proposals, jobs);

    StepRecord rec;
    rec.step = step;
    rec.state = x;
    rec.command = res.command;
    rec.diag = {res.diag};
    rec.positions = {x.head<2>()};
    rec.stage_cost = plant_cost();
    log.steps.push_back(std::move(rec));

    x = unicycle_step(x, {res.command[0], res.command[1]}, dt);
    if (box_visible && box.velocity.squaredNorm() > 0.0) {
      const double elapsed = (step + 1 - inject_step) * dt;
      if (elapsed < box.flight_time) {
        box.position += dt * box.velocity;
      } else {
        box.position += (box.flight_time - (elapsed - dt)) * box.velocity;
        box.velocity.setZero();
      }
    }

    if (box_visible &&
        (x.head<2>() - box.position).norm() < cfg.goal_cost.collision_radius) {
      log.add_event(step, "collision", 0);
      log.outcome = Outcome::collision;
      break;
    }
    if ((x.head<2>() - cfg.goal).norm() < cfg.goal_tolerance) {
      log.add_event(step + 1, "goal_reached", 0);
      log.outcome = Outcome::success;
      break;
    }
  }

  log.final_state = x;
  log.final_stage_cost = plant_cost();
  if (log.outcome != Outcome::collision &&
      !log.has_event("goal_reached"))
    log.outcome = Outcome::timeout;
  return log;
}

}  // namespace mppi
