#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "mppi/core/types.hpp"
#include "mppi/costs/stage_costs.hpp"
#include "mppi/util/config.hpp"

namespace mppi {

enum class Variant { vanilla, biased, switching };

inline Variant parse_variant(const std::string& s) {
  if (s == "vanilla") return Variant::vanilla;
  if (s == "biased") return Variant::biased;
  if (s == "switching") return Variant::switching;
  throw std::invalid_argument("unknown variant: " + s);
}

inline const char* to_string(Variant v) {
  switch (v) {
    case Variant::vanilla: return "vanilla";
    case Variant::biased: return "biased";
    case Variant::switching: return "switching";
  }
  return "unknown";
}

// Everything an episode needs besides (variant, run index). One struct
// serves all four experiment families; fields irrelevant to a scenario
// are ignored by its runner. Defaults per scenario come from the
// *_defaults() factories; a config file and CLI flags override.
struct ScenarioConfig {
  std::string scenario = "pendulum";
  double control_rate = 50.0;  // Hz; plan.dt is its inverse
  int episode_steps = 250;
  PlanConfig plan;             // seed doubles as the experiment seed
  std::vector<std::string> ancillaries;

  // Pendulum.
  double perturb_std = 0.05;
  PendulumCostConfig pendulum_cost;

  // Vessels (crossing, corridor).
  MultiAgentCostConfig ma_cost;
  Eigen::VectorXd vessel_sigma;     // per-vessel 4 channels
  double arrival_radius = 0.8;      // m
  double v_cruise = 1.5;            // m/s
  double slow_thrust = 1.5;         // N
  double fast_thrust = 8.0;         // N
  double approach = 10.0;           // crossing leg length, m
  double start_jitter = 0.5;        // m, along-track, uniform +-
  double corridor_length = 32.0;    // m
  double corridor_halfwidth = 6.0;  // m
  double narrow_halfwidth = 2.0;    // m
  double wall_clearance = 0.5;      // m, hull radius against walls
  double wall_penalty = 2000.0;     // per step, planner side
  double deadlock_speed = 0.05;     // m/s
  double deadlock_time = 10.0;      // s
  double goal_estimate_window = 10.0;  // s of constant-velocity extrapolation

  // Braking.
  GoalObstacleCostConfig goal_cost;
  Eigen::Vector2d goal{8.0, 0.0};
  double inject_time = 2.0;         // s
  double box_distance = 2.5;        // m ahead of the robot
  // The lateral offset sets the flight time and so the distance left when
  // the landing is revealed. Long enough that a cruising robot cannot
  // assemble a stop from plain Gaussian samples, short enough that the
  // injected braking sequence still stops it clear of the box.
  double box_lateral = 1.05;        // m to the side (sign randomized)
  double box_speed = 1.0;           // m/s across the path
  double box_lateral_jitter = 0.15; // m
  double goal_tolerance = 0.3;      // m

  double dt() const { return 1.0 / control_rate; }

  void validate() const {
    if (!(control_rate > 0.0))
      throw std::invalid_argument("ScenarioConfig: control_rate must be > 0");
    if (episode_steps < 0)
      throw std::invalid_argument("ScenarioConfig: negative episode length");
    if (std::abs(plan.dt * control_rate - 1.0) > 1e-9)
      throw std::invalid_argument(
          "ScenarioConfig: control rate and plan dt are inconsistent");
  }
};

inline ScenarioConfig pendulum_defaults() {
  ScenarioConfig cfg;
  cfg.scenario = "pendulum";
  cfg.control_rate = 50.0;
  cfg.episode_steps = 250;
  cfg.plan.samples = 100;
  cfg.plan.horizon = 50;
  cfg.plan.dt = 0.02;
  cfg.plan.sigma = Eigen::VectorXd::Constant(1, std::sqrt(0.5));
  cfg.plan.lambda0 = 20.0;
  cfg.ancillaries = {"lqr", "lqi", "ebc"};
  return cfg;
}

inline ScenarioConfig crossing_defaults() {
  ScenarioConfig cfg;
  cfg.scenario = "crossing";
  cfg.control_rate = 10.0;
  cfg.episode_steps = 350;
  cfg.plan.samples = 200;
  cfg.plan.horizon = 60;
  cfg.plan.dt = 0.1;
  cfg.plan.lambda0 = 20.0;
  cfg.plan.eta_min = 5.0;
  cfg.plan.eta_max = 10.0;
  cfg.vessel_sigma = Eigen::Vector4d{std::sqrt(6.0), std::sqrt(6.0),
                                     std::sqrt(0.12), std::sqrt(0.12)};
  cfg.ancillaries = {"go_slow", "go_fast", "braking", "go_to_goal"};
  return cfg;
}

inline ScenarioConfig corridor_defaults() {
  ScenarioConfig cfg = crossing_defaults();
  cfg.scenario = "corridor";
  cfg.episode_steps = 450;
  cfg.plan.samples = 500;
  // Four agents in a corridor keep each other inside the lookout radius
  // for most of the run. At the crossing's penalty level the cheapest
  // plan is to idle below the yield speed forever, so the corridor runs
  // a milder rate, and a horizon long enough to see past a blocked
  // narrow section to the progress beyond it.
  cfg.plan.horizon = 100;
  cfg.ma_cost.row_penalty = 30.0;
  // Long stretches where every sample is blocked push the autotune's
  // temperature sky-high; once blind it lets stale spinning plans run.
  // The ceiling keeps it able to rank samples, the spin term gives it a
  // reason to unwind.
  cfg.plan.lambda_max = 250.0;
  cfg.ma_cost.spin_weight = 20.0;
  return cfg;
}

inline ScenarioConfig braking_defaults() {
  ScenarioConfig cfg;
  cfg.scenario = "braking";
  cfg.control_rate = 10.0;
  cfg.episode_steps = 120;
  cfg.plan.samples = 300;
  cfg.plan.horizon = 50;
  cfg.plan.dt = 0.1;
  cfg.plan.sigma = Eigen::VectorXd::Constant(2, std::sqrt(0.5));
  cfg.plan.lambda0 = 5.0;
  cfg.plan.eta_min = 5.0;
  cfg.plan.eta_max = 10.0;
  cfg.ancillaries = {"braking"};
  cfg.goal = {8.0, 0.0};
  cfg.goal_cost.goal = cfg.goal;
  return cfg;
}

inline ScenarioConfig scenario_defaults(const std::string& id) {
  if (id == "pendulum") return pendulum_defaults();
  if (id == "crossing") return crossing_defaults();
  if (id == "corridor") return corridor_defaults();
  if (id == "braking") return braking_defaults();
  throw std::invalid_argument("unknown scenario: " + id);
}

// File/flag overrides on top of the scenario defaults. Unknown keys are
// rejected so typos fail loudly.
inline ScenarioConfig apply_overrides(ScenarioConfig cfg,
                                      const KeyValueConfig& kv) {
  static const std::vector<std::string> known = {
      "scenario",          "control_rate",    "episode_steps",
      "samples",           "horizon",         "lambda0",
      "eta_min",           "eta_max",         "lambda_shrink",
      "lambda_grow",       "seed",            "sigma",
      "ancillaries",       "perturb_std",     "theta_ref",
      "goal_weight",       "collision_radius","collision_penalty",
      "row_radius",        "row_penalty",     "speed_threshold",
      "arrival_radius",    "v_cruise",        "slow_thrust",
      "fast_thrust",       "approach",        "start_jitter",
      "corridor_length",   "corridor_halfwidth", "narrow_halfwidth",
      "wall_clearance",    "wall_penalty",    "deadlock_speed",
      "deadlock_time",     "goal_estimate_window", "goal_x",
      "goal_y",            "inject_time",     "box_distance",
      "box_lateral",       "box_speed",       "box_lateral_jitter",
      "goal_tolerance",    "obstacle_radius", "obstacle_penalty"};
  for (const auto& [key, value] : kv.entries()) {
    bool ok = false;
    for (const auto& k : known) ok = ok || k == key;
    if (!ok) throw std::runtime_error("unknown config key: " + key);
    (void)value;
  }

  cfg.scenario = kv.get_string("scenario", cfg.scenario);
  cfg.control_rate = kv.get_double("control_rate", cfg.control_rate);
  cfg.episode_steps = kv.get_int("episode_steps", cfg.episode_steps);
  cfg.plan.samples = kv.get_int("samples", cfg.plan.samples);
  cfg.plan.horizon = kv.get_int("horizon", cfg.plan.horizon);
  cfg.plan.dt = 1.0 / cfg.control_rate;
  cfg.plan.lambda0 = kv.get_double("lambda0", cfg.plan.lambda0);
  cfg.plan.eta_min = kv.get_double("eta_min", cfg.plan.eta_min);
  cfg.plan.eta_max = kv.get_double("eta_max", cfg.plan.eta_max);
  cfg.plan.lambda_shrink = kv.get_double("lambda_shrink", cfg.plan.lambda_shrink);
  cfg.plan.lambda_grow = kv.get_double("lambda_grow", cfg.plan.lambda_grow);
  cfg.plan.seed = kv.get_u64("seed", cfg.plan.seed);
  if (kv.has("sigma")) {
    const auto s = kv.get_doubles("sigma", {});
    Eigen::VectorXd sig(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) sig[i] = s[i];
    if (cfg.scenario == "crossing" || cfg.scenario == "corridor")
      cfg.vessel_sigma = sig;
    else
      cfg.plan.sigma = sig;
  }
  cfg.ancillaries = kv.get_strings("ancillaries", cfg.ancillaries);

  cfg.perturb_std = kv.get_double("perturb_std", cfg.perturb_std);
  cfg.pendulum_cost.theta_ref =
      kv.get_double("theta_ref", cfg.pendulum_cost.theta_ref);

  cfg.ma_cost.goal_weight = kv.get_double("goal_weight", cfg.ma_cost.goal_weight);
  cfg.ma_cost.collision_radius =
      kv.get_double("collision_radius", cfg.ma_cost.collision_radius);
  cfg.ma_cost.collision_penalty =
      kv.get_double("collision_penalty", cfg.ma_cost.collision_penalty);
  cfg.ma_cost.row_radius = kv.get_double("row_radius", cfg.ma_cost.row_radius);
  cfg.ma_cost.row_penalty = kv.get_double("row_penalty", cfg.ma_cost.row_penalty);
  cfg.ma_cost.speed_threshold =
      kv.get_double("speed_threshold", cfg.ma_cost.speed_threshold);
  cfg.arrival_radius = kv.get_double("arrival_radius", cfg.arrival_radius);
  cfg.v_cruise = kv.get_double("v_cruise", cfg.v_cruise);
  cfg.slow_thrust = kv.get_double("slow_thrust", cfg.slow_thrust);
  cfg.fast_thrust = kv.get_double("fast_thrust", cfg.fast_thrust);
  cfg.approach = kv.get_double("approach", cfg.approach);
  cfg.start_jitter = kv.get_double("start_jitter", cfg.start_jitter);
  cfg.corridor_length = kv.get_double("corridor_length", cfg.corridor_length);
  cfg.corridor_halfwidth =
      kv.get_double("corridor_halfwidth", cfg.corridor_halfwidth);
  cfg.narrow_halfwidth =
      kv.get_double("narrow_halfwidth", cfg.narrow_halfwidth);
  cfg.wall_clearance = kv.get_double("wall_clearance", cfg.wall_clearance);
  cfg.wall_penalty = kv.get_double("wall_penalty", cfg.wall_penalty);
  cfg.deadlock_speed = kv.get_double("deadlock_speed", cfg.deadlock_speed);
  cfg.deadlock_time = kv.get_double("deadlock_time", cfg.deadlock_time);
  cfg.goal_estimate_window =
      kv.get_double("goal_estimate_window", cfg.goal_estimate_window);

  cfg.goal[0] = kv.get_double("goal_x", cfg.goal[0]);
  cfg.goal[1] = kv.get_double("goal_y", cfg.goal[1]);
  cfg.goal_cost.goal = cfg.goal;
  cfg.goal_cost.collision_radius =
      kv.get_double("obstacle_radius", cfg.goal_cost.collision_radius);
  cfg.goal_cost.collision_penalty =
      kv.get_double("obstacle_penalty", cfg.goal_cost.collision_penalty);
  cfg.inject_time = kv.get_double("inject_time", cfg.inject_time);
  cfg.box_distance = kv.get_double("box_distance", cfg.box_distance);
  cfg.box_lateral = kv.get_double("box_lateral", cfg.box_lateral);
  cfg.box_speed = kv.get_double("box_speed", cfg.box_speed);
  cfg.box_lateral_jitter =
      kv.get_double("box_lateral_jitter", cfg.box_lateral_jitter);
  cfg.goal_tolerance = kv.get_double("goal_tolerance", cfg.goal_tolerance);

  cfg.validate();
  return cfg;
}

// Round-trip serialization of the effective configuration, written next
// to results so a run can be reproduced from its output directory alone.
inline KeyValueConfig to_key_values(const ScenarioConfig& cfg) {
  const auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  KeyValueConfig kv;
  kv.set("scenario", cfg.scenario);
  kv.set("control_rate", num(cfg.control_rate));
  kv.set("episode_steps", std::to_string(cfg.episode_steps));
  kv.set("samples", std::to_string(cfg.plan.samples));
  kv.set("horizon", std::to_string(cfg.plan.horizon));
  kv.set("lambda0", num(cfg.plan.lambda0));
  kv.set("eta_min", num(cfg.plan.eta_min));
  kv.set("eta_max", num(cfg.plan.eta_max));
  kv.set("lambda_shrink", num(cfg.plan.lambda_shrink));
  kv.set("lambda_grow", num(cfg.plan.lambda_grow));
  kv.set("seed", std::to_string(cfg.plan.seed));
  const Eigen::VectorXd& sig =
      (cfg.scenario == "crossing" || cfg.scenario == "corridor")
          ? cfg.vessel_sigma
          : cfg.plan.sigma;
  std::string sigma_text;
  for (Eigen::Index i = 0; i < sig.size(); ++i) {
    if (i) sigma_text += ",";
    sigma_text += num(sig[i]);
  }
  if (!sigma_text.empty()) kv.set("sigma", sigma_text);
  std::string anc;
  for (std::size_t i = 0; i < cfg.ancillaries.size(); ++i) {
    if (i) anc += ",";
    anc += cfg.ancillaries[i];
  }
  kv.set("ancillaries", anc);
  kv.set("perturb_std", num(cfg.perturb_std));
  kv.set("theta_ref", num(cfg.pendulum_cost.theta_ref));
  kv.set("goal_weight", num(cfg.ma_cost.goal_weight));
  kv.set("collision_radius", num(cfg.ma_cost.collision_radius));
  kv.set("collision_penalty", num(cfg.ma_cost.collision_penalty));
  kv.set("row_radius", num(cfg.ma_cost.row_radius));
  kv.set("row_penalty", num(cfg.ma_cost.row_penalty));
  kv.set("speed_threshold", num(cfg.ma_cost.speed_threshold));
  kv.set("arrival_radius", num(cfg.arrival_radius));
  kv.set("v_cruise", num(cfg.v_cruise));
  kv.set("slow_thrust", num(cfg.slow_thrust));
  kv.set("fast_thrust", num(cfg.fast_thrust));
  kv.set("approach", num(cfg.approach));
  kv.set("start_jitter", num(cfg.start_jitter));
  kv.set("corridor_length", num(cfg.corridor_length));
  kv.set("corridor_halfwidth", num(cfg.corridor_halfwidth));
  kv.set("narrow_halfwidth", num(cfg.narrow_halfwidth));
  kv.set("wall_clearance", num(cfg.wall_clearance));
  kv.set("wall_penalty", num(cfg.wall_penalty));
  kv.set("deadlock_speed", num(cfg.deadlock_speed));
  kv.set("deadlock_time", num(cfg.deadlock_time));
  kv.set("goal_estimate_window", num(cfg.goal_estimate_window));
  kv.set("goal_x", num(cfg.goal[0]));
  kv.set("goal_y", num(cfg.goal[1]));
  kv.set("obstacle_radius", num(cfg.goal_cost.collision_radius));
  kv.set("obstacle_penalty", num(cfg.goal_cost.collision_penalty));
  kv.set("inject_time", num(cfg.inject_time));
  kv.set("box_distance", num(cfg.box_distance));
  kv.set("box_lateral", num(cfg.box_lateral));
  kv.set("box_speed", num(cfg.box_speed));
  kv.set("box_lateral_jitter", num(cfg.box_lateral_jitter));
  kv.set("goal_tolerance", num(cfg.goal_tolerance));
  return kv;
}

}  // namespace mppi
