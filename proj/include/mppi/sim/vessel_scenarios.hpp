#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mppi/control/propose.hpp"
#include "mppi/control/vessel_maneuvers.hpp"
#include "mppi/core/planner.hpp"
#include "mppi/costs/stage_costs.hpp"
#include "mppi/dynamics/vessel.hpp"
#include "mppi/math/rng.hpp"
#include "mppi/sim/episode_log.hpp"
#include "mppi/sim/scenario_config.hpp"

namespace mppi {

struct Rect {
  double x0, x1, y0, y1;
};

// Distance from p to the rectangle boundary: positive outside, negative
// inside (penetration depth).
inline double rect_signed_distance(const Eigen::Vector2d& p, const Rect& r) {
  const double dx = std::max({r.x0 - p[0], 0.0, p[0] - r.x1});
  const double dy = std::max({r.y0 - p[1], 0.0, p[1] - r.y1});
  if (dx > 0.0 || dy > 0.0) return std::sqrt(dx * dx + dy * dy);
  const double ex = std::min(p[0] - r.x0, r.x1 - p[0]);
  const double ey = std::min(p[1] - r.y0, r.y1 - p[1]);
  return -std::min(ex, ey);
}

// Planar world the vessels move in: wall rectangles plus a bounding box
// that goal estimates are clipped into. The open crossing has no walls.
struct VesselWorld {
  Eigen::Vector2d lo{-1e9, -1e9};
  Eigen::Vector2d hi{1e9, 1e9};
  std::vector<Rect> walls;

  double clearance(const Eigen::Vector2d& p) const {
    double c = std::numeric_limits<double>::infinity();
    for (const auto& r : walls) c = std::min(c, rect_signed_distance(p, r));
    return c;
  }

  Eigen::Vector2d clip(Eigen::Vector2d p) const {
    p[0] = std::clamp(p[0], lo[0], hi[0]);
    p[1] = std::clamp(p[1], lo[1], hi[1]);
    return p;
  }
};

struct VesselScenarioSetup {
  std::vector<Eigen::Matrix<double, 6, 1>> starts;
  std::vector<Eigen::Vector2d> goals;
  VesselWorld world;
};

// What one decentralized agent believes another is headed for: the
// observed velocity extrapolated a fixed window ahead and clipped to the
// map. A quasi-stationary vessel is predicted to stay where it is, which
// is exactly the assumption that makes simultaneous cold starts risky.
inline Eigen::Vector2d estimate_goal(const Eigen::Matrix<double, 6, 1>& state,
                                     const VesselWorld& world, double window) {
  const double c = std::cos(state[2]);
  const double s = std::sin(state[2]);
  const Eigen::Vector2d v_world{c * state[3] - s * state[4],
                                s * state[3] + c * state[4]};
  if (v_world.norm() < 0.05) return state.head<2>();
  return world.clip(state.head<2>() + window * v_world);
}

inline AgentPose agent_pose(const Eigen::Matrix<double, 6, 1>& state) {
  return {state.head<2>(), state[2],
          std::hypot(state[3], state[4])};
}

// Two vessels on perpendicular routes through a shared intersection. The
// northbound vessel approaches from the eastbound one's starboard side,
// so the eastbound vessel must yield. Start positions get an along-track
// jitter keyed by (experiment seed, run) only.
inline VesselScenarioSetup crossing_setup(const ScenarioConfig& cfg, int run) {
  const CounterRng rng(cfg.plan.seed, RngDomain::scenario);
  const auto jitter = [&](int agent) {
    return (2.0 * rng.uniform(static_cast<std::uint32_t>(run),
                              static_cast<std::uint32_t>(agent), 0, 0) -
            1.0) *
           cfg.start_jitter;
  };
  VesselScenarioSetup setup;
  Eigen::Matrix<double, 6, 1> a = Eigen::Matrix<double, 6, 1>::Zero();
  a[0] = -cfg.approach + jitter(0);
  Eigen::Matrix<double, 6, 1> b = Eigen::Matrix<double, 6, 1>::Zero();
  b[1] = -cfg.approach + jitter(1);
  b[2] = M_PI / 2.0;
  setup.starts = {a, b};
  setup.goals = {{cfg.approach, 0.0}, {0.0, cfg.approach}};
  setup.world.lo = {-cfg.approach - 2.0, -cfg.approach - 2.0};
  setup.world.hi = {cfg.approach + 2.0, cfg.approach + 2.0};
  return setup;
}

// Four vessels in a walled corridor with two narrow sections. Sides and
// lanes are shuffled per (seed, run); two agents travel each direction.
inline VesselScenarioSetup corridor_setup(const ScenarioConfig& cfg, int run) {
  const CounterRng rng(cfg.plan.seed, RngDomain::scenario);
  const auto shuffle4 = [&](std::array<double, 4> items, std::uint32_t salt) {
    for (int i = 3; i > 0; --i) {
      const double u = rng.uniform(static_cast<std::uint32_t>(run),
                                   static_cast<std::uint32_t>(100 + i), salt, 0);
      const int j = std::min(static_cast<int>(u * (i + 1)), i);
      std::swap(items[i], items[j]);
    }
    return items;
  };

  const std::array<double, 4> sides =
      shuffle4({0.0, 0.0, 1.0, 1.0}, 0);
  const std::array<double, 4> start_lanes =
      shuffle4({-3.0, -1.0, 1.0, 3.0}, 1);
  const std::array<double, 4> goal_lanes =
      shuffle4({-3.0, -1.0, 1.0, 3.0}, 2);

  const double length = cfg.corridor_length;
  VesselScenarioSetup setup;
  for (int i = 0; i < 4; ++i) {
    Eigen::Matrix<double, 6, 1> x = Eigen::Matrix<double, 6, 1>::Zero();
    const bool from_left = sides[i] < 0.5;
    x[0] = from_left ? 1.5 : length - 1.5;
    x[1] = start_lanes[i];
    x[2] = from_left ? 0.0 : M_PI;
    setup.starts.push_back(x);
    setup.goals.push_back(
        {from_left ? length - 1.5 : 1.5, goal_lanes[i]});
  }

  const double hw = cfg.corridor_halfwidth;
  const double nw = cfg.narrow_halfwidth;
  auto& walls = setup.world.walls;
  walls.push_back({-5.0, length + 5.0, hw, hw + 4.0});
  walls.push_back({-5.0, length + 5.0, -hw - 4.0, -hw});
  const double n1 = 0.25 * length;
  const double n2 = 0.625 * length;
  walls.push_back({n1, n1 + 4.0, nw, hw});
  walls.push_back({n1, n1 + 4.0, -hw, -nw});
  walls.push_back({n2, n2 + 4.0, nw, hw});
  walls.push_back({n2, n2 + 4.0, -hw, -nw});
  setup.world.lo = {0.0, -hw};
  setup.world.hi = {length, hw};
  return setup;
}

// Joint stage cost over the stacked vessel states: the per-agent
// multi-agent cost summed over agents, plus a wall-clearance penalty per
// agent. The wall term ramps up linearly from twice the hull clearance,
// reaching wall_penalty at the hull line and growing with penetration; a
// flat penalty saturates every sample near a narrow passage, which blows
// up the temperature autotune and leaves the planner unable to rank
// samples at all. Kept allocation-free because it runs in the rollout
// hot path.
inline double joint_stage_cost(const Eigen::VectorXd& xs, int n,
                               const std::array<Eigen::Vector2d, 8>& goals,
                               const MultiAgentCostConfig& mac,
                               const VesselWorld& world,
                               double wall_clearance, double wall_penalty) {
  std::array<AgentPose, 8> poses;
  for (int a = 0; a < n; ++a) {
    poses[a] = {xs.segment<2>(6 * a), xs[6 * a + 2],
                std::hypot(xs[6 * a + 3], xs[6 * a + 4])};
  }
  const double standoff = 2.0 * wall_clearance;
  double total = 0.0;
  for (int a = 0; a < n; ++a) {
    total += mac.goal_weight * (poses[a].position - goals[a]).norm();
    total += mac.spin_weight * xs[6 * a + 5] * xs[6 * a + 5];
    if (!world.walls.empty()) {
      const double c = world.clearance(poses[a].position);
      if (c < standoff)
        total += wall_penalty * (standoff - c) / (standoff - wall_clearance);
    }
    for (int b = 0; b < n; ++b) {
      if (b == a) continue;
      if ((poses[a].position - poses[b].position).norm() <
          mac.collision_radius)
        total += mac.collision_penalty;
      if (right_of_way_conflict(poses[a], poses[b], mac))
        total += mac.row_penalty;
    }
  }
  return total;
}

inline PrimitiveSpec primitive_for(const std::string& name,
                                   const ScenarioConfig& cfg) {
  PrimitiveSpec spec;
  spec.slow_thrust = cfg.slow_thrust;
  spec.fast_thrust = cfg.fast_thrust;
  spec.v_cruise = cfg.v_cruise;
  if (name == "go_slow") spec.kind = PrimitiveKind::go_slow;
  else if (name == "go_fast") spec.kind = PrimitiveKind::go_fast;
  else if (name == "braking") spec.kind = PrimitiveKind::braking;
  else if (name == "go_to_goal") spec.kind = PrimitiveKind::go_to_goal;
  else throw std::invalid_argument("vessel: unknown ancillary " + name);
  return spec;
}

// Decentralized interaction-aware episode over any agent setup. Each
// agent plans in the joint input space: its own channels perturb its
// shifted plan while the other agents' channels follow fresh go-to-goal
// proposals toward estimated goals; only the ego slice of the optimized
// joint plan is executed. All plants use nominal parameters.
inline EpisodeLog run_vessel_episode(const ScenarioConfig& cfg,
                                     Variant variant, int run_index,
                                     const VesselScenarioSetup& setup,
                                     int jobs = 1) {
  cfg.validate();
  if (variant == Variant::switching)
    throw std::invalid_argument("vessel scenarios have no switching variant");
  const int n = static_cast<int>(setup.starts.size());
  if (n < 1 || n > 8)
    throw std::invalid_argument("vessel episode: 1..8 agents supported");
  if (setup.goals.size() != setup.starts.size())
    throw std::invalid_argument("vessel episode: starts/goals mismatch");
  if (cfg.vessel_sigma.size() != 4)
    throw std::invalid_argument("vessel episode: need 4 sigma channels");

  const double dt = cfg.dt();
  const VesselParams vparams;
  const VesselModel model(vparams, dt);
  const JointVesselModel joint(vparams, dt, n);
  const VelocityTracker tracker(vparams, dt);
  const int horizon = cfg.plan.horizon;

  const std::uint64_t run_seed = derive_seed(cfg.plan.seed, run_index);
  std::vector<Planner> planners;
  planners.reserve(n);
  for (int i = 0; i < n; ++i) {
    PlanConfig plan = cfg.plan;
    plan.sigma = Eigen::VectorXd(4 * n);
    for (int j = 0; j < n; ++j) plan.sigma.segment<4>(4 * j) = cfg.vessel_sigma;
    plan.seed = derive_seed(run_seed, 1000 + i);
    plan.ancillary_count =
        variant == Variant::biased ? static_cast<int>(cfg.ancillaries.size())
                                   : 0;
    planners.emplace_back(plan);
  }

  EpisodeLog log;
  log.scenario = cfg.scenario;
  log.variant = to_string(variant);
  log.seed = cfg.plan.seed;
  log.run_index = run_index;
  log.dt = dt;
  log.agent_count = n;

  std::vector<Eigen::Matrix<double, 6, 1>> x = setup.starts;
  std::vector<bool> arrived(n, false);
  const VesselWorld& world = setup.world;
  const MultiAgentCostConfig& mac = cfg.ma_cost;
  double quiet_time = 0.0;

  // Plant-side running cost: the same multi-agent cost the planners
  // optimize, evaluated with the true goals.
  const auto plant_cost = [&]() {
    std::vector<AgentPose> poses;
    poses.reserve(n);
    for (int i = 0; i < n; ++i) poses.push_back(agent_pose(x[i]));
    double total = 0.0;
    for (double c : multi_agent_cost(poses, setup.goals, mac)) total += c;
    return total;
  };

  const auto all_arrived = [&]() {
    for (int i = 0; i < n; ++i)
      if (!arrived[i]) return false;
    return true;
  };

  for (int step = 0; step < cfg.episode_steps && !all_arrived(); ++step) {
    Eigen::VectorXd joint_x(6 * n);
    for (int i = 0; i < n; ++i) joint_x.segment<6>(6 * i) = x[i];

    Eigen::VectorXd command = Eigen::VectorXd::Zero(4 * n);
    std::vector<StepDiagnostics> diags;

    for (int i = 0; i < n; ++i) {
      if (arrived[i]) continue;

      std::array<Eigen::Vector2d, 8> goals_est;
      for (int j = 0; j < n; ++j) {
        goals_est[j] = j == i ? setup.goals[i]
                              : estimate_goal(x[j], world,
                                              cfg.goal_estimate_window);
      }

      std::vector<InputSequence> other_seq(n);
      InputSequence& nominal = planners[i].nominal();
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        PrimitiveSpec gtg = primitive_for("go_to_goal", cfg);
        other_seq[j] = primitive_sequence(gtg, tracker, model, x[j],
                                          goals_est[j], horizon);
        nominal.block(0, 4 * j, horizon, 4) = other_seq[j];
      }

      std::vector<InputSequence> proposals;
      if (variant == Variant::biased) {
        proposals.reserve(cfg.ancillaries.size());
        for (const auto& name : cfg.ancillaries) {
          const InputSequence ego_seq =
              primitive_sequence(primitive_for(name, cfg), tracker, model,
                                 x[i], setup.goals[i], horizon);
          InputSequence joint_seq(horizon, 4 * n);
          for (int j = 0; j < n; ++j) {
            joint_seq.block(0, 4 * j, horizon, 4) =
                j == i ? ego_seq : other_seq[j];
          }
          proposals.push_back(std::move(joint_seq));
        }
      }

      // Joint stage cost under this agent's goal beliefs.
      const auto stage = [&, goals_est](const Eigen::VectorXd& xs, int) {
        return joint_stage_cost(xs, n, goals_est, mac, world,
                                cfg.wall_clearance, cfg.wall_penalty);
      };

      const StepResult res = planners[i].step(joint_x, joint, stage,
                                              proposals, jobs);
      command.segment<4>(4 * i) = res.command.segment<4>(4 * i);
      diags.push_back(res.diag);
    }

    StepRecord rec;
    rec.step = step;
    rec.state = joint_x;
    rec.command = command;
    rec.diag = std::move(diags);
    for (int i = 0; i < n; ++i) rec.positions.push_back(x[i].head<2>());
    rec.stage_cost = plant_cost();
    log.steps.push_back(std::move(rec));

    for (int i = 0; i < n; ++i)
      x[i] = model.step(x[i], command.segment<4>(4 * i));

    // Events on the post-step states.
    bool fatal = false;
    for (int i = 0; i < n && !fatal; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if ((x[i].head<2>() - x[j].head<2>()).norm() < mac.collision_radius) {
          log.add_event(step, "collision", i);
          log.outcome = Outcome::collision;
          fatal = true;
          break;
        }
      }
      if (!fatal && !world.walls.empty() &&
          world.clearance(x[i].head<2>()) < cfg.wall_clearance) {
        log.add_event(step, "collision", i);
        log.outcome = Outcome::collision;
        fatal = true;
      }
    }
    if (fatal) break;

    for (int i = 0; i < n; ++i) {
      if (arrived[i]) continue;
      const AgentPose ego = agent_pose(x[i]);
      for (int j = 0; j < n; ++j) {
        if (j != i && right_of_way_conflict(ego, agent_pose(x[j]), mac)) {
          log.add_event(step, "rule_violation", i);
          break;
        }
      }
    }

    for (int i = 0; i < n; ++i) {
      if (!arrived[i] &&
          (x[i].head<2>() - setup.goals[i]).norm() < cfg.arrival_radius) {
        arrived[i] = true;
        log.add_event(step + 1, "goal_reached", i);
      }
    }

    if (!all_arrived()) {
      bool all_quiet = true;
      for (int i = 0; i < n; ++i) {
        if (!arrived[i] && std::hypot(x[i][3], x[i][4]) >= cfg.deadlock_speed)
          all_quiet = false;
      }
      quiet_time = all_quiet ? quiet_time + dt : 0.0;
      if (quiet_time >= cfg.deadlock_time) {
        log.add_event(step, "deadlock");
        log.outcome = Outcome::deadlock;
        break;
      }
    }
  }

  Eigen::VectorXd final_state(6 * n);
  for (int i = 0; i < n; ++i) final_state.segment<6>(6 * i) = x[i];
  log.final_state = final_state;
  log.final_stage_cost = plant_cost();
  if (log.outcome != Outcome::collision && log.outcome != Outcome::deadlock)
    log.outcome = all_arrived() ? Outcome::success : Outcome::timeout;
  return log;
}

inline EpisodeLog run_crossing_episode(const ScenarioConfig& cfg,
                                       Variant variant, int run_index,
                                       int jobs = 1) {
  return run_vessel_episode(cfg, variant, run_index,
                            crossing_setup(cfg, run_index), jobs);
}

inline EpisodeLog run_corridor_episode(const ScenarioConfig& cfg,
                                       Variant variant, int run_index,
                                       int jobs = 1) {
  return run_vessel_episode(cfg, variant, run_index,
                            corridor_setup(cfg, run_index), jobs);
}

}  // namespace mppi
