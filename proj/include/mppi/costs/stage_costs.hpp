#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace mppi {

// Difference a - b wrapped into (-pi, pi].
inline double wrap_angle(double a, double b = 0.0) {
  const double two_pi = 2.0 * M_PI;
  double d = std::fmod(a - b, two_pi);
  if (d <= -M_PI) d += two_pi;
  if (d > M_PI) d -= two_pi;
  return d;
}

struct PendulumCostConfig {
  double theta_ref = 1.0;  // rad
  double alpha_ref = 0.0;  // rad
};

// C_p(x) = 100((theta - theta_r)^2 + (alpha - alpha_r)^2) + thetad^2 +
// 2 alphad^2, with the alpha error on the wrapped difference so both
// swing-up directions cost the same.
inline double pendulum_running_cost(const Eigen::Vector4d& x,
                                    const PendulumCostConfig& cfg) {
  const double e_theta = x[0] - cfg.theta_ref;
  const double e_alpha = wrap_angle(x[1], cfg.alpha_ref);
  return 100.0 * (e_theta * e_theta + e_alpha * e_alpha) + x[2] * x[2] +
         2.0 * x[3] * x[3];
}

struct GoalObstacleCostConfig {
  Eigen::Vector2d goal{0.0, 0.0};
  double collision_radius = 0.5;    // m
  double collision_penalty = 100.0;

  void validate() const {
    if (!(collision_radius > 0.0))
      throw std::invalid_argument("GoalObstacleCostConfig: radius must be > 0");
  }
};

// C(x) = ||p_r - p_g|| + penalty * (||p_r - p_b|| < radius); the radius
// boundary itself is not penalized.
inline double goal_obstacle_cost(const Eigen::Vector2d& p_robot,
                                 const Eigen::Vector2d& p_box,
                                 const GoalObstacleCostConfig& cfg) {
  double cost = (p_robot - cfg.goal).norm();
  if ((p_robot - p_box).norm() < cfg.collision_radius)
    cost += cfg.collision_penalty;
  return cost;
}

struct MultiAgentCostConfig {
  double goal_weight = 1.0;
  double collision_radius = 1.0;     // d_safe, m
  double collision_penalty = 2000.0;
  double row_radius = 6.0;           // right-of-way lookout, m
  // Per step. Must be stiff enough that a brief violation never beats the
  // progress it buys, or the planner rides the yield-speed boundary.
  double row_penalty = 200.0;
  double speed_threshold = 0.3;      // m/s; below this the ego is yielding
  // Yaw-rate regularizer. Nothing else in the cost opposes spinning, and a
  // plan that winds up the heading poisons every other agent's estimate of
  // where this one is going.
  double spin_weight = 0.0;

  void validate() const {
    if (goal_weight < 0.0 || collision_penalty < 0.0 || row_penalty < 0.0 ||
        spin_weight < 0.0)
      throw std::invalid_argument("MultiAgentCostConfig: negative weight");
    if (!(collision_radius > 0.0) || !(row_radius > 0.0))
      throw std::invalid_argument("MultiAgentCostConfig: radii must be > 0");
  }
};

// Per-agent planar view of a joint vessel state: position, heading, speed.
struct AgentPose {
  Eigen::Vector2d position;
  double heading;
  double speed;
};

// True when `other` holds right of way over `ego`: inside the lookout
// radius, in ego's starboard sector (relative bearing in (0, 112.5] deg
// clockwise from the bow), while ego is still making way. The sector test
// runs on dot and cross products: strictly starboard means the cross
// product of heading and offset is negative, and bearing <= 112.5 deg
// means the projection onto the heading stays above cos(112.5 deg).
inline bool right_of_way_conflict(const AgentPose& ego, const AgentPose& other,
                                  const MultiAgentCostConfig& cfg) {
  if (ego.speed <= cfg.speed_threshold) return false;
  const Eigen::Vector2d rel = other.position - ego.position;
  const double dist = rel.norm();
  if (dist >= cfg.row_radius || dist == 0.0) return false;
  const double hx = std::cos(ego.heading);
  const double hy = std::sin(ego.heading);
  const double cross = hx * rel[1] - hy * rel[0];
  if (cross >= 0.0) return false;
  constexpr double kSectorCos = -0.38268343236508978;  // cos(112.5 deg)
  return hx * rel[0] + hy * rel[1] >= kSectorCos * dist;
}

// Per-agent stage cost over a joint configuration: distance to own goal,
// symmetric collision penalty per too-close pair, and the yielding rule.
inline std::vector<double> multi_agent_cost(
    const std::vector<AgentPose>& agents,
    const std::vector<Eigen::Vector2d>& goals,
    const MultiAgentCostConfig& cfg) {
  if (agents.size() != goals.size())
    throw std::invalid_argument("multi_agent_cost: agent/goal count mismatch");
  const std::size_t n = agents.size();
  std::vector<double> costs(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    costs[i] += cfg.goal_weight * (agents[i].position - goals[i]).norm();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dist = (agents[i].position - agents[j].position).norm();
      if (dist < cfg.collision_radius) costs[i] += cfg.collision_penalty;
      if (right_of_way_conflict(agents[i], agents[j], cfg))
        costs[i] += cfg.row_penalty;
    }
  }
  return costs;
}

}  // namespace mppi
