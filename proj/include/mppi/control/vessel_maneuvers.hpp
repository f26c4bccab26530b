#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mppi/control/riccati.hpp"
#include "mppi/core/types.hpp"
#include "mppi/dynamics/vessel.hpp"

namespace mppi {

// LQR tracker on the decoupled velocity subsystem nu_dot = -M^-1 D nu +
// M^-1 tau. Commands a generalized force from the velocity error and
// spreads it over the thrusters by pseudo-inverse allocation. Stands in
// for the robust tracker of the reference platform.
class VelocityTracker {
 public:
  VelocityTracker(const VesselParams& params, double dt,
                  const Eigen::Vector3d& q_diag = {20.0, 20.0, 8.0},
                  const Eigen::Vector3d& r_diag = {0.05, 0.05, 0.05})
      : params_(params) {
    Eigen::Matrix3d a_c = (-params.drag.cwiseQuotient(params.mass)).asDiagonal();
    Eigen::Matrix3d b_c = params.mass.cwiseInverse().asDiagonal();
    const auto [a_d, b_d] = discretize_zoh(a_c, b_c, dt);
    k_v_ = lqr_gain(a_d, b_d, Eigen::Matrix3d(q_diag.asDiagonal()),
                    Eigen::Matrix3d(r_diag.asDiagonal()))
               .k_fb;
    const Eigen::Matrix<double, 3, 4> alloc = params.allocation();
    alloc_pinv_ = alloc.transpose() *
                  (alloc * alloc.transpose()).inverse();
  }

  // nu and the reference are body-frame (surge, sway, yaw rate). The drag
  // feedforward carries the reference; feedback alone would settle short of
  // it by the ratio K/(K + D).
  Eigen::Vector4d thrust(const Eigen::Vector3d& nu,
                         const Eigen::Vector3d& nu_ref) const {
    const Eigen::Vector3d tau =
        params_.drag.cwiseProduct(nu_ref) - k_v_ * (nu - nu_ref);
    Eigen::Vector4d u = alloc_pinv_ * tau;
    for (int i = 0; i < 4; ++i)
      u[i] = std::clamp(u[i], -params_.thrust_limit[i],
                        params_.thrust_limit[i]);
    return u;
  }

  const Eigen::Matrix3d& gain() const { return k_v_; }

 private:
  VesselParams params_;
  Eigen::Matrix3d k_v_;
  Eigen::Matrix<double, 4, 3> alloc_pinv_;
};

enum class PrimitiveKind { go_slow, go_fast, braking, go_to_goal };

struct PrimitiveSpec {
  PrimitiveKind kind = PrimitiveKind::go_to_goal;
  double slow_thrust = 1.5;   // N per surge thruster
  double fast_thrust = 8.0;   // N per surge thruster
  double v_cruise = 1.5;      // m/s, go-to-goal speed cap

  void validate(const VesselParams& p) const {
    if (slow_thrust < 0.0 || fast_thrust < 0.0 || v_cruise < 0.0)
      throw std::invalid_argument("PrimitiveSpec: negative magnitude");
    if (slow_thrust > p.thrust_limit[0] || fast_thrust > p.thrust_limit[0])
      throw std::invalid_argument("PrimitiveSpec: thrust beyond limit");
  }
};

// Velocity reference for one step of the go-to-goal law: point at the
// goal, at cruise speed or slower so the remaining horizon suffices.
inline Eigen::Vector3d go_to_goal_reference(const Eigen::Vector2d& position,
                                            double heading,
                                            const Eigen::Vector2d& goal,
                                            double v_cruise,
                                            double t_remaining) {
  const Eigen::Vector2d to_goal = goal - position;
  const double dist = to_goal.norm();
  if (dist < 1e-9) return Eigen::Vector3d::Zero();
  double speed = v_cruise;
  if (t_remaining > 0.0) speed = std::min(speed, dist / t_remaining);
  const Eigen::Vector2d v_world = to_goal / dist * speed;
  // World-frame reference rotated into the body frame; heading follows
  // from the yaw-rate channel staying at zero.
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  return {c * v_world[0] + s * v_world[1], -s * v_world[0] + c * v_world[1],
          0.0};
}

// Turns a maneuver into an open-loop thrust sequence for ONE vessel by
// rolling the tracker against the nominal model. go_slow and go_fast
// bypass the tracker: they are direct constant surge-pair thrusts.
inline InputSequence primitive_sequence(const PrimitiveSpec& spec,
                                        const VelocityTracker& tracker,
                                        const VesselModel& model,
                                        const Eigen::Matrix<double, 6, 1>& x0,
                                        const Eigen::Vector2d& goal,
                                        int horizon) {
  spec.validate(model.params());
  InputSequence seq(horizon, 4);
  if (spec.kind == PrimitiveKind::go_slow ||
      spec.kind == PrimitiveKind::go_fast) {
    const double f = spec.kind == PrimitiveKind::go_slow ? spec.slow_thrust
                                                         : spec.fast_thrust;
    seq.setZero();
    seq.col(0).setConstant(f);
    seq.col(1).setConstant(f);
    return seq;
  }

  Eigen::Matrix<double, 6, 1> x = x0;
  const double dt = model.dt();
  for (int t = 0; t < horizon; ++t) {
    Eigen::Vector3d ref = Eigen::Vector3d::Zero();
    if (spec.kind == PrimitiveKind::go_to_goal) {
      ref = go_to_goal_reference(x.head<2>(), x[2], goal, spec.v_cruise,
                                 (horizon - t) * dt);
    }
    const Eigen::Vector4d u = tracker.thrust(x.tail<3>(), ref);
    seq.row(t) = u.transpose();
    x = model.step(x, u);
  }
  return seq;
}

}  // namespace mppi
