#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace mppi {

// Velocity-controlled unicycle. State (x, y, heading), input (v, omega).
struct UnicycleParams {
  double v_min = -1.0;      // m/s
  double v_max = 2.0;       // m/s
  double omega_max = 2.0;   // rad/s
};

inline Eigen::Vector3d unicycle_step(const Eigen::Vector3d& state,
                                     const Eigen::Vector2d& u, double dt) {
  return {state[0] + u[0] * std::cos(state[2]) * dt,
          state[1] + u[0] * std::sin(state[2]) * dt,
          state[2] + u[1] * dt};
}

// Obstacle prediction used inside rollouts.
inline Eigen::Vector2d constant_velocity_propagate(const Eigen::Vector2d& p,
                                                   const Eigen::Vector2d& v,
                                                   double t) {
  return p + v * t;
}

class UnicycleModel {
 public:
  UnicycleModel(UnicycleParams params, double dt)
      : params_(params), dt_(dt) {
    if (dt <= 0.0) throw std::invalid_argument("UnicycleModel: dt must be > 0");
  }

  int input_dim() const { return 2; }

  Eigen::VectorXd clamp_input(const Eigen::VectorXd& u) const {
    Eigen::VectorXd out(2);
    out[0] = std::clamp(u[0], params_.v_min, params_.v_max);
    out[1] = std::clamp(u[1], -params_.omega_max, params_.omega_max);
    return out;
  }

  Eigen::VectorXd step(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    return unicycle_step(x, {u[0], u[1]}, dt_);
  }

  const UnicycleParams& params() const { return params_; }
  double dt() const { return dt_; }

 private:
  UnicycleParams params_;
  double dt_;
};

}  // namespace mppi
