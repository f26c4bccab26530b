#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace mppi {

// Planar 3-DOF surface vessel, quarter-scale surrogate. State is
// (x, y, psi, u, v, r): world pose plus body-frame surge/sway/yaw-rate.
// Four fixed thrusters: a surge pair mounted at lateral offset +-b and a
// sway pair at longitudinal offset +-a, so the allocation matrix has full
// row rank and the vessel is fully actuated in the plane.
struct VesselParams {
  Eigen::Vector3d mass{12.0, 12.0, 1.0};   // kg, kg, kg m^2
  Eigen::Vector3d drag{6.0, 8.0, 1.2};     // linear, per axis
  double thruster_arm_long = 0.45;         // m, sway pair lever
  double thruster_arm_lat = 0.2;           // m, surge pair lever
  Eigen::Vector4d thrust_limit{10.0, 10.0, 4.0, 4.0};  // N

  // Rows: surge force, sway force, yaw moment. Columns: thrusters.
  Eigen::Matrix<double, 3, 4> allocation() const {
    Eigen::Matrix<double, 3, 4> b;
    b << 1.0, 1.0, 0.0, 0.0,
         0.0, 0.0, 1.0, 1.0,
         -thruster_arm_lat, thruster_arm_lat,
         thruster_arm_long, -thruster_arm_long;
    return b;
  }
};

// Semi-implicit Euler on M nu_dot + D nu = B u: velocities take the step
// with drag treated implicitly, then the pose integrates the new
// velocities through the body-to-world rotation.
inline Eigen::Matrix<double, 6, 1> vessel_step(
    const VesselParams& p, const Eigen::Matrix<double, 6, 1>& state,
    const Eigen::Vector4d& thrust, double dt) {
  const Eigen::Vector3d nu = state.tail<3>();
  const Eigen::Vector3d tau = p.allocation() * thrust;

  Eigen::Vector3d nu_next;
  for (int i = 0; i < 3; ++i) {
    nu_next[i] = (p.mass[i] * nu[i] + dt * tau[i]) /
                 (p.mass[i] + dt * p.drag[i]);
  }

  const double psi = state[2];
  const double c = std::cos(psi);
  const double s = std::sin(psi);
  Eigen::Matrix<double, 6, 1> next;
  next[0] = state[0] + dt * (c * nu_next[0] - s * nu_next[1]);
  next[1] = state[1] + dt * (s * nu_next[0] + c * nu_next[1]);
  next[2] = state[2] + dt * nu_next[2];
  next.tail<3>() = nu_next;
  return next;
}

class VesselModel {
 public:
  VesselModel(VesselParams params, double dt)
      : params_(std::move(params)), dt_(dt) {
    if (dt <= 0.0) throw std::invalid_argument("VesselModel: dt must be > 0");
  }

  int input_dim() const { return 4; }

  Eigen::VectorXd clamp_input(const Eigen::VectorXd& u) const {
    Eigen::VectorXd out(4);
    for (int i = 0; i < 4; ++i) {
      out[i] = std::clamp(u[i], -params_.thrust_limit[i],
                          params_.thrust_limit[i]);
    }
    return out;
  }

  Eigen::VectorXd step(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    return vessel_step(params_, x, u, dt_);
  }

  const VesselParams& params() const { return params_; }
  double dt() const { return dt_; }

 private:
  VesselParams params_;
  double dt_;
};

// n vessels planned as one joint system: states and inputs are stacked
// agent blocks. Used by the decentralized planners, each of which runs its
// own copy over its own belief of the other agents.
class JointVesselModel {
 public:
  JointVesselModel(VesselParams params, double dt, int agents)
      : single_(std::move(params), dt), agents_(agents) {
    if (agents < 1)
      throw std::invalid_argument("JointVesselModel: need at least one agent");
  }

  int input_dim() const { return 4 * agents_; }
  int agents() const { return agents_; }

  Eigen::VectorXd clamp_input(const Eigen::VectorXd& u) const {
    Eigen::VectorXd out(u.size());
    for (int i = 0; i < agents_; ++i)
      out.segment<4>(4 * i) = single_.clamp_input(u.segment<4>(4 * i));
    return out;
  }

  Eigen::VectorXd step(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    Eigen::VectorXd next(x.size());
    for (int i = 0; i < agents_; ++i) {
      next.segment<6>(6 * i) = vessel_step(
          single_.params(), x.segment<6>(6 * i), u.segment<4>(4 * i),
          single_.dt());
    }
    return next;
  }

  const VesselModel& single() const { return single_; }

 private:
  VesselModel single_;
  int agents_;
};

}  // namespace mppi
