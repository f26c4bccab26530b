#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "mppi/math/rng.hpp"

namespace mppi {

// Rotary inverted pendulum (Furuta) in the scale of the Quanser
// Qube-Servo 2. State x = (theta, alpha, theta_dot, alpha_dot) with theta
// the arm angle and alpha the pendulum angle measured from upright, so
// alpha = pi is the hanging rest. Input is motor voltage.
struct FurutaParams {
  double motor_resistance = 8.4;   // ohm
  double torque_constant = 0.042;  // N m / A, also back-EMF constant
  double arm_mass = 0.095;         // kg
  double arm_length = 0.085;       // m, pivot to pendulum axis
  double pend_mass = 0.024;        // kg
  double pend_length = 0.129;      // m, full rod length
  double rotor_inertia = 4.6e-6;   // kg m^2, motor shaft and hub
  double arm_damping = 0.0015;     // N m s
  double pend_damping = 1e-5;      // N m s
  double gravity = 9.81;           // m / s^2
  double voltage_limit = 10.0;     // V

  // Lumped terms of the manipulator form.
  double pend_com() const { return 0.5 * pend_length; }
  double arm_inertia() const {
    return rotor_inertia + arm_mass * arm_length * arm_length / 3.0;
  }
  double theta_inertia() const {  // J0: total about the vertical axis
    return arm_inertia() + pend_mass * arm_length * arm_length;
  }
  double alpha_inertia() const {  // about the pendulum pivot
    return pend_mass * pend_length * pend_length / 3.0;
  }
  double coupling() const { return pend_mass * arm_length * pend_com(); }
};

// Independent multiplicative perturbation of every physical parameter,
// factor (1 + gamma) with gamma ~ N(0, std). Gravity and the actuator
// limit stay fixed. Deterministic in (seed, run).
inline FurutaParams perturb_params(const FurutaParams& nominal,
                                   std::uint64_t seed, std::uint32_t run,
                                   double std = 0.05) {
  const CounterRng rng(seed, RngDomain::perturbation);
  FurutaParams p = nominal;
  double* fields[] = {&p.motor_resistance, &p.torque_constant, &p.arm_mass,
                      &p.arm_length,       &p.pend_mass,       &p.pend_length,
                      &p.rotor_inertia,    &p.arm_damping,     &p.pend_damping};
  std::uint32_t i = 0;
  for (double* f : fields) {
    *f *= 1.0 + std * rng.normal(run, i++, 0, 0);
  }
  return p;
}

// Mass-matrix form M(q) qdd = b(q, qd, u); returns (theta_dd, alpha_dd).
inline Eigen::Vector2d furuta_accel(const FurutaParams& p, double alpha,
                                    double theta_dot, double alpha_dot,
                                    double voltage) {
  const double j0 = p.theta_inertia();
  const double jp = p.alpha_inertia();
  const double c = p.coupling();
  const double sa = std::sin(alpha);
  const double ca = std::cos(alpha);

  const double torque = p.torque_constant *
                        (voltage - p.torque_constant * theta_dot) /
                        p.motor_resistance;

  const double m00 = j0 + jp * sa * sa;
  const double m01 = c * ca;
  const double m11 = jp;
  const double det = m00 * m11 - m01 * m01;

  const double b0 = torque - p.arm_damping * theta_dot -
                    2.0 * jp * sa * ca * theta_dot * alpha_dot +
                    c * sa * alpha_dot * alpha_dot;
  const double b1 = -p.pend_damping * alpha_dot +
                    jp * sa * ca * theta_dot * theta_dot +
                    p.pend_mass * p.gravity * p.pend_com() * sa;

  return {(m11 * b0 - m01 * b1) / det, (m00 * b1 - m01 * b0) / det};
}

// One RK4 step of the full nonlinear model.
inline Eigen::Vector4d furuta_step(const FurutaParams& p,
                                   const Eigen::Vector4d& x, double voltage,
                                   double dt) {
  const auto deriv = [&](const Eigen::Vector4d& s) -> Eigen::Vector4d {
    const Eigen::Vector2d acc = furuta_accel(p, s[1], s[2], s[3], voltage);
    return {s[2], s[3], acc[0], acc[1]};
  };
  const Eigen::Vector4d k1 = deriv(x);
  const Eigen::Vector4d k2 = deriv(x + 0.5 * dt * k1);
  const Eigen::Vector4d k3 = deriv(x + 0.5 * dt * k2);
  const Eigen::Vector4d k4 = deriv(x + dt * k3);
  return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Total mechanical energy, zero at the upright rest. The hanging rest sits
// at -2 m_p g l_p.
inline double furuta_energy(const FurutaParams& p, const Eigen::Vector4d& x) {
  const double jp = p.alpha_inertia();
  const double c = p.coupling();
  const double sa = std::sin(x[1]);
  const double ca = std::cos(x[1]);
  const double kinetic = 0.5 * (p.theta_inertia() + jp * sa * sa) * x[2] * x[2] +
                         c * ca * x[2] * x[3] + 0.5 * jp * x[3] * x[3];
  const double potential = p.pend_mass * p.gravity * p.pend_com() * (ca - 1.0);
  return kinetic + potential;
}

// Energy of the pendulum link alone, zero at the upright rest. Unlike the
// total, this excludes arm kinetic terms, so regulating it to zero cannot be
// satisfied by spinning the arm.
inline double furuta_pendulum_energy(const FurutaParams& p,
                                     const Eigen::Vector4d& x) {
  return 0.5 * p.alpha_inertia() * x[3] * x[3] +
         p.pend_mass * p.gravity * p.pend_com() * (std::cos(x[1]) - 1.0);
}

// Continuous-time linearization about the upright equilibrium
// (x = 0, u = 0): xdot = A x + B u. Back-EMF folds into arm damping.
inline std::pair<Eigen::Matrix4d, Eigen::Vector4d> furuta_linearize(
    const FurutaParams& p) {
  const double j0 = p.theta_inertia();
  const double jp = p.alpha_inertia();
  const double c = p.coupling();
  const double det = j0 * jp - c * c;
  const double mgl = p.pend_mass * p.gravity * p.pend_com();
  const double dr = p.arm_damping +
                    p.torque_constant * p.torque_constant / p.motor_resistance;
  const double tu = p.torque_constant / p.motor_resistance;

  Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
  a(0, 2) = 1.0;
  a(1, 3) = 1.0;
  a(2, 1) = -c * mgl / det;
  a(2, 2) = -jp * dr / det;
  a(2, 3) = c * p.pend_damping / det;
  a(3, 1) = j0 * mgl / det;
  a(3, 2) = c * dr / det;
  a(3, 3) = -j0 * p.pend_damping / det;

  Eigen::Vector4d b{0.0, 0.0, jp * tu / det, -c * tu / det};
  return {a, b};
}

// Planner-facing adapter: fixed step size, voltage saturation.
class FurutaModel {
 public:
  FurutaModel(FurutaParams params, double dt)
      : params_(std::move(params)), dt_(dt) {
    if (dt <= 0.0) throw std::invalid_argument("FurutaModel: dt must be > 0");
  }

  int input_dim() const { return 1; }

  Eigen::VectorXd clamp_input(const Eigen::VectorXd& u) const {
    Eigen::VectorXd out(1);
    out[0] = std::clamp(u[0], -params_.voltage_limit, params_.voltage_limit);
    return out;
  }

  Eigen::VectorXd step(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    return furuta_step(params_, x, u[0], dt_);
  }

  const FurutaParams& params() const { return params_; }
  double dt() const { return dt_; }

 private:
  FurutaParams params_;
  double dt_;
};

}  // namespace mppi
