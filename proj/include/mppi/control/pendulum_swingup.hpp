#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "mppi/control/riccati.hpp"
#include "mppi/costs/stage_costs.hpp"
#include "mppi/dynamics/furuta.hpp"

namespace mppi {

struct SwitchingConfig {
  double alpha_catch = 0.2;      // rad, LQR capture region
  double alpha_track = 0.05;     // rad, LQI region
  double alpha_dot_track = 0.1;  // rad/s, LQI region

  void validate() const {
    if (!(0.0 < alpha_track && alpha_track < alpha_catch))
      throw std::invalid_argument(
          "SwitchingConfig: need 0 < alpha_track < alpha_catch");
  }
};

// State error against the upright reference, pendulum angle wrapped so the
// linear laws see the nearest upright.
inline Eigen::Vector4d upright_error(const Eigen::Vector4d& x,
                                     double theta_ref) {
  return {x[0] - theta_ref, wrap_angle(x[1]), x[2], x[3]};
}

// u = -K (x - x_ref), saturated at the voltage limit.
class LqrController {
 public:
  LqrController(GainMatrix gain, double theta_ref, double voltage_limit)
      : k_(std::move(gain.k_fb)),
        theta_ref_(theta_ref),
        voltage_limit_(voltage_limit) {
    if (k_.rows() != 1 || k_.cols() != 4)
      throw std::invalid_argument("LqrController: gain must be 1x4");
  }

  Eigen::VectorXd input(const Eigen::Vector4d& x) {
    const double u = -(k_ * upright_error(x, theta_ref_))(0);
    return Eigen::VectorXd::Constant(
        1, std::clamp(u, -voltage_limit_, voltage_limit_));
  }

  double theta_ref() const { return theta_ref_; }

 private:
  Eigen::MatrixXd k_;
  double theta_ref_;
  double voltage_limit_;
};

// u = -K_x (x - x_ref) - K_i z with z the accumulated arm tracking error;
// the integrator advances after each commanded input.
class LqiController {
 public:
  LqiController(GainMatrix gain, double theta_ref, double dt,
                double voltage_limit)
      : k_(std::move(gain.k_fb)),
        theta_ref_(theta_ref),
        dt_(dt),
        voltage_limit_(voltage_limit) {
    if (k_.rows() != 1 || k_.cols() != 5)
      throw std::invalid_argument("LqiController: gain must be 1x5");
  }

  Eigen::VectorXd input(const Eigen::Vector4d& x) {
    const Eigen::Vector4d err = upright_error(x, theta_ref_);
    const double u = -(k_.leftCols<4>() * err)(0) - k_(0, 4) * integral_;
    integral_ += dt_ * err[0];
    return Eigen::VectorXd::Constant(
        1, std::clamp(u, -voltage_limit_, voltage_limit_));
  }

  // Integrator advance for a state the loop observed but this controller
  // did not command (the scenario owns when tracking error accumulates).
  void observe(const Eigen::Vector4d& x) {
    integral_ += dt_ * (x[0] - theta_ref_);
  }

  double integral() const { return integral_; }
  void reset_integral() { integral_ = 0.0; }

 private:
  Eigen::MatrixXd k_;
  double theta_ref_;
  double dt_;
  double voltage_limit_;
  double integral_ = 0.0;
};

struct EbcConfig {
  double gain = 16000.0;   // V per joule of energy error
  double kick = 2.0;       // V, symmetry breaker near the hanging rest
  double kick_rate = 0.02; // rad/s, |alpha_dot| below which the kick fires
};

// Energy shaping: u = clamp(k_e (E - E_upright) sign(alpha_dot cos alpha)).
// Pumps the pendulum-link energy toward the upright level; a fixed kick
// breaks the dead point at the hanging rest. The gain is deliberately stiff:
// near the homoclinic orbit the drive shrinks with the energy error, and the
// residual error where pumping balances damper losses scales inversely with
// the gain. It must be small enough that the swing apex lands inside the
// catch cone.
inline double ebc_input(const Eigen::Vector4d& x, const FurutaParams& p,
                        const EbcConfig& cfg) {
  const double alpha = wrap_angle(x[1]);
  const double near_hanging = std::abs(wrap_angle(x[1], M_PI));
  if (std::abs(x[3]) < cfg.kick_rate && near_hanging < 0.5) return cfg.kick;
  const double direction = x[3] * std::cos(alpha);
  const double sign = direction > 0.0 ? 1.0 : (direction < 0.0 ? -1.0 : 0.0);
  const double u = cfg.gain * furuta_pendulum_energy(p, x) * sign;
  return std::clamp(u, -p.voltage_limit, p.voltage_limit);
}

class EbcController {
 public:
  EbcController(FurutaParams params, EbcConfig cfg)
      : params_(std::move(params)), cfg_(cfg) {}

  Eigen::VectorXd input(const Eigen::Vector4d& x) {
    return Eigen::VectorXd::Constant(1, ebc_input(x, params_, cfg_));
  }

 private:
  FurutaParams params_;
  EbcConfig cfg_;
};

// Region law, evaluated top to bottom:
//   LQI  if |alpha| < alpha_track and |alpha_dot| < alpha_dot_track
//   LQR  if |alpha| < alpha_catch
//   EBC  otherwise
class SwitchingController {
 public:
  SwitchingController(LqrController lqr, LqiController lqi, EbcController ebc,
                      SwitchingConfig cfg)
      : lqr_(std::move(lqr)),
        lqi_(std::move(lqi)),
        ebc_(std::move(ebc)),
        cfg_(cfg) {
    cfg.validate();
  }

  Eigen::VectorXd input(const Eigen::Vector4d& x) {
    const double alpha = std::abs(wrap_angle(x[1]));
    if (alpha < cfg_.alpha_track && std::abs(x[3]) < cfg_.alpha_dot_track)
      return lqi_.input(x);
    if (alpha < cfg_.alpha_catch) return lqr_.input(x);
    return ebc_.input(x);
  }

 private:
  LqrController lqr_;
  LqiController lqi_;
  EbcController ebc_;
  SwitchingConfig cfg_;
};

// Feedback synthesis on the nominal model discretized at the control rate.
// Arm states are weighted lightly and the pendulum rate heavily so the catch
// basin admits the arm velocities the swing-up hands over; tight arm weights
// shrink the basin to near-stationary entries.
struct PendulumSynthesis {
  Eigen::Matrix4d q = Eigen::Vector4d{0.2, 2400.0, 0.05, 150.0}.asDiagonal();
  double r = 0.05;
  double q_integral = 10.0;
};

inline GainMatrix pendulum_lqr_gain(const FurutaParams& p, double dt,
                                    const PendulumSynthesis& syn = {}) {
  const auto [a, b] = furuta_linearize(p);
  const auto [a_d, b_d] = discretize_zoh(a, b, dt);
  return lqr_gain(a_d, b_d, syn.q,
                  Eigen::MatrixXd::Constant(1, 1, syn.r));
}

inline GainMatrix pendulum_lqi_gain(const FurutaParams& p, double dt,
                                    const PendulumSynthesis& syn = {}) {
  const auto [a, b] = furuta_linearize(p);
  const auto [a_d, b_d] = discretize_zoh(a, b, dt);
  Eigen::MatrixXd q_aug = Eigen::MatrixXd::Zero(5, 5);
  q_aug.topLeftCorner<4, 4>() = syn.q;
  q_aug(4, 4) = syn.q_integral;
  Eigen::RowVectorXd c_track(4);
  c_track << 1.0, 0.0, 0.0, 0.0;
  return lqi_gain(a_d, b_d, c_track, dt, q_aug,
                  Eigen::MatrixXd::Constant(1, 1, syn.r));
}

}  // namespace mppi
