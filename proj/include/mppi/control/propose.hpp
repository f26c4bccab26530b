#pragma once

#include <Eigen/Dense>

#include "mppi/core/types.hpp"

namespace mppi {

// Rolls a feedback controller forward against the nominal model and
// records what it commands: the closed-loop policy becomes an open-loop
// InputSequence the planner can mix with its Gaussian samples. The
// controller is taken by value, so stateful pieces (the LQI integrator)
// evolve on a copy and the live controller is untouched.
template <class Controller, class Dynamics>
InputSequence propose(Controller controller, const Eigen::VectorXd& x0,
                      int horizon, const Dynamics& dynamics) {
  InputSequence seq(horizon, dynamics.input_dim());
  Eigen::VectorXd x = x0;
  for (int t = 0; t < horizon; ++t) {
    const Eigen::VectorXd u = controller.input(x);
    seq.row(t) = u.transpose();
    x = dynamics.step(x, u);
  }
  return seq;
}

}  // namespace mppi
