#pragma once

#include <Eigen/Dense>

namespace mppi {

// Total cost of a simulated trajectory: stage costs summed over steps
// 1..T_H. The initial state is excluded; it is identical for every sample
// in a batch and would cancel in the softmax anyway.
template <class StageCost>
double rollout_cost(const Eigen::MatrixXd& trajectory,
                    const StageCost& stage) {
  double total = 0.0;
  for (int t = 1; t < trajectory.rows(); ++t) {
    total += stage(trajectory.row(t).transpose(), t);
  }
  return total;
}

}  // namespace mppi
