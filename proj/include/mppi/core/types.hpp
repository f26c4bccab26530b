#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>

namespace mppi {

// A horizon-length sequence of control inputs. Row t is the m-dimensional
// input applied at step t.
using InputSequence = Eigen::MatrixXd;

// Where a sample came from: ancillary controller j, or Gaussian noise
// around the shifted nominal plan.
struct SampleSource {
  int ancillary = -1;  // -1 = gaussian
  bool is_ancillary() const { return ancillary >= 0; }
};

struct PlanConfig {
  int samples = 100;        // K
  int ancillary_count = 0;  // J, 0 <= J < K
  int horizon = 50;         // T_H steps
  double dt = 0.02;         // step duration [s]
  Eigen::VectorXd sigma;    // per-channel sampling std, length m, all > 0
  double lambda0 = 1.0;     // initial inverse temperature
  double eta_min = 2.0;     // autotune band, 0 < eta_min < eta_max <= K
  double eta_max = 5.0;
  std::uint64_t seed = 0;
  double lambda_shrink = 0.9;  // applied when eta > eta_max
  double lambda_grow = 1.2;    // applied when eta < eta_min
  double lambda_max = 1e9;     // autotune ceiling

  int input_dim() const { return static_cast<int>(sigma.size()); }

  void validate() const {
    if (samples < 1) throw std::invalid_argument("PlanConfig: samples < 1");
    if (ancillary_count < 0 || ancillary_count >= samples)
      throw std::invalid_argument("PlanConfig: need 0 <= J < K");
    if (horizon < 1) throw std::invalid_argument("PlanConfig: horizon < 1");
    if (dt <= 0.0) throw std::invalid_argument("PlanConfig: dt <= 0");
    if (sigma.size() == 0 || (sigma.array() <= 0.0).any())
      throw std::invalid_argument("PlanConfig: sigma must be positive");
    if (lambda0 <= 0.0) throw std::invalid_argument("PlanConfig: lambda0 <= 0");
    if (!(0.0 < eta_min && eta_min < eta_max && eta_max <= samples))
      throw std::invalid_argument("PlanConfig: need 0 < eta_min < eta_max <= K");
    if (lambda_max <= 0.0)
      throw std::invalid_argument("PlanConfig: lambda_max <= 0");
  }
};

struct PlannerState {
  InputSequence nominal;  // previous plan U, time-shifted each step
  double lambda = 1.0;    // > 0 always
  int iteration = 0;
  std::uint64_t seed = 0;
};

// A sampled input sequence plus its simulated trajectory and cost.
struct Rollout {
  InputSequence inputs;       // horizon x m, post-clamp
  Eigen::MatrixXd trajectory; // (horizon+1) x n, row 0 = current state
  double cost = 0.0;          // S(V), any finite real
  SampleSource source;
};

// Normalized importance-sampling weights for one batch.
struct WeightedBatch {
  Eigen::VectorXd weights;  // length K, >= 0, sums to 1
  double eta = 0.0;         // normalization factor, in (0, K]
  double min_cost = 0.0;    // baseline subtracted before exponentiation
};

struct StepDiagnostics {
  int iteration = 0;
  double lambda = 0.0;    // value used for this batch's weights
  double eta = 0.0;
  double min_cost = 0.0;
  Eigen::VectorXd command;
  Eigen::VectorXd ancillary_weight;  // weight mass per ancillary, length J
  Eigen::VectorXd ancillary_cost;    // rollout cost per ancillary, length J
  double best_gaussian_cost = 0.0;
  int best_sample = -1;              // argmin-cost sample index
};

struct StepResult {
  Eigen::VectorXd command;  // first input of the updated plan
  StepDiagnostics diag;
};

}  // namespace mppi
