#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mppi/core/types.hpp"
#include "mppi/costs/rollout_cost.hpp"
#include "mppi/math/rng.hpp"
#include "mppi/util/parallel.hpp"

namespace mppi {

// Contract rollouts need from a dynamics model. Implementations must be
// pure and usable read-only from several workers at once.
template <class D>
concept DynamicsModel = requires(const D& d, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& u) {
  { d.step(x, u) } -> std::convertible_to<Eigen::VectorXd>;
  { d.input_dim() } -> std::convertible_to<int>;
  { d.clamp_input(u) } -> std::convertible_to<Eigen::VectorXd>;
};

// Stage cost C(x_t) evaluated at step index t (t indexes the trajectory,
// so moving-obstacle costs can look up predicted positions).
template <class C>
concept StageCostFn = requires(const C& c, const Eigen::VectorXd& x, int t) {
  { c(x, t) } -> std::convertible_to<double>;
};

struct Sample {
  InputSequence inputs;
  SampleSource source;
};

// Nominal plan advanced by one control period: rows 1..T_H-1 move up one
// slot and the last row is repeated. Repeat-last padding keeps a steady
// plan steady instead of injecting a step change at the tail.
inline InputSequence shift_plan(const PlannerState& state) {
  const Eigen::Index rows = state.nominal.rows();
  if (rows < 1) throw std::invalid_argument("shift_plan: empty nominal plan");
  InputSequence shifted(rows, state.nominal.cols());
  if (rows > 1) {
    shifted.topRows(rows - 1) = state.nominal.bottomRows(rows - 1);
  }
  shifted.row(rows - 1) = state.nominal.row(rows - 1);
  return shifted;
}

// The batch of K input-sequence samples. Samples 0..J-1 are the ancillary
// proposals copied verbatim (no noise); samples J..K-1 are the shifted
// nominal plus i.i.d. Gaussian noise with per-channel std sigma. Noise for
// sample k at step t comes from a counter keyed (iteration, k, t), so the
// batch is identical no matter which order the samples are filled in.
inline std::vector<Sample> draw_samples(
    const PlannerState& state, const PlanConfig& cfg,
    const std::vector<InputSequence>& ancillary) {
  if (static_cast<int>(ancillary.size()) != cfg.ancillary_count) {
    throw std::invalid_argument(
        "draw_samples: expected " + std::to_string(cfg.ancillary_count) +
        " ancillary sequences, got " + std::to_string(ancillary.size()));
  }
  const int m = cfg.input_dim();
  const InputSequence base = shift_plan(state);
  if (base.rows() != cfg.horizon || base.cols() != m) {
    throw std::invalid_argument("draw_samples: nominal plan shape mismatch");
  }

  std::vector<Sample> samples;
  samples.reserve(cfg.samples);
  for (int j = 0; j < cfg.ancillary_count; ++j) {
    if (ancillary[j].rows() != cfg.horizon || ancillary[j].cols() != m) {
      throw std::invalid_argument("draw_samples: ancillary " +
                                  std::to_string(j) + " shape mismatch");
    }
    samples.push_back({ancillary[j], SampleSource{j}});
  }

  const CounterRng rng(state.seed, RngDomain::sampling);
  const auto iter = static_cast<std::uint32_t>(state.iteration);
  for (int k = cfg.ancillary_count; k < cfg.samples; ++k) {
    InputSequence inputs = base;
    for (int t = 0; t < cfg.horizon; ++t) {
      for (int ch = 0; ch < m; ch += 2) {
        const auto [z0, z1] = rng.normal_pair(
            iter, static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(t),
            static_cast<std::uint32_t>(ch / 2));
        inputs(t, ch) += cfg.sigma(ch) * z0;
        if (ch + 1 < m) inputs(t, ch + 1) += cfg.sigma(ch + 1) * z1;
      }
    }
    samples.push_back({std::move(inputs), SampleSource{}});
  }
  return samples;
}

// Importance-sampling weights w_k proportional to exp(-S_k / lambda).
// The minimum cost is subtracted before exponentiation; that scales
// numerator and eta by the same factor (weights unchanged) while keeping
// the exponentials representable and pinning eta into (0, K], where the
// autotune band is meaningful as a count of significant samples.
inline WeightedBatch compute_weights(const Eigen::VectorXd& costs,
                                     double lambda) {
  if (costs.size() == 0) throw std::invalid_argument("compute_weights: empty");
  if (!(lambda > 0.0))
    throw std::invalid_argument("compute_weights: lambda must be > 0");
  if (!costs.allFinite())
    throw std::invalid_argument("compute_weights: non-finite cost in batch");

  WeightedBatch batch;
  batch.min_cost = costs.minCoeff();
  batch.weights =
      ((costs.array() - batch.min_cost) * (-1.0 / lambda)).exp().matrix();
  batch.eta = batch.weights.sum();
  batch.weights /= batch.eta;
  return batch;
}

// Weighted average of the sampled input sequences, elementwise over
// (step, channel).
inline InputSequence update_plan(const std::vector<Rollout>& rollouts,
                                 const WeightedBatch& batch) {
  if (rollouts.empty()) throw std::invalid_argument("update_plan: no rollouts");
  if (batch.weights.size() != static_cast<Eigen::Index>(rollouts.size()))
    throw std::invalid_argument("update_plan: weight/rollout count mismatch");
  InputSequence plan = batch.weights(0) * rollouts[0].inputs;
  for (std::size_t k = 1; k < rollouts.size(); ++k) {
    plan += batch.weights(k) * rollouts[k].inputs;
  }
  return plan;
}

// Inverse-temperature autotune: shrink when too many samples carry
// significant weight, grow when too few. Applied after the current batch's
// weights; the returned value is used next step.
inline double update_lambda(double lambda, double eta, const PlanConfig& cfg) {
  if (!(eta > 0.0)) throw std::invalid_argument("update_lambda: eta <= 0");
  if (eta > cfg.eta_max) return cfg.lambda_shrink * lambda;
  if (eta < cfg.eta_min) return std::min(cfg.lambda_grow * lambda, cfg.lambda_max);
  return lambda;
}

// The receding-horizon planning loop: shift the previous plan, draw the
// sample batch, roll each sample out through the dynamics, weight by cost,
// average into the new plan, and autotune lambda for the next step.
class Planner {
 public:
  explicit Planner(PlanConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    reset();
  }

  void reset() {
    state_.nominal = InputSequence::Zero(cfg_.horizon, cfg_.input_dim());
    state_.lambda = cfg_.lambda0;
    state_.iteration = 0;
    state_.seed = cfg_.seed;
  }

  const PlanConfig& config() const { return cfg_; }
  const PlannerState& state() const { return state_; }

  // Scenario-level access to the sampling mean. Joint planners overwrite
  // the channel blocks of other agents with fresh behavior proposals each
  // tick; the ego block keeps the time-shifted previous plan.
  InputSequence& nominal() { return state_.nominal; }

  template <DynamicsModel D, StageCostFn C>
  StepResult step(const Eigen::VectorXd& x0, const D& dynamics,
                  const C& stage_cost,
                  const std::vector<InputSequence>& ancillary, int jobs = 1) {
    std::vector<Sample> samples = draw_samples(state_, cfg_, ancillary);
    std::vector<Rollout> rollouts(samples.size());
    parallel_for(
        static_cast<int>(samples.size()), jobs, [&](int k) {
          try {
            rollouts[k] = evaluate_rollout(dynamics, stage_cost, x0,
                                           std::move(samples[k]));
          } catch (const std::exception& e) {
            throw std::runtime_error("rollout failed for sample " +
                                     std::to_string(k) + ": " + e.what());
          }
        });

    Eigen::VectorXd costs(rollouts.size());
    for (std::size_t k = 0; k < rollouts.size(); ++k)
      costs(k) = rollouts[k].cost;

    const double lambda_used = state_.lambda;
    const WeightedBatch batch = compute_weights(costs, lambda_used);
    state_.nominal = update_plan(rollouts, batch);
    state_.lambda = update_lambda(state_.lambda, batch.eta, cfg_);
    state_.iteration += 1;

    StepResult result;
    result.command = state_.nominal.row(0).transpose();
    result.diag = make_diagnostics(costs, batch, lambda_used, result.command);
    return result;
  }

  // One full rollout: clamp the sampled inputs to actuator bounds, simulate
  // through the dynamics, accumulate stage costs. The clamped inputs are
  // kept so the plan update averages only feasible commands.
  template <DynamicsModel D, StageCostFn C>
  Rollout evaluate_rollout(const D& dynamics, const C& stage_cost,
                           const Eigen::VectorXd& x0, Sample sample) const {
    Rollout r;
    r.source = sample.source;
    r.inputs = std::move(sample.inputs);
    r.trajectory.resize(cfg_.horizon + 1, x0.size());
    r.trajectory.row(0) = x0.transpose();
    Eigen::VectorXd x = x0;
    for (int t = 0; t < cfg_.horizon; ++t) {
      const Eigen::VectorXd u = dynamics.clamp_input(r.inputs.row(t).transpose());
      r.inputs.row(t) = u.transpose();
      x = dynamics.step(x, u);
      r.trajectory.row(t + 1) = x.transpose();
    }
    r.cost = rollout_cost(r.trajectory, stage_cost);
    return r;
  }

 private:
  StepDiagnostics make_diagnostics(const Eigen::VectorXd& costs,
                                   const WeightedBatch& batch,
                                   double lambda_used,
                                   const Eigen::VectorXd& command) const {
    StepDiagnostics d;
    d.iteration = state_.iteration - 1;
    d.lambda = lambda_used;
    d.eta = batch.eta;
    d.min_cost = batch.min_cost;
    d.command = command;
    const int j_count = cfg_.ancillary_count;
    d.ancillary_weight = batch.weights.head(j_count);
    d.ancillary_cost = costs.head(j_count);
    d.best_gaussian_cost =
        costs.size() > j_count
            ? costs.tail(costs.size() - j_count).minCoeff()
            : std::numeric_limits<double>::quiet_NaN();
    costs.minCoeff(&d.best_sample);
    return d;
  }

  PlanConfig cfg_;
  PlannerState state_;
};

}  // namespace mppi
