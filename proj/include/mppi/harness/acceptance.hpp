#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mppi/control/riccati.hpp"
#include "mppi/core/planner.hpp"
#include "mppi/dynamics/furuta.hpp"
#include "mppi/dynamics/unicycle.hpp"
#include "mppi/harness/runner.hpp"
#include "mppi/harness/sweep.hpp"

namespace mppi {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Criterion 1: algebraic properties of the importance-sampling weights.
inline CheckResult check_weight_properties() {
  CheckResult res{"weight-properties"};
  const CounterRng rng(12345, RngDomain::scenario);
  Eigen::VectorXd costs(16);
  for (int i = 0; i < 16; ++i) costs[i] = 10.0 * rng.uniform(0, i, 0, 0);

  const WeightedBatch w = compute_weights(costs, 3.0);
  const double norm_err = std::abs(w.weights.sum() - 1.0);

  const WeightedBatch shifted =
      compute_weights((costs.array() + 123.456).matrix(), 3.0);
  const double base_err =
      (shifted.weights - w.weights).cwiseAbs().maxCoeff();

  const Eigen::VectorXd reversed = costs.reverse();
  const WeightedBatch perm = compute_weights(reversed, 3.0);
  const double perm_err =
      (perm.weights.reverse() - w.weights).cwiseAbs().maxCoeff();

  Eigen::VectorXd gapped(5);
  gapped << 5.0, 1.0, 3.0, 2.0, 4.0;
  const WeightedBatch greedy = compute_weights(gapped, 1e-9);
  const double argmin_err = std::abs(greedy.weights[1] - 1.0);

  const WeightedBatch uniform = compute_weights(costs, 1e12);
  const double uniform_err =
      (uniform.weights.array() - 1.0 / 16.0).abs().maxCoeff();

  res.pass = norm_err <= 1e-12 && base_err <= 1e-12 && perm_err <= 1e-12 &&
             argmin_err <= 1e-12 && uniform_err <= 1e-6;
  std::ostringstream os;
  os << "norm " << norm_err << ", baseline " << base_err << ", perm "
     << perm_err << ", argmin " << argmin_err << ", uniform " << uniform_err;
  res.detail = os.str();
  return res;
}

// Criterion 2: Riccati solver against the scalar golden-ratio closed form
// and randomized residual checks.
inline CheckResult check_riccati() {
  CheckResult res{"riccati-solver"};
  const Eigen::MatrixXd one = Eigen::MatrixXd::Identity(1, 1);
  const Eigen::MatrixXd p1 = solve_dare(one, one, one, one);
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  const double p_err = std::abs(p1(0, 0) - phi);
  const double k_err =
      std::abs(lqr_gain(one, one, one, one).k_fb(0, 0) - 1.0 / phi);

  const CounterRng rng(777, RngDomain::scenario);
  double max_residual = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = static_cast<std::uint32_t>(trial);
    Eigen::MatrixXd a(4, 4), b(4, 2);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        a(i, j) = 0.5 * rng.normal(t, static_cast<std::uint32_t>(i),
                                   static_cast<std::uint32_t>(j), 0);
    const double rho = spectral_radius(a);
    if (rho > 0.9) a *= 0.9 / rho;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 2; ++j)
        b(i, j) = rng.normal(t, static_cast<std::uint32_t>(i),
                             static_cast<std::uint32_t>(j), 1);
    const Eigen::MatrixXd q = Eigen::MatrixXd::Identity(4, 4);
    const Eigen::MatrixXd r = Eigen::MatrixXd::Identity(2, 2);
    const Eigen::MatrixXd p = solve_dare(a, b, q, r);
    const double rel =
        dare_residual(a, b, q, r, p) / std::max(1.0, p.norm());
    max_residual = std::max(max_residual, rel);
  }

  res.pass = p_err <= 1e-9 && k_err <= 1e-9 && max_residual < 1e-9;
  std::ostringstream os;
  os << "golden P err " << p_err << ", K err " << k_err
     << ", max random residual " << max_residual;
  res.detail = os.str();
  return res;
}

// Criterion 3: pendulum dynamics against physics oracles.
inline CheckResult check_dynamics_oracles() {
  CheckResult res{"dynamics-oracles"};
  const FurutaParams p;

  const Eigen::Vector4d hanging{0.0, M_PI, 0.0, 0.0};
  const double hang_err = (furuta_step(p, hanging, 0.0, 0.02) - hanging).norm();
  const Eigen::Vector4d upright = Eigen::Vector4d::Zero();
  const double up_err = (furuta_step(p, upright, 0.0, 0.02) - upright).norm();

  FurutaParams undamped = p;
  undamped.arm_damping = 0.0;
  undamped.pend_damping = 0.0;
  undamped.torque_constant = 0.0;  // no back-EMF dissipation at u = 0
  Eigen::Vector4d x{0.0, 2.5, 0.0, 0.0};
  const double e0 = furuta_energy(undamped, x);
  double drift = 0.0;
  for (int i = 0; i < 5000; ++i) {
    x = furuta_step(undamped, x, 0.0, 1e-3);
    drift = std::max(drift,
                     std::abs(furuta_energy(undamped, x) - e0) / std::abs(e0));
  }

  const auto [a_lin, b_lin] = furuta_linearize(p);
  const auto f = [&](const Eigen::Vector4d& s, double u) -> Eigen::Vector4d {
    const Eigen::Vector2d acc = furuta_accel(p, s[1], s[2], s[3], u);
    return {s[2], s[3], acc[0], acc[1]};
  };
  const double h = 1e-6;
  double lin_err = 0.0;
  for (int j = 0; j < 4; ++j) {
    Eigen::Vector4d ej = Eigen::Vector4d::Zero();
    ej[j] = h;
    const Eigen::Vector4d col = (f(ej, 0.0) - f(-ej, 0.0)) / (2.0 * h);
    lin_err = std::max(lin_err, (col - a_lin.col(j)).cwiseAbs().maxCoeff());
  }
  const Eigen::Vector4d b_fd =
      (f(Eigen::Vector4d::Zero(), h) - f(Eigen::Vector4d::Zero(), -h)) /
      (2.0 * h);
  lin_err = std::max(lin_err, (b_fd - b_lin).cwiseAbs().maxCoeff());

  res.pass = hang_err <= 1e-12 && up_err <= 1e-12 && drift < 1e-3 &&
             lin_err < 1e-4;
  std::ostringstream os;
  os << "hanging fixed-point err " << hang_err << ", upright " << up_err
     << ", energy drift " << drift << ", linearization err " << lin_err;
  res.detail = os.str();
  return res;
}

// Criterion 9: Eq. 17 applied to the scripted eta sequence.
inline CheckResult check_lambda_autotune() {
  CheckResult res{"lambda-autotune"};
  PlanConfig cfg;
  cfg.eta_min = 5.0;
  cfg.eta_max = 10.0;
  const double l1 = update_lambda(1.0, 12.0, cfg);
  const double l2 = update_lambda(l1, 3.0, cfg);
  const double l3 = update_lambda(l2, 7.0, cfg);
  res.pass = l1 == 0.9 * 1.0 && l2 == 1.2 * l1 && l3 == l2 &&
             std::abs(l1 - 0.9) <= 1e-12 && std::abs(l2 - 1.08) <= 1e-12 &&
             std::abs(l3 - 1.08) <= 1e-12;
  std::ostringstream os;
  os << "lambda sequence " << l1 << ", " << l2 << ", " << l3;
  res.detail = os.str();
  return res;
}

// Criterion 8: with a flat cost landscape the lone braking ancillary must
// pull the averaged command toward zero speed relative to pure Gaussian
// sampling, on every seed.
inline CheckResult check_bias_demonstration() {
  CheckResult res{"bias-demonstration"};
  const UnicycleModel model(UnicycleParams{}, 0.1);
  const auto flat = [](const Eigen::VectorXd&, int) { return 0.0; };

  bool all = true;
  std::ostringstream os;
  for (int s = 0; s < 5; ++s) {
    double magnitude[2] = {0.0, 0.0};
    for (int j_count = 0; j_count <= 1; ++j_count) {
      PlanConfig plan;
      plan.samples = 10;
      plan.ancillary_count = j_count;
      plan.horizon = 10;
      plan.dt = 0.1;
      plan.sigma = Eigen::VectorXd::Constant(2, 0.1);
      plan.lambda0 = 1.0;
      plan.seed = derive_seed(424242, static_cast<std::uint64_t>(s));
      Planner planner(plan);
      planner.nominal().col(0).setConstant(1.0);

      std::vector<InputSequence> ancillary;
      if (j_count == 1) ancillary.push_back(InputSequence::Zero(10, 2));
      Eigen::VectorXd command;
      for (int it = 0; it < 20; ++it) {
        command = planner
                      .step(Eigen::Vector3d::Zero().eval(), model, flat,
                            ancillary)
                      .command;
      }
      magnitude[j_count] = std::abs(command[0]);
    }
    all = all && magnitude[1] < magnitude[0];
    if (s) os << "; ";
    os << "seed " << s << ": J=1 " << magnitude[1] << " vs J=0 "
       << magnitude[0];
  }
  res.pass = all;
  res.detail = os.str();
  return res;
}

// Criterion 4: Fig. 5 ordinal claims on the pendulum.
inline CheckResult check_pendulum_comparison(int runs = 20, int jobs = 1) {
  CheckResult res{"pendulum-comparison"};
  const ScenarioConfig base = pendulum_defaults();

  const auto metrics_for = [&](Variant v, int k) {
    ScenarioConfig cfg = base;
    cfg.plan.samples = k;
    return score_batch(run_batch(cfg, v, runs, jobs), cfg);
  };

  const auto biased100 = metrics_for(Variant::biased, 100);
  const auto switching = metrics_for(Variant::switching, 100);
  const auto vanilla100 = metrics_for(Variant::vanilla, 100);
  const auto biased50 = metrics_for(Variant::biased, 50);
  const auto vanilla500 = metrics_for(Variant::vanilla, 500);

  const int successes = tally_outcomes(biased100).successes;
  const int required = (19 * runs + 19) / 20;  // ceil(0.95 runs)

  const double med_b100 = aggregate(collect_costs(biased100)).median;
  const double med_sw = aggregate(collect_costs(switching)).median;
  const double med_v100 = aggregate(collect_costs(vanilla100)).median;
  const double med_b50 = aggregate(collect_costs(biased50)).median;
  const double med_v500 = aggregate(collect_costs(vanilla500)).median;

  const bool ok_a = successes >= required;
  const bool ok_b = med_b100 < med_sw && med_b100 < med_v100;
  const bool ok_c = med_b50 < med_v500;
  res.pass = ok_a && ok_b && ok_c;
  std::ostringstream os;
  os << "biased K=100 successes " << successes << "/" << runs
     << " (need " << required << "); median cost biased100 " << med_b100
     << " vs switching " << med_sw << " vs vanilla100 " << med_v100
     << "; biased50 " << med_b50 << " vs vanilla500 " << med_v500;
  res.detail = os.str();
  return res;
}

// Criterion 5: Table I claims on the crossing.
inline CheckResult check_crossing(int runs = 20, int jobs = 1) {
  CheckResult res{"crossing"};
  const ScenarioConfig base = crossing_defaults();

  const auto metrics_for = [&](Variant v, int k) {
    ScenarioConfig cfg = base;
    cfg.plan.samples = k;
    return score_batch(run_batch(cfg, v, runs, jobs), cfg);
  };

  const auto biased50 = metrics_for(Variant::biased, 50);
  const auto biased200 = metrics_for(Variant::biased, 200);
  const auto vanilla50 = metrics_for(Variant::vanilla, 50);
  const auto vanilla200 = metrics_for(Variant::vanilla, 200);

  const int b50_col = count_collision_events(biased50);
  const int b200_col = count_collision_events(biased200);
  const int b50_rv = count_rule_violation_experiments(biased50);
  const int b200_rv = count_rule_violation_experiments(biased200);
  const int v50_col = count_collision_events(vanilla50);
  const int v50_rv = count_rule_violation_experiments(vanilla50);

  const double b_std = aggregate(collect_arrivals(biased200)).stddev;
  const double v_std = aggregate(collect_arrivals(vanilla200)).stddev;

  const bool ok_biased =
      b50_col == 0 && b200_col == 0 && b50_rv == 0 && b200_rv == 0;
  const bool ok_vanilla = v50_col >= 1 || v50_rv >= 2;
  const bool ok_std = b_std < v_std;
  res.pass = ok_biased && ok_vanilla && ok_std;
  std::ostringstream os;
  os << "biased collisions/violations K=50 " << b50_col << "/" << b50_rv
     << ", K=200 " << b200_col << "/" << b200_rv << "; vanilla K=50 "
     << v50_col << "/" << v50_rv << "; arrival std K=200 biased " << b_std
     << " vs vanilla " << v_std;
  res.detail = os.str();
  return res;
}

// Criterion 6: emergency braking.
inline CheckResult check_braking(int runs = 10, int jobs = 1) {
  CheckResult res{"braking"};
  const ScenarioConfig cfg = braking_defaults();
  const auto biased = score_batch(run_batch(cfg, Variant::biased, runs, jobs),
                                  cfg);
  const auto vanilla = score_batch(run_batch(cfg, Variant::vanilla, runs, jobs),
                                   cfg);
  const int b_col = count_collision_events(biased);
  const int v_col = count_collision_events(vanilla);
  res.pass = b_col == 0 && v_col >= 3;
  std::ostringstream os;
  os << "collisions biased " << b_col << "/" << runs << ", vanilla " << v_col
     << "/" << runs;
  res.detail = os.str();
  return res;
}

// Criterion 7: Table II directional claims on the corridor. The K=50
// deadlock tendency is reported, not asserted.
inline CheckResult check_corridor(int runs = 20, int jobs = 1) {
  CheckResult res{"corridor"};
  const ScenarioConfig base = corridor_defaults();

  const auto metrics_for = [&](Variant v, int k) {
    ScenarioConfig cfg = base;
    cfg.plan.samples = k;
    return score_batch(run_batch(cfg, v, runs, jobs), cfg);
  };

  const auto biased500 = metrics_for(Variant::biased, 500);
  const auto vanilla500 = metrics_for(Variant::vanilla, 500);
  const auto biased50 = metrics_for(Variant::biased, 50);

  const OutcomeTally tb = tally_outcomes(biased500);
  const OutcomeTally tv = tally_outcomes(vanilla500);
  const OutcomeTally tb50 = tally_outcomes(biased50);

  res.pass = tb.successes >= tv.successes && tb.collisions <= tv.collisions;
  std::ostringstream os;
  os << "K=500 successes biased " << tb.successes << " vs vanilla "
     << tv.successes << ", collisions biased " << tb.collisions
     << " vs vanilla " << tv.collisions << "; K=50 biased deadlocks "
     << tb50.deadlocks << " (reported only)";
  res.detail = os.str();
  return res;
}

// Criterion 10: the CLI run command is bit-deterministic across job
// counts. Exercised through the installed binary so the check covers the
// whole pipeline including serialization.
inline CheckResult check_cli_determinism(const std::string& cli_path) {
  CheckResult res{"cli-determinism"};
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "mppi_accept_determinism";
  std::error_code ec;
  fs::remove_all(base, ec);
  fs::create_directories(base / "j1");
  fs::create_directories(base / "j8");

  const auto invoke = [&](const std::string& out, int jobs) {
    const std::string cmd = "\"" + cli_path +
                            "\" run --scenario braking --variant biased"
                            " --runs 6 --jobs " +
                            std::to_string(jobs) + " --out \"" + out +
                            "\" > /dev/null";
    return std::system(cmd.c_str());
  };
  const int rc1 = invoke((base / "j1").string(), 1);
  const int rc8 = invoke((base / "j8").string(), 8);

  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string csv1 = slurp(base / "j1" / "metrics.csv");
  const std::string csv8 = slurp(base / "j8" / "metrics.csv");
  const std::string raw1 = slurp(base / "j1" / "episodes.jsonl");
  const std::string raw8 = slurp(base / "j8" / "episodes.jsonl");

  res.pass = rc1 == 0 && rc8 == 0 && !csv1.empty() && csv1 == csv8 &&
             !raw1.empty() && raw1 == raw8;
  std::ostringstream os;
  os << "exit codes " << rc1 << "/" << rc8 << ", metrics.csv "
     << (csv1 == csv8 && !csv1.empty() ? "identical" : "DIFFER")
     << ", episodes.jsonl "
     << (raw1 == raw8 && !raw1.empty() ? "identical" : "DIFFER");
  res.detail = os.str();
  return res;
}

// In-process determinism for cmd_validate: the same episode, replayed
// with planner rollouts spread over 4 workers, must serialize to the
// same bytes.
inline CheckResult check_replay_determinism() {
  CheckResult res{"replay-determinism"};
  const ScenarioConfig cfg = braking_defaults();
  const EpisodeLog a = run_braking_episode(cfg, Variant::biased, 0, 1);
  const EpisodeLog b = run_braking_episode(cfg, Variant::biased, 0, 4);
  std::ostringstream sa, sb;
  write_jsonl(a, sa);
  write_jsonl(b, sb);
  res.pass = sa.str() == sb.str() && !sa.str().empty();
  res.detail = res.pass ? "serialized episodes identical across jobs 1/4"
                        : "serialized episodes differ";
  return res;
}

// Structural smoke run used by cmd_validate: a few episodes per scenario
// must complete, classify, and log coherently. No comparative claims.
inline CheckResult smoke_scenario(const std::string& id, Variant variant,
                                  int runs, int jobs = 1) {
  CheckResult res{"smoke-" + id + "-" + to_string(variant)};
  ScenarioConfig cfg = scenario_defaults(id);
  cfg.plan.samples = std::min(cfg.plan.samples, 50);
  const auto logs = run_batch(cfg, variant, runs, jobs);

  bool ok = static_cast<int>(logs.size()) == runs;
  OutcomeTally tally;
  for (const auto& log : logs) {
    const RunMetrics m = score_episode(log, cfg);
    ok = ok && std::isfinite(m.total_cost) && std::isfinite(m.total_effort);
    ok = ok && m.steps > 0 && m.steps <= cfg.episode_steps;
    if (log.outcome == Outcome::collision)
      ok = ok && log.has_event("collision");
    if (log.outcome == Outcome::deadlock) ok = ok && log.has_event("deadlock");
    for (const auto& rec : log.steps)
      ok = ok && std::isfinite(rec.stage_cost);
  }
  const auto metrics = score_batch(logs, cfg);
  tally = tally_outcomes(metrics);
  res.pass = ok;
  std::ostringstream os;
  os << "outcomes: " << tally.successes << " success, " << tally.collisions
     << " collision, " << tally.deadlocks << " deadlock, " << tally.timeouts
     << " timeout";
  res.detail = os.str();
  return res;
}

}  // namespace mppi
