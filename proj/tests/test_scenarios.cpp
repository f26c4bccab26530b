#include "catch_amalgamated.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "mppi/sim/braking_scenario.hpp"
#include "mppi/sim/pendulum_scenario.hpp"
#include "mppi/sim/vessel_scenarios.hpp"
#include "mppi/util/config.hpp"

using namespace mppi;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/" + name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("key value config parsing") {
  SECTION("values, comments and precedence") {
    const auto path = write_temp("mppi_cfg_basic.cfg",
                                 "# comment line\n"
                                 "samples = 40\n"
                                 "lambda0=2.5   # trailing comment\n"
                                 "  scenario =  braking  \n"
                                 "samples = 55\n"
                                 "sigma = 0.5, 1.5\n"
                                 "\n");
    const KeyValueConfig kv = KeyValueConfig::from_file(path);
    CHECK(kv.get_int("samples", 0) == 55);  // later assignment wins
    CHECK(kv.get_double("lambda0", 0.0) == 2.5);
    CHECK(kv.get_string("scenario", "") == "braking");
    const auto sig = kv.get_doubles("sigma", {});
    REQUIRE(sig.size() == 2);
    CHECK(sig[0] == 0.5);
    CHECK(sig[1] == 1.5);
    CHECK(kv.get_int("absent", 123) == 123);
  }

  SECTION("malformed lines fail loudly") {
    const auto path =
        write_temp("mppi_cfg_broken.cfg", "this line has no equals\n");
    CHECK_THROWS(KeyValueConfig::from_file(path));
    CHECK_THROWS(KeyValueConfig::from_file("/tmp/mppi_does_not_exist.cfg"));
  }

  SECTION("typed getters name the offending key") {
    KeyValueConfig kv;
    kv.set("samples", "many");
    CHECK_THROWS_WITH(kv.get_int("samples", 0),
                      Catch::Matchers::ContainsSubstring("samples"));
    kv.set("lambda0", "warm");
    CHECK_THROWS_WITH(kv.get_double("lambda0", 0.0),
                      Catch::Matchers::ContainsSubstring("lambda0"));
  }

  SECTION("serialization round-trips") {
    KeyValueConfig kv;
    kv.set("alpha", "1.25");
    kv.set("name", "corridor");
    const auto path = write_temp("mppi_cfg_round.cfg", kv.serialize());
    const KeyValueConfig back = KeyValueConfig::from_file(path);
    CHECK(back.get_double("alpha", 0.0) == 1.25);
    CHECK(back.get_string("name", "") == "corridor");
  }
}

TEST_CASE("scenario defaults") {
  SECTION("pendulum") {
    const ScenarioConfig cfg = pendulum_defaults();
    CHECK(cfg.control_rate == 50.0);
    CHECK(cfg.episode_steps == 250);
    CHECK(cfg.plan.samples == 100);
    CHECK(cfg.plan.horizon == 50);
    CHECK(cfg.plan.sigma.size() == 1);
    CHECK(cfg.plan.sigma[0] == Catch::Approx(std::sqrt(0.5)));
    CHECK(cfg.plan.eta_min == 2.0);
    CHECK(cfg.plan.eta_max == 5.0);
    REQUIRE(cfg.ancillaries.size() == 3);
    CHECK(cfg.ancillaries[0] == "lqr");
    CHECK_NOTHROW(cfg.validate());
  }

  SECTION("crossing and corridor") {
    const ScenarioConfig crossing = crossing_defaults();
    CHECK(crossing.control_rate == 10.0);
    CHECK(crossing.plan.samples == 200);
    CHECK(crossing.vessel_sigma.size() == 4);
    CHECK(crossing.vessel_sigma[0] == Catch::Approx(std::sqrt(6.0)));
    CHECK(crossing.vessel_sigma[2] == Catch::Approx(std::sqrt(0.12)));
    CHECK(crossing.plan.eta_min == 5.0);
    CHECK(crossing.plan.eta_max == 10.0);
    CHECK(crossing.ancillaries.size() == 4);

    const ScenarioConfig corridor = corridor_defaults();
    CHECK(corridor.plan.samples == 500);
    CHECK(corridor.plan.horizon == 50);
    CHECK(corridor.episode_steps == 450);
  }

  SECTION("braking") {
    const ScenarioConfig cfg = braking_defaults();
    CHECK(cfg.plan.samples == 300);
    CHECK(cfg.plan.sigma.size() == 2);
    CHECK(cfg.plan.lambda0 == 5.0);
    CHECK(cfg.goal[0] == 8.0);
    CHECK(cfg.goal_cost.goal[0] == 8.0);
    REQUIRE(cfg.ancillaries.size() == 1);
    CHECK(cfg.ancillaries[0] == "braking");
  }

  SECTION("unknown scenario") {
    CHECK_THROWS(scenario_defaults("juggling"));
  }

  SECTION("rate and plan step must agree") {
    ScenarioConfig cfg = pendulum_defaults();
    cfg.control_rate = 100.0;  // plan.dt still 0.02
    CHECK_THROWS(cfg.validate());
  }
}

TEST_CASE("config overrides") {
  SECTION("flat keys reach their fields") {
    KeyValueConfig kv;
    kv.set("samples", "37");
    kv.set("seed", "99");
    kv.set("lambda0", "7.5");
    kv.set("episode_steps", "11");
    const ScenarioConfig cfg = apply_overrides(pendulum_defaults(), kv);
    CHECK(cfg.plan.samples == 37);
    CHECK(cfg.plan.seed == 99);
    CHECK(cfg.plan.lambda0 == 7.5);
    CHECK(cfg.episode_steps == 11);
  }

  SECTION("unknown keys are rejected") {
    KeyValueConfig kv;
    kv.set("sampels", "37");
    CHECK_THROWS_WITH(apply_overrides(pendulum_defaults(), kv),
                      Catch::Matchers::ContainsSubstring("sampels"));
  }

  SECTION("sigma routes to the per-vessel channels on water") {
    KeyValueConfig kv;
    kv.set("sigma", "1,2,3,4");
    const ScenarioConfig cfg = apply_overrides(crossing_defaults(), kv);
    CHECK(cfg.vessel_sigma.size() == 4);
    CHECK(cfg.vessel_sigma[3] == 4.0);

    KeyValueConfig kv2;
    kv2.set("sigma", "0.25,0.25");
    const ScenarioConfig br = apply_overrides(braking_defaults(), kv2);
    CHECK(br.plan.sigma.size() == 2);
    CHECK(br.plan.sigma[0] == 0.25);
  }

  SECTION("goal keys move both goal copies") {
    KeyValueConfig kv;
    kv.set("goal_x", "5");
    kv.set("goal_y", "-1");
    const ScenarioConfig cfg = apply_overrides(braking_defaults(), kv);
    CHECK(cfg.goal[0] == 5.0);
    CHECK(cfg.goal_cost.goal[1] == -1.0);
  }

  SECTION("control_rate override keeps plan.dt consistent") {
    KeyValueConfig kv;
    kv.set("control_rate", "25");
    const ScenarioConfig cfg = apply_overrides(pendulum_defaults(), kv);
    CHECK(cfg.plan.dt == Catch::Approx(0.04));
    CHECK_NOTHROW(cfg.validate());
  }

  SECTION("the effective config round-trips through key=value text") {
    ScenarioConfig cfg = braking_defaults();
    cfg.plan.samples = 123;
    cfg.plan.seed = 77;
    cfg.box_speed = 1.75;
    const auto path =
        write_temp("mppi_cfg_trip.cfg", to_key_values(cfg).serialize());
    const KeyValueConfig kv = KeyValueConfig::from_file(path);
    const ScenarioConfig back =
        apply_overrides(scenario_defaults(kv.get_string("scenario", "")), kv);
    CHECK(back.scenario == "braking");
    CHECK(back.plan.samples == 123);
    CHECK(back.plan.seed == 77);
    CHECK(back.box_speed == 1.75);
    CHECK(back.plan.sigma.size() == 2);
    CHECK(back.plan.sigma[0] == cfg.plan.sigma[0]);
  }
}

TEST_CASE("pendulum episodes") {
  ScenarioConfig cfg = pendulum_defaults();
  cfg.plan.seed = 2024;

  SECTION("an empty episode times out with no steps") {
    cfg.episode_steps = 0;
    const EpisodeLog log = run_pendulum_episode(cfg, Variant::vanilla, 0);
    CHECK(log.steps.empty());
    CHECK(log.outcome == Outcome::timeout);
    CHECK(log.final_stage_cost == Catch::Approx(1086.9604401089358));
  }

  SECTION("short episodes are structurally sound") {
    cfg.episode_steps = 10;
    cfg.plan.samples = 10;

    const EpisodeLog biased = run_pendulum_episode(cfg, Variant::biased, 0);
    REQUIRE(biased.steps.size() == 10);
    for (const auto& rec : biased.steps) {
      REQUIRE(rec.diag.size() == 1);
      CHECK(rec.diag[0].ancillary_weight.size() == 3);
      CHECK(rec.state.size() == 4);
      CHECK(std::abs(rec.command[0]) <= 10.0);
      CHECK(std::isfinite(rec.stage_cost));
    }
    CHECK(biased.steps[0].state[1] == Catch::Approx(M_PI));
    CHECK(biased.variant == "biased");

    const EpisodeLog vanilla = run_pendulum_episode(cfg, Variant::vanilla, 0);
    CHECK(vanilla.steps[3].diag[0].ancillary_weight.size() == 0);

    const EpisodeLog switching =
        run_pendulum_episode(cfg, Variant::switching, 0);
    CHECK(switching.steps[0].diag.empty());
    CHECK(std::abs(switching.steps[0].command[0]) <= 10.0);
  }

  SECTION("episodes are reproducible") {
    cfg.episode_steps = 6;
    cfg.plan.samples = 8;
    const EpisodeLog a = run_pendulum_episode(cfg, Variant::biased, 3);
    const EpisodeLog b = run_pendulum_episode(cfg, Variant::biased, 3);
    std::ostringstream sa, sb;
    write_jsonl(a, sa);
    write_jsonl(b, sb);
    CHECK(sa.str() == sb.str());

    // Different runs see different plant perturbations; the trajectories
    // separate once the plant responds. Step zero can coincide because the
    // planner acts on the shared initial state.
    const EpisodeLog c = run_pendulum_episode(cfg, Variant::biased, 4);
    CHECK(a.steps[1].state != c.steps[1].state);
  }
}

TEST_CASE("crossing box spawn") {
  ScenarioConfig cfg = braking_defaults();
  cfg.plan.seed = 31;

  SECTION("geometry relative to the robot pose") {
    bool saw_left = false;
    bool saw_right = false;
    for (int run = 0; run < 20; ++run) {
      const Eigen::Vector3d robot{1.0, -2.0, 0.0};
      const CrossingBox box = spawn_box(cfg, robot, run);
      const Eigen::Vector2d rel = box.position - robot.head<2>();
      CHECK(rel[0] == Catch::Approx(cfg.box_distance));
      const double lateral = rel[1];
      CHECK(std::abs(lateral) >=
            cfg.box_lateral - cfg.box_lateral_jitter - 1e-12);
      CHECK(std::abs(lateral) <=
            cfg.box_lateral + cfg.box_lateral_jitter + 1e-12);
      // The box always crosses back toward the path and lands on it.
      CHECK(box.velocity[0] == 0.0);
      CHECK(box.velocity[1] * lateral < 0.0);
      CHECK(std::abs(box.velocity[1]) == cfg.box_speed);
      CHECK(box.flight_time ==
            Catch::Approx(std::abs(lateral) / cfg.box_speed));
      (lateral > 0.0 ? saw_left : saw_right) = true;
    }
    CHECK(saw_left);
    CHECK(saw_right);
  }

  SECTION("spawn rotates with the robot heading") {
    const Eigen::Vector3d robot{0.0, 0.0, M_PI / 2.0};
    const CrossingBox box = spawn_box(cfg, robot, 0);
    CHECK(box.position[1] == Catch::Approx(cfg.box_distance).margin(1e-9));
    CHECK(std::abs(box.position[0]) > 1.0);  // lateral is along world x
    CHECK(box.velocity[1] == Catch::Approx(0.0).margin(1e-9));
  }

  SECTION("deterministic per run") {
    const Eigen::Vector3d robot{0.0, 0.0, 0.0};
    const CrossingBox a = spawn_box(cfg, robot, 5);
    const CrossingBox b = spawn_box(cfg, robot, 5);
    CHECK(a.position == b.position);
    CHECK(a.velocity == b.velocity);
  }
}

TEST_CASE("braking episodes") {
  ScenarioConfig cfg = braking_defaults();
  cfg.plan.seed = 8;
  cfg.plan.samples = 50;

  SECTION("the obstacle appears exactly at the injection step") {
    cfg.inject_time = 0.5;
    const EpisodeLog log = run_braking_episode(cfg, Variant::biased, 0);
    CHECK(log.event_step("obstacle_injected", -1) == 5);
  }

  SECTION("structure and variant rules") {
    cfg.episode_steps = 12;
    const EpisodeLog log = run_braking_episode(cfg, Variant::vanilla, 1);
    REQUIRE(!log.steps.empty());
    CHECK(log.steps.front().positions.size() == 1);
    CHECK(log.steps.front().command.size() == 2);
    CHECK(log.agent_count == 1);
    CHECK_THROWS(run_braking_episode(cfg, Variant::switching, 0));
    ScenarioConfig bad = cfg;
    bad.plan.sigma = Eigen::VectorXd::Constant(3, 0.5);
    CHECK_THROWS(run_braking_episode(bad, Variant::vanilla, 0));
  }
}

TEST_CASE("rectangle distance field") {
  const Rect r{0.0, 1.0, 0.0, 1.0};
  CHECK(rect_signed_distance({2.0, 2.0}, r) == Catch::Approx(std::sqrt(2.0)));
  CHECK(rect_signed_distance({0.5, 1.5}, r) == Catch::Approx(0.5));
  CHECK(rect_signed_distance({-0.25, 0.5}, r) == Catch::Approx(0.25));
  CHECK(rect_signed_distance({0.5, 0.5}, r) == Catch::Approx(-0.5));
  CHECK(rect_signed_distance({0.1, 0.5}, r) == Catch::Approx(-0.1));
  CHECK(rect_signed_distance({0.5, 1.0}, r) == 0.0);
}

TEST_CASE("goal estimation from observed motion") {
  VesselWorld world;

  SECTION("a quasi-stationary vessel is predicted to stay") {
    Eigen::Matrix<double, 6, 1> x = Eigen::Matrix<double, 6, 1>::Zero();
    x[0] = 3.0;
    x[1] = -1.0;
    x[3] = 0.03;
    const Eigen::Vector2d g = estimate_goal(x, world, 10.0);
    CHECK(g[0] == 3.0);
    CHECK(g[1] == -1.0);
  }

  SECTION("a moving vessel is extrapolated along its world velocity") {
    Eigen::Matrix<double, 6, 1> x = Eigen::Matrix<double, 6, 1>::Zero();
    x[0] = 1.0;
    x[1] = 2.0;
    x[2] = M_PI / 2.0;
    x[3] = 1.0;
    const Eigen::Vector2d g = estimate_goal(x, world, 10.0);
    CHECK(g[0] == Catch::Approx(1.0).margin(1e-9));
    CHECK(g[1] == Catch::Approx(12.0).margin(1e-9));
  }

  SECTION("estimates are clipped to the map") {
    world.lo = {-5.0, -5.0};
    world.hi = {5.0, 5.0};
    Eigen::Matrix<double, 6, 1> x = Eigen::Matrix<double, 6, 1>::Zero();
    x[3] = 2.0;
    const Eigen::Vector2d g = estimate_goal(x, world, 10.0);
    CHECK(g[0] == 5.0);
    CHECK(g[1] == 0.0);
  }
}

TEST_CASE("crossing setup") {
  ScenarioConfig cfg = crossing_defaults();
  cfg.plan.seed = 17;

  const VesselScenarioSetup setup = crossing_setup(cfg, 0);
  REQUIRE(setup.starts.size() == 2);
  REQUIRE(setup.goals.size() == 2);

  SECTION("routes cross at the origin at right angles") {
    CHECK(std::abs(setup.starts[0][0] + cfg.approach) <= cfg.start_jitter);
    CHECK(setup.starts[0][1] == 0.0);
    CHECK(setup.starts[0][2] == 0.0);
    CHECK(std::abs(setup.starts[1][1] + cfg.approach) <= cfg.start_jitter);
    CHECK(setup.starts[1][0] == 0.0);
    CHECK(setup.starts[1][2] == Catch::Approx(M_PI / 2.0));
    CHECK(setup.goals[0][0] == cfg.approach);
    CHECK(setup.goals[1][1] == cfg.approach);
    CHECK(setup.world.walls.empty());
  }

  SECTION("jitter is deterministic per run and varies across runs") {
    const VesselScenarioSetup again = crossing_setup(cfg, 0);
    CHECK(again.starts[0][0] == setup.starts[0][0]);
    bool varied = false;
    for (int run = 1; run < 6; ++run) {
      if (crossing_setup(cfg, run).starts[0][0] != setup.starts[0][0])
        varied = true;
    }
    CHECK(varied);
  }
}

TEST_CASE("corridor setup") {
  ScenarioConfig cfg = corridor_defaults();
  cfg.plan.seed = 23;
  const VesselScenarioSetup setup = corridor_setup(cfg, 0);
  REQUIRE(setup.starts.size() == 4);

  SECTION("two agents per travel direction on distinct lanes") {
    int left = 0;
    std::vector<double> start_lanes, goal_lanes;
    for (int i = 0; i < 4; ++i) {
      const double x = setup.starts[i][0];
      const double heading = setup.starts[i][2];
      if (x == 1.5) {
        ++left;
        CHECK(heading == 0.0);
        CHECK(setup.goals[i][0] == cfg.corridor_length - 1.5);
      } else {
        CHECK(x == cfg.corridor_length - 1.5);
        CHECK(heading == Catch::Approx(M_PI));
        CHECK(setup.goals[i][0] == 1.5);
      }
      start_lanes.push_back(setup.starts[i][1]);
      goal_lanes.push_back(setup.goals[i][1]);
    }
    CHECK(left == 2);
    std::sort(start_lanes.begin(), start_lanes.end());
    std::sort(goal_lanes.begin(), goal_lanes.end());
    const std::vector<double> lanes{-3.0, -1.0, 1.0, 3.0};
    CHECK(start_lanes == lanes);
    CHECK(goal_lanes == lanes);
  }

  SECTION("walls carve two narrow sections") {
    REQUIRE(setup.world.walls.size() == 6);
    CHECK(setup.world.clearance({10.0, 0.0}) == Catch::Approx(2.0));
    CHECK(setup.world.clearance({10.0, 2.5}) < 0.0);
    CHECK(setup.world.clearance({0.5, 0.0}) ==
          Catch::Approx(cfg.corridor_halfwidth));
    CHECK(setup.world.clearance({16.0, 5.0}) == Catch::Approx(1.0));
  }

  SECTION("assignments vary across runs") {
    bool varied = false;
    for (int run = 1; run < 10; ++run) {
      const VesselScenarioSetup other = corridor_setup(cfg, run);
      for (int i = 0; i < 4; ++i) {
        if (other.starts[i][1] != setup.starts[i][1] ||
            other.starts[i][0] != setup.starts[i][0])
          varied = true;
      }
    }
    CHECK(varied);
  }
}

TEST_CASE("joint stage cost mirrors the per-agent cost") {
  const MultiAgentCostConfig mac;
  VesselWorld world;
  world.walls.push_back({-2.0, 12.0, 3.0, 6.0});
  const double wall_clearance = 0.5;
  const double wall_penalty = 2000.0;

  std::array<Eigen::Vector2d, 8> goals_arr;
  goals_arr[0] = {10.0, 0.0};
  goals_arr[1] = {0.0, 10.0};
  goals_arr[2] = {-5.0, -5.0};
  const std::vector<Eigen::Vector2d> goals_vec{goals_arr[0], goals_arr[1],
                                               goals_arr[2]};

  const CounterRng rng(99, RngDomain::scenario);
  for (std::uint32_t trial = 0; trial < 30; ++trial) {
    Eigen::VectorXd xs(18);
    for (int i = 0; i < 18; ++i) {
      xs[i] = 6.0 * rng.normal(trial, static_cast<std::uint32_t>(i), 0, 0);
    }

    const double joint = joint_stage_cost(xs, 3, goals_arr, mac, world,
                                          wall_clearance, wall_penalty);

    std::vector<AgentPose> poses;
    double expected = 0.0;
    for (int a = 0; a < 3; ++a) {
      const Eigen::Matrix<double, 6, 1> s = xs.segment<6>(6 * a);
      poses.push_back(agent_pose(s));
      const double c = world.clearance(s.head<2>());
      if (c < 2.0 * wall_clearance)
        expected += wall_penalty * (2.0 * wall_clearance - c) / wall_clearance;
    }
    for (double c : multi_agent_cost(poses, goals_vec, mac)) expected += c;

    CHECK(joint == Catch::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("vessel episodes") {
  SECTION("a lone vessel reaches a nearby goal") {
    ScenarioConfig cfg = crossing_defaults();
    cfg.plan.seed = 5;
    cfg.plan.samples = 30;
    cfg.plan.horizon = 20;
    cfg.episode_steps = 120;

    VesselScenarioSetup setup;
    setup.starts = {Eigen::Matrix<double, 6, 1>::Zero()};
    setup.goals = {{3.0, 0.0}};

    const EpisodeLog log =
        run_vessel_episode(cfg, Variant::biased, 0, setup);
    CHECK(log.outcome == Outcome::success);
    const int arrival = log.event_step("goal_reached", 0);
    REQUIRE(arrival > 0);
    CHECK(arrival * cfg.dt() < 12.0);
    REQUIRE(!log.steps.empty());
    CHECK(log.steps.front().command.size() == 4);
    CHECK(log.steps.front().positions.size() == 1);
    REQUIRE(log.steps.front().diag.size() == 1);
    CHECK(log.steps.front().diag[0].ancillary_weight.size() == 4);
  }

  SECTION("two-agent crossing steps are well formed") {
    ScenarioConfig cfg = crossing_defaults();
    cfg.plan.seed = 5;
    cfg.plan.samples = 30;
    cfg.plan.horizon = 20;
    cfg.episode_steps = 25;

    const EpisodeLog log = run_crossing_episode(cfg, Variant::biased, 0);
    REQUIRE(!log.steps.empty());
    for (const auto& rec : log.steps) {
      CHECK(rec.command.size() == 8);
      CHECK(rec.positions.size() == 2);
      CHECK(rec.diag.size() <= 2);
      CHECK(std::isfinite(rec.stage_cost));
    }
    CHECK(log.agent_count == 2);
    CHECK(log.final_state.size() == 12);
  }

  SECTION("argument validation") {
    ScenarioConfig cfg = crossing_defaults();
    VesselScenarioSetup setup;
    setup.starts = {Eigen::Matrix<double, 6, 1>::Zero()};
    setup.goals = {{3.0, 0.0}};
    CHECK_THROWS(run_vessel_episode(cfg, Variant::switching, 0, setup));

    VesselScenarioSetup mismatched = setup;
    mismatched.goals.clear();
    CHECK_THROWS(run_vessel_episode(cfg, Variant::vanilla, 0, mismatched));

    ScenarioConfig bad = cfg;
    bad.vessel_sigma = Eigen::VectorXd::Constant(2, 1.0);
    CHECK_THROWS(run_vessel_episode(bad, Variant::vanilla, 0, setup));
  }
}

TEST_CASE("episode logs serialize to line-delimited records") {
  EpisodeLog log;
  log.scenario = "braking";
  log.variant = "biased";
  log.seed = 42;
  log.run_index = 3;
  log.dt = 0.1;
  log.agent_count = 1;

  StepRecord rec;
  rec.step = 0;
  rec.state = Eigen::Vector3d{0.0, 0.0, 0.0};
  rec.command = Eigen::Vector2d{1.0, 0.0};
  rec.positions = {{0.0, 0.0}};
  rec.stage_cost = 8.0;
  log.steps.push_back(rec);
  rec.step = 1;
  rec.state = Eigen::Vector3d{0.1, 0.0, 0.0};
  rec.stage_cost = 7.9;
  log.steps.push_back(rec);

  log.add_event(1, "goal_reached", 0);
  log.final_state = Eigen::Vector3d{0.2, 0.0, 0.0};
  log.final_stage_cost = 7.8;
  log.outcome = Outcome::success;

  std::ostringstream out;
  write_jsonl(log, out);

  std::istringstream in(out.str());
  std::string line;
  std::vector<nlohmann::json> records;
  while (std::getline(in, line)) records.push_back(nlohmann::json::parse(line));

  REQUIRE(records.size() == 5);
  CHECK(records[0]["record"] == "header");
  CHECK(records[0]["scenario"] == "braking");
  CHECK(records[0]["seed"] == 42);
  CHECK(records[1]["record"] == "step");
  CHECK(records[1]["state"].size() == 3);
  CHECK(records[2]["t"].get<double>() == Catch::Approx(0.1));
  CHECK(records[3]["record"] == "event");
  CHECK(records[3]["type"] == "goal_reached");
  CHECK(records[4]["record"] == "end");
  CHECK(records[4]["outcome"] == "success");
  CHECK(records[4]["steps"] == 2);
}
