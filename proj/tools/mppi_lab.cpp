// Entry point for running scenarios, sweeps, comparisons, and the fast
// validation suite. Everything an invocation needs is reconstructable
// from the files it writes into the output directory.

#include "CLI11.hpp"

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mppi/harness/acceptance.hpp"
#include "mppi/harness/runner.hpp"
#include "mppi/harness/sweep.hpp"
#include "mppi/sim/scenario_config.hpp"
#include "mppi/util/config.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitAcceptance = 3;

struct CommonFlags {
  std::string scenario;
  std::string variant = "biased";
  std::string variants = "vanilla,biased";
  int samples = 0;
  std::uint64_t seed = 0;
  int runs = 20;
  std::string config_path;
  std::string out_dir = "out";
  int jobs = 1;

  CLI::Option* scenario_opt = nullptr;
  CLI::Option* samples_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool wants_variant) {
  f.scenario_opt = cmd->add_option(
      "--scenario", f.scenario, "Scenario id: pendulum|crossing|corridor|braking");
  if (wants_variant) {
    cmd->add_option("--variant", f.variant,
                    "Controller variant: vanilla|biased|switching");
  }
  f.samples_opt = cmd->add_option("--samples", f.samples,
                                  "Sample count K (overrides scenario default)");
  f.seed_opt =
      cmd->add_option("--seed", f.seed, "Experiment seed shared across runs");
  cmd->add_option("--runs", f.runs, "Number of randomized episodes")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--config", f.config_path,
                  "Key=value config file applied over scenario defaults");
  cmd->add_option("--out", f.out_dir, "Output directory");
  cmd->add_option("--jobs", f.jobs, "Worker threads across episodes")
      ->check(CLI::PositiveNumber);
}

// Defaults, then the config file, then explicit flags.
mppi::ScenarioConfig effective_config(const CommonFlags& f) {
  mppi::KeyValueConfig file_kv;
  if (!f.config_path.empty())
    file_kv = mppi::KeyValueConfig::from_file(f.config_path);

  std::string scenario = f.scenario;
  if (f.scenario_opt == nullptr || f.scenario_opt->count() == 0) {
    if (file_kv.has("scenario"))
      scenario = file_kv.get_string("scenario", "");
    else if (scenario.empty())
      throw std::runtime_error("no scenario given (flag --scenario or config)");
  }

  mppi::ScenarioConfig cfg = mppi::scenario_defaults(scenario);
  cfg = mppi::apply_overrides(cfg, file_kv);

  mppi::KeyValueConfig flag_kv;
  if (f.samples_opt && f.samples_opt->count())
    flag_kv.set("samples", std::to_string(f.samples));
  if (f.seed_opt && f.seed_opt->count())
    flag_kv.set("seed", std::to_string(f.seed));
  cfg = mppi::apply_overrides(cfg, flag_kv);
  return cfg;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

// The effective config plus the invocation, dropped next to the results.
void write_provenance(const std::filesystem::path& dir,
                      const mppi::ScenarioConfig& cfg,
                      const std::string& invocation) {
  write_text(dir / "config.cfg", mppi::to_key_values(cfg).serialize());
  write_text(dir / "invocation.txt", invocation);
}

int cmd_run(const CommonFlags& f) {
  const mppi::ScenarioConfig cfg = effective_config(f);
  const mppi::Variant variant = mppi::parse_variant(f.variant);

  const auto logs = mppi::run_batch(cfg, variant, f.runs, f.jobs);
  const auto metrics = mppi::score_batch(logs, cfg);

  namespace fs = std::filesystem;
  const fs::path out(f.out_dir);
  fs::create_directories(out);

  std::vector<std::vector<std::string>> rows;
  rows.reserve(metrics.size());
  for (const auto& m : metrics) rows.push_back(mppi::run_csv_row(m));
  std::ostringstream csv;
  mppi::write_csv(csv, mppi::run_csv_header(), rows);
  write_text(out / "metrics.csv", csv.str());

  std::ostringstream raw;
  for (const auto& log : logs) mppi::write_jsonl(log, raw);
  write_text(out / "episodes.jsonl", raw.str());

  std::ostringstream invocation;
  invocation << "command = run\nvariant = " << f.variant
             << "\nruns = " << f.runs << "\njobs = " << f.jobs << "\n";
  write_provenance(out, cfg, invocation.str());

  const mppi::SweepRow summary = mppi::summarize(
      cfg.scenario, mppi::to_string(variant), cfg.plan.samples, metrics);
  std::ostringstream table;
  mppi::write_csv(table, mppi::sweep_csv_header(),
                  {mppi::sweep_csv_row(summary)});
  std::cout << table.str();
  std::cout << "wrote " << (out / "metrics.csv").string() << " and "
            << (out / "episodes.jsonl").string() << "\n";
  return kExitOk;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoi(item));
  }
  if (out.empty()) throw std::runtime_error("empty list: " + text);
  return out;
}

std::vector<mppi::Variant> parse_variant_list(const std::string& text) {
  std::vector<mppi::Variant> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(mppi::parse_variant(item));
  }
  if (out.empty()) throw std::runtime_error("no variants given");
  return out;
}

int cmd_sweep(const CommonFlags& f, const std::string& k_list_text) {
  const mppi::ScenarioConfig cfg = effective_config(f);
  const std::vector<mppi::Variant> variants = parse_variant_list(f.variants);
  const std::vector<int> k_list =
      k_list_text.empty() ? std::vector<int>{cfg.plan.samples}
                          : parse_int_list(k_list_text);

  const auto rows = mppi::sweep(cfg, variants, k_list, f.runs, f.jobs);

  namespace fs = std::filesystem;
  const fs::path out(f.out_dir);
  fs::create_directories(out);
  std::vector<std::vector<std::string>> cells;
  cells.reserve(rows.size());
  for (const auto& r : rows) cells.push_back(mppi::sweep_csv_row(r));
  std::ostringstream csv;
  mppi::write_csv(csv, mppi::sweep_csv_header(), cells);
  write_text(out / "sweep.csv", csv.str());

  std::ostringstream invocation;
  invocation << "command = sweep\nvariants = " << f.variants
             << "\nsamples_list = "
             << (k_list_text.empty() ? std::to_string(cfg.plan.samples)
                                     : k_list_text)
             << "\nruns = " << f.runs << "\njobs = " << f.jobs << "\n";
  write_provenance(out, cfg, invocation.str());

  std::cout << csv.str();
  std::cout << "wrote " << (out / "sweep.csv").string() << "\n";
  return kExitOk;
}

int cmd_compare(const CommonFlags& f) {
  const mppi::ScenarioConfig cfg = effective_config(f);
  const std::vector<mppi::Variant> variants = parse_variant_list(f.variants);
  if (variants.size() != 2)
    throw std::runtime_error("compare needs exactly two variants");

  const mppi::CompareResult res =
      mppi::compare_variants(cfg, variants[0], variants[1], f.runs, f.jobs);

  namespace fs = std::filesystem;
  const fs::path out(f.out_dir);
  fs::create_directories(out);
  std::ostringstream csv;
  mppi::write_csv(csv, mppi::compare_csv_header(), mppi::compare_csv_rows(res));
  write_text(out / "compare.csv", csv.str());

  std::ostringstream invocation;
  invocation << "command = compare\nvariants = " << f.variants
             << "\nruns = " << f.runs << "\njobs = " << f.jobs << "\n";
  write_provenance(out, cfg, invocation.str());

  std::cout << csv.str();
  std::cout << "wrote " << (out / "compare.csv").string() << "\n";
  return kExitOk;
}

int cmd_validate(int jobs) {
  using mppi::CheckResult;
  std::vector<CheckResult> results;
  results.push_back(mppi::check_weight_properties());
  results.push_back(mppi::check_riccati());
  results.push_back(mppi::check_dynamics_oracles());
  results.push_back(mppi::check_lambda_autotune());
  results.push_back(mppi::check_bias_demonstration());
  results.push_back(mppi::check_replay_determinism());
  results.push_back(mppi::smoke_scenario("pendulum", mppi::Variant::biased, 5, jobs));
  results.push_back(mppi::smoke_scenario("braking", mppi::Variant::biased, 5, jobs));
  results.push_back(mppi::smoke_scenario("crossing", mppi::Variant::biased, 5, jobs));
  results.push_back(mppi::smoke_scenario("corridor", mppi::Variant::biased, 5, jobs));

  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  ("
              << r.detail << ")\n";
    all = all && r.pass;
  }
  std::cout << (all ? "validate: all checks passed\n"
                    : "validate: FAILURES above\n");
  return all ? kExitOk : kExitAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampling-based MPC lab: classical and ancillary-informed MPPI"};
  app.require_subcommand(1);

  CommonFlags run_flags, sweep_flags, compare_flags;
  std::string sweep_k_list;
  int validate_jobs = 1;

  CLI::App* run = app.add_subcommand("run", "Run one scenario variant");
  add_common(run, run_flags, true);

  CLI::App* sweep =
      app.add_subcommand("sweep", "Cross product of variants and sample counts");
  add_common(sweep, sweep_flags, false);
  sweep->add_option("--variants", sweep_flags.variants,
                    "Comma-separated variant list");
  sweep->add_option("--samples-list", sweep_k_list,
                    "Comma-separated K values (default: scenario K)");

  CLI::App* compare =
      app.add_subcommand("compare", "Two variants with paired-success stats");
  add_common(compare, compare_flags, false);
  compare->add_option("--variants", compare_flags.variants,
                      "Comma-separated pair, e.g. vanilla,biased");

  CLI::App* validate =
      app.add_subcommand("validate", "Fast property checks and smoke runs");
  validate->add_option("--jobs", validate_jobs, "Worker threads")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(run_flags);
    if (sweep->parsed()) return cmd_sweep(sweep_flags, sweep_k_list);
    if (compare->parsed()) return cmd_compare(compare_flags);
    if (validate->parsed()) return cmd_validate(validate_jobs);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::runtime_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
