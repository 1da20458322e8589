#include <CLI11.hpp>

#include <cstdlib>
#include <ostream>
#include <utility>

#include "ipdmem/io.hpp"

namespace ipdmem {

namespace {

// Flags are gathered as (config key, value) pairs and applied on top of the
// config file, so both sources go through the same validation.
struct Overrides {
  std::vector<std::pair<std::string, std::string>> items;

  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_option_function<std::string>(flag, [this, key](const std::string& v) { items.emplace_back(key, v); },
                                           help);
  }
};

struct Command {
  std::string config_path;
  Overrides overrides;
  bool progress = false;
};

RunConfigFile resolve(const Command& command, RunConfigFile defaults) {
  RunConfigFile config = command.config_path.empty() ? std::move(defaults) : load_config(command.config_path);
  for (const auto& [key, value] : command.overrides.items) apply_setting(config, key, value);
  validate(config);
  return config;
}

void add_common(CLI::App* app, Command& command) {
  app->add_option("-c,--config", command.config_path, "Configuration file (key = value lines)");
  command.overrides.add(app, "--payoffs", "payoffs", "Payoffs T,R,P,S");
  command.overrides.add(app, "--tau", "tau", "Average games per pair");
  command.overrides.add(app, "--seed", "master_seed", "Seed");
  command.overrides.add(app, "--threads", "threads", "Worker threads (0 = all cores)");
}

void add_sweep_flags(CLI::App* app, Command& command) {
  command.overrides.add(app, "--realizations", "realizations", "Realizations per cell");
  command.overrides.add(app, "--mu-list", "mu_list", "Comma-separated memory ratios");
  command.overrides.add(app, "-o,--output", "output", "Output CSV path");
  app->add_flag("--progress", command.progress, "Print one line per finished cell to stderr");
}

void emit_table(const ResultsTable& table, const RunConfigFile& config, std::ostream& out) {
  std::filesystem::path path = config.output;
  if (path.empty()) {
    if (const char* dir = std::getenv(kOutputDirVariable); dir != nullptr && *dir != '\0')
      path = std::filesystem::path(dir) / (std::string(to_string(config.mode)) + ".csv");
  }
  if (path.empty()) {
    out << format_results(table);
    return;
  }
  write_results(table, path);
  out << "wrote " << table.rows.size() << " rows to " << path.string() << '\n';
}

int run_single(const Command& command, std::ostream& out) {
  RunConfigFile defaults;
  defaults.mode = RunMode::Single;
  const RunConfigFile config = resolve(command, defaults);
  auto env = make_config(single_run_roster(config), config.mu, config.master_seed.value_or(0), config.payoffs,
                         config.tau);
  const RealizationResult result = run_realization(env);

  out << "# rounds=" << result.rounds << " played=" << result.played_rounds
      << " refused=" << result.refused_rounds << " evictions=" << result.evictions << " N=" << env.n_agents
      << " mu=" << format_number(env.mu) << " M=" << env.memory_capacity() << " seed=" << env.seed << '\n';
  out << "id,rho,strategy,payoff,games_played,rounds_refused\n";
  for (std::size_t i = 0; i < result.agents.size(); ++i) {
    const AgentSpec& spec = env.roster[i];
    const AgentTally& tally = result.agents[i];
    out << spec.id << ',' << format_number(spec.rho) << ',' << to_string(spec.strategy) << ','
        << format_number(tally.total_payoff) << ',' << tally.games_played << ',' << tally.rounds_refused << '\n';
  }
  return 0;
}

int run_sweep(const Command& command, RunMode forced_mode, bool force, std::ostream& out, std::ostream& err) {
  RunConfigFile defaults;
  defaults.mode = RunMode::Single;  // sweep has no default mode
  RunConfigFile config = resolve(command, defaults);
  if (force) config.mode = forced_mode;
  if (config.mode != RunMode::Homogeneous && config.mode != RunMode::Heterogeneous && config.mode != RunMode::Heatmap)
    throw ConfigError("mode", "sweep needs --mode homogeneous or heterogeneous");
  if (!config.master_seed) throw ConfigError("master_seed", "--seed is required for sweeps");

  SweepOptions options = sweep_options(config);
  if (command.progress) options.progress = [&err](const std::string& line) { err << line << '\n'; };

  SweepResult sweep;
  switch (config.mode) {
    case RunMode::Homogeneous: sweep = homogeneous_sweep(options); break;
    case RunMode::Heterogeneous: sweep = heterogeneous_sweep(options); break;
    default: sweep = heatmap_sweep(options); break;
  }
  emit_table(to_table(sweep), config, out);
  return 0;
}

int run_verify(const Command& command, std::ostream& out) {
  RunConfigFile defaults;
  defaults.realizations = 1;
  const RunConfigFile config = resolve(command, defaults);
  if (!config.master_seed) throw ConfigError("master_seed", "--seed is required");
  const auto checks =
      verify_endpoints(*config.master_seed, config.realizations, config.payoffs, config.tau, config.threads);
  bool ok = true;
  for (const EndpointCheck& check : checks) {
    const bool pass = check.identical && check.evictions == 0;
    ok = ok && pass;
    out << (pass ? "PASS" : "FAIL") << " mu=" << format_number(check.mu) << " variants=" << check.variants
        << " identical=" << (check.identical ? "yes" : "no") << " evictions=" << check.evictions << '\n';
  }
  out << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Iterated prisoner's dilemma with bounded memory and forgetting strategies", "ipdmem"};
  app.require_subcommand(1);

  Command run_cmd, sweep_cmd, heatmap_cmd, verify_cmd;

  CLI::App* run = app.add_subcommand("run", "Run one realization and print per-agent payoffs");
  add_common(run, run_cmd);
  run_cmd.overrides.add(run, "--mode", "mode", "single | homogeneous | heterogeneous");
  run_cmd.overrides.add(run, "--strategy", "strategy", "Forgetting strategy (FR FMC FMD FMU FLP FMP)");
  run_cmd.overrides.add(run, "--agents-per-rho", "agents_per_rho", "Agents per cooperation probability");
  run_cmd.overrides.add(run, "--n", "n", "Agent count with evenly spaced cooperation probabilities");
  run_cmd.overrides.add(run, "--mu", "mu", "Memory ratio");

  CLI::App* sweep = app.add_subcommand("sweep", "Sweep the memory ratio and write payoff ratios of cooperators");
  add_common(sweep, sweep_cmd);
  add_sweep_flags(sweep, sweep_cmd);
  sweep_cmd.overrides.add(sweep, "--mode", "mode", "homogeneous | heterogeneous");
  sweep_cmd.overrides.add(sweep, "--strategy", "strategy", "Restrict a homogeneous sweep to one strategy");
  sweep_cmd.overrides.add(sweep, "--agents-per-rho", "agents_per_rho", "Agents per cooperation probability");

  CLI::App* heatmap = app.add_subcommand("heatmap", "Per-agent payoff ratios in the mixed environment");
  add_common(heatmap, heatmap_cmd);
  add_sweep_flags(heatmap, heatmap_cmd);

  CLI::App* verify = app.add_subcommand("verify-endpoints", "Check strategy inertness at mu = 0 and mu = 1");
  add_common(verify, verify_cmd);
  verify_cmd.overrides.add(verify, "--realizations", "realizations", "Realizations per labeling");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*run) return run_single(run_cmd, out);
    if (*sweep) return run_sweep(sweep_cmd, RunMode::Single, false, out, err);
    if (*heatmap) return run_sweep(heatmap_cmd, RunMode::Heatmap, true, out, err);
    if (*verify) return run_verify(verify_cmd, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace ipdmem
