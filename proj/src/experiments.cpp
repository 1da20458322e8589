#include "ipdmem/experiments.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ipdmem {

std::array<double, kGridSize> rho_grid() noexcept {
  std::array<double, kGridSize> grid{};
  for (std::size_t k = 0; k < kGridSize; ++k) grid[k] = static_cast<double>(k) / 20.0;
  return grid;
}

std::array<double, kGridSize> mu_grid() noexcept { return rho_grid(); }

GroupSelector GroupSelector::everyone() {
  return {"all", [](const AgentSpec&) { return true; }};
}

GroupSelector GroupSelector::cooperators() {
  return {"cooperators", [](const AgentSpec& a) { return a.rho > 0.5; }};
}

GroupSelector GroupSelector::cooperators_of(Strategy strategy) {
  return {"cooperators", [strategy](const AgentSpec& a) { return a.rho > 0.5 && a.strategy == strategy; }};
}

GroupSelector GroupSelector::single(AgentId id) {
  return {"agent " + std::to_string(id), [id](const AgentSpec& a) { return a.id == id; }};
}

std::optional<double> payoff_ratio(const RealizationResult& result, const GroupSelector& group) {
  const auto& roster = result.config.roster;
  if (roster.size() != result.agents.size() || roster.empty())
    throw std::invalid_argument("payoff_ratio: result has no agents");
  double group_sum = 0, total_sum = 0;
  std::size_t group_size = 0;
  for (std::size_t i = 0; i < roster.size(); ++i) {
    total_sum += result.agents[i].total_payoff;
    if (group.contains(roster[i])) {
      group_sum += result.agents[i].total_payoff;
      ++group_size;
    }
  }
  if (group_size == 0) throw std::invalid_argument("payoff_ratio: group '" + group.label + "' is empty");
  if (total_sum == 0) return std::nullopt;
  const double group_mean = group_sum / static_cast<double>(group_size);
  const double total_mean = total_sum / static_cast<double>(roster.size());
  return group_mean / total_mean;
}

std::vector<AgentSpec> build_homogeneous(Strategy strategy, std::size_t agents_per_rho) {
  if (agents_per_rho == 0) throw std::invalid_argument("agents_per_rho must be >= 1");
  std::vector<AgentSpec> roster;
  roster.reserve(kGridSize * agents_per_rho);
  for (double rho : rho_grid())
    for (std::size_t c = 0; c < agents_per_rho; ++c)
      roster.push_back({static_cast<AgentId>(roster.size()), rho, strategy});
  return roster;
}

std::vector<AgentSpec> build_heterogeneous() {
  std::vector<AgentSpec> roster;
  roster.reserve(kGridSize * kAllStrategies.size());
  for (double rho : rho_grid())
    for (Strategy s : kAllStrategies) roster.push_back({static_cast<AgentId>(roster.size()), rho, s});
  return roster;
}

std::string_view to_string(SweepMode mode) noexcept {
  switch (mode) {
    case SweepMode::Homogeneous: return "homogeneous";
    case SweepMode::Heterogeneous: return "heterogeneous";
    case SweepMode::Heatmap: return "heatmap";
  }
  return "unknown";
}

namespace {

bool same_value(double a, double b) noexcept { return std::abs(a - b) < 1e-12; }

struct Summary {
  double mean;
  double sd;
};

// NaN entries mark degenerate realizations and poison the mean.
Summary summarize(const std::vector<double>& values) {
  double sum = 0;
  for (double v : values) sum += v;
  const double n = static_cast<double>(values.size());
  const double mean = sum / n;
  if (values.size() < 2) return {mean, 0.0};
  double sq = 0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / (n - 1))};
}

double phi_or_nan(const RealizationResult& result, const GroupSelector& group) {
  return payoff_ratio(result, group).value_or(std::numeric_limits<double>::quiet_NaN());
}

void validate(const SweepOptions& options) {
  if (options.realizations == 0) throw std::invalid_argument("realizations must be >= 1");
  if (options.mu_values.empty()) throw std::invalid_argument("mu list is empty");
  for (double mu : options.mu_values)
    if (!(mu >= 0.0 && mu <= 1.0)) throw std::invalid_argument("mu values must lie in [0, 1]");
  options.payoffs.validate();
}

std::string format_progress(SweepMode mode, std::optional<Strategy> s, double mu) {
  std::ostringstream line;
  line << to_string(mode);
  if (s) line << ' ' << to_string(*s);
  line << " mu=" << mu << " done";
  return line.str();
}

// Runs the mixed environment for every mu and hands each realization to
// measure(mu_index, k, result), which stores what it needs.
template <typename Measure>
void run_mixed(const SweepOptions& options, Measure measure) {
  const auto roster = build_heterogeneous();
  const std::size_t reps = options.realizations;
  parallel_for(
      options.mu_values.size() * reps,
      [&](std::size_t job) {
        const std::size_t m = job / reps, k = job % reps;
        auto config = make_config(roster, options.mu_values[m],
                                  split_seed(heterogeneous_cell_seed(options.master_seed, m), k),
                                  options.payoffs, options.tau);
        measure(m, k, run_realization(config));
      },
      options.threads);
}

}  // namespace

const SweepCell* SweepResult::find(Strategy strategy, double mu, std::optional<double> rho) const {
  for (const SweepCell& cell : cells) {
    if (cell.strategy != strategy || !same_value(cell.mu, mu)) continue;
    if (rho.has_value() != cell.rho.has_value()) continue;
    if (rho && !same_value(*rho, *cell.rho)) continue;
    return &cell;
  }
  return nullptr;
}

const SweepCell& SweepResult::at(Strategy strategy, double mu, std::optional<double> rho) const {
  const SweepCell* cell = find(strategy, mu, rho);
  if (cell == nullptr) throw std::out_of_range("no sweep cell for " + std::string(to_string(strategy)));
  return *cell;
}

std::uint64_t homogeneous_cell_seed(std::uint64_t master, Strategy strategy, std::size_t mu_index) noexcept {
  return split_seed(split_seed(master, index_of(strategy)), mu_index);
}

std::uint64_t heterogeneous_cell_seed(std::uint64_t master, std::size_t mu_index) noexcept {
  return split_seed(master, mu_index);
}

SweepResult homogeneous_sweep(const SweepOptions& options) {
  validate(options);
  if (options.strategies.empty()) throw std::invalid_argument("no strategies to sweep");
  const std::size_t n_mu = options.mu_values.size();
  const std::size_t reps = options.realizations;
  const std::size_t n_cells = options.strategies.size() * n_mu;

  std::vector<std::vector<AgentSpec>> rosters;
  for (Strategy s : options.strategies) rosters.push_back(build_homogeneous(s, options.agents_per_rho));

  std::vector<std::vector<double>> phis(n_cells, std::vector<double>(reps));
  const auto cooperators = GroupSelector::cooperators();
  parallel_for(
      n_cells * reps,
      [&](std::size_t job) {
        const std::size_t cell = job / reps, k = job % reps;
        const std::size_t si = cell / n_mu, m = cell % n_mu;
        const std::uint64_t seed = homogeneous_cell_seed(options.master_seed, options.strategies[si], m);
        auto config = make_config(rosters[si], options.mu_values[m], split_seed(seed, k), options.payoffs,
                                  options.tau);
        phis[cell][k] = phi_or_nan(run_realization(config), cooperators);
      },
      options.threads);

  SweepResult result{SweepMode::Homogeneous, {}};
  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    const Strategy s = options.strategies[cell / n_mu];
    const std::size_t m = cell % n_mu;
    const Summary summary = summarize(phis[cell]);
    result.cells.push_back({s, options.mu_values[m], std::nullopt, summary.mean, summary.sd, reps,
                            homogeneous_cell_seed(options.master_seed, s, m)});
    if (options.progress) options.progress(format_progress(result.mode, s, options.mu_values[m]));
  }
  return result;
}

SweepResult heterogeneous_sweep(const SweepOptions& options) {
  validate(options);
  const std::size_t n_mu = options.mu_values.size();
  const std::size_t reps = options.realizations;
  constexpr std::size_t n_strategies = kAllStrategies.size();

  std::vector<GroupSelector> groups;
  for (Strategy s : kAllStrategies) groups.push_back(GroupSelector::cooperators_of(s));

  // phis[m][s][k]
  std::vector<std::vector<std::vector<double>>> phis(
      n_mu, std::vector<std::vector<double>>(n_strategies, std::vector<double>(reps)));
  run_mixed(options, [&](std::size_t m, std::size_t k, const RealizationResult& realization) {
    for (std::size_t s = 0; s < n_strategies; ++s) phis[m][s][k] = phi_or_nan(realization, groups[s]);
  });

  SweepResult result{SweepMode::Heterogeneous, {}};
  for (std::size_t s = 0; s < n_strategies; ++s) {
    for (std::size_t m = 0; m < n_mu; ++m) {
      const Summary summary = summarize(phis[m][s]);
      result.cells.push_back({kAllStrategies[s], options.mu_values[m], std::nullopt, summary.mean, summary.sd,
                              reps, heterogeneous_cell_seed(options.master_seed, m)});
    }
  }
  if (options.progress)
    for (double mu : options.mu_values) options.progress(format_progress(result.mode, std::nullopt, mu));
  return result;
}

SweepResult heatmap_sweep(const SweepOptions& options) {
  validate(options);
  const std::size_t n_mu = options.mu_values.size();
  const std::size_t reps = options.realizations;
  const auto roster = build_heterogeneous();

  // phis[m][agent][k]
  std::vector<std::vector<std::vector<double>>> phis(
      n_mu, std::vector<std::vector<double>>(roster.size(), std::vector<double>(reps)));
  run_mixed(options, [&](std::size_t m, std::size_t k, const RealizationResult& realization) {
    for (const AgentSpec& agent : roster)
      phis[m][agent.id][k] = phi_or_nan(realization, GroupSelector::single(agent.id));
  });

  // Ordered by strategy, then mu, then rho.
  SweepResult result{SweepMode::Heatmap, {}};
  for (Strategy s : kAllStrategies) {
    for (std::size_t m = 0; m < n_mu; ++m) {
      for (const AgentSpec& agent : roster) {
        if (agent.strategy != s) continue;
        const Summary summary = summarize(phis[m][agent.id]);
        result.cells.push_back({s, options.mu_values[m], agent.rho, summary.mean, summary.sd, reps,
                                heterogeneous_cell_seed(options.master_seed, m)});
      }
    }
  }
  if (options.progress)
    for (double mu : options.mu_values) options.progress(format_progress(result.mode, std::nullopt, mu));
  return result;
}

std::vector<EndpointCheck> verify_endpoints(std::uint64_t seed, std::size_t realizations, PayoffMatrix payoffs,
                                            std::uint32_t tau, unsigned threads) {
  if (realizations == 0) throw std::invalid_argument("realizations must be >= 1");

  // The mixed labeling, every uniform relabeling, and a rotated labeling.
  // Only strategies change between variants; ids and rho stay put.
  const auto base = build_heterogeneous();
  std::vector<std::vector<AgentSpec>> variants{base};
  for (Strategy s : kAllStrategies) {
    auto relabeled = base;
    for (AgentSpec& a : relabeled) a.strategy = s;
    variants.push_back(std::move(relabeled));
  }
  auto rotated = base;
  for (AgentSpec& a : rotated) a.strategy = kAllStrategies[(index_of(a.strategy) + 1) % kAllStrategies.size()];
  variants.push_back(std::move(rotated));

  std::vector<EndpointCheck> checks;
  for (double mu : {0.0, 1.0}) {
    const std::size_t n_variants = variants.size();
    std::vector<RealizationResult> runs(n_variants * realizations);
    parallel_for(
        runs.size(),
        [&](std::size_t job) {
          const std::size_t v = job / realizations, k = job % realizations;
          runs[job] = run_realization(make_config(variants[v], mu, split_seed(seed, k), payoffs, tau));
        },
        threads);

    EndpointCheck check{mu, true, 0, n_variants};
    for (std::size_t job = 0; job < runs.size(); ++job) {
      const std::size_t k = job % realizations;
      const RealizationResult& reference = runs[k];
      check.evictions += runs[job].evictions;
      check.identical = check.identical && runs[job].agents == reference.agents &&
                        runs[job].draws == reference.draws;
    }
    checks.push_back(check);
  }
  return checks;
}

}  // namespace ipdmem
