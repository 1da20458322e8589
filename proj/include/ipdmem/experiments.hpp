#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ipdmem/engine.hpp"

namespace ipdmem {

inline constexpr std::size_t kGridSize = 21;

/// Cooperation probabilities k / 20, k = 0..20.
std::array<double, kGridSize> rho_grid() noexcept;
/// Memory ratios m / 20, m = 0..20.
std::array<double, kGridSize> mu_grid() noexcept;

/// A subset B of the roster, identified by a predicate over agent specs.
struct GroupSelector {
  std::string label;
  std::function<bool(const AgentSpec&)> contains;

  static GroupSelector everyone();
  /// rho > 0.5
  static GroupSelector cooperators();
  /// rho > 0.5 and the given strategy
  static GroupSelector cooperators_of(Strategy strategy);
  static GroupSelector single(AgentId id);
};

/// phi_B = mean payoff over B / mean payoff over all agents. Returns nullopt
/// when the population mean payoff is zero. Throws std::invalid_argument when
/// the group is empty.
std::optional<double> payoff_ratio(const RealizationResult& result, const GroupSelector& group);

/// 21 * agents_per_rho agents sharing one strategy; ids run rho-major.
std::vector<AgentSpec> build_homogeneous(Strategy strategy, std::size_t agents_per_rho);
/// 126 agents, one per (rho, strategy); id = 6 * k + strategy index.
std::vector<AgentSpec> build_heterogeneous();

enum class SweepMode { Homogeneous, Heterogeneous, Heatmap };

std::string_view to_string(SweepMode mode) noexcept;

struct SweepCell {
  Strategy strategy = Strategy::FR;
  double mu = 0;
  std::optional<double> rho;  // heatmap cells only
  double phi_mean = 0;        // NaN if any realization was degenerate
  double phi_sd = 0;          // sample standard deviation; 0 for one realization
  std::size_t realizations = 0;
  std::uint64_t seed = 0;     // master seed handed to run_batch for this cell
};

struct SweepResult {
  SweepMode mode = SweepMode::Homogeneous;
  std::vector<SweepCell> cells;

  /// Curve cell for (strategy, mu); heatmap cell when rho is given.
  const SweepCell* find(Strategy strategy, double mu, std::optional<double> rho = std::nullopt) const;
  const SweepCell& at(Strategy strategy, double mu, std::optional<double> rho = std::nullopt) const;
};

struct SweepOptions {
  std::size_t realizations = 50;
  std::uint64_t master_seed = 0;
  std::vector<double> mu_values = [] {
    const auto grid = mu_grid();
    return std::vector<double>(grid.begin(), grid.end());
  }();
  PayoffMatrix payoffs{};
  std::uint32_t tau = 30;
  std::size_t agents_per_rho = 6;                              // homogeneous only
  std::vector<Strategy> strategies{kAllStrategies.begin(), kAllStrategies.end()};  // homogeneous only
  unsigned threads = 0;
  std::function<void(const std::string&)> progress;  // one line per finished cell
};

// Seeds: homogeneous cell (s, m) uses split_seed(split_seed(master, s), m);
// heterogeneous and heatmap cells at mu index m use split_seed(master, m).
// Realization k of a cell then runs with split_seed(cell_seed, k).
std::uint64_t homogeneous_cell_seed(std::uint64_t master, Strategy strategy, std::size_t mu_index) noexcept;
std::uint64_t heterogeneous_cell_seed(std::uint64_t master, std::size_t mu_index) noexcept;

/// phi of the cooperators for each strategy and mu, each strategy in its own
/// environment.
SweepResult homogeneous_sweep(const SweepOptions& options);
/// phi of each strategy's cooperators within the mixed environment.
SweepResult heterogeneous_sweep(const SweepOptions& options);
/// phi of every individual agent of the mixed environment.
SweepResult heatmap_sweep(const SweepOptions& options);

struct EndpointCheck {
  double mu = 0;
  bool identical = false;
  std::uint64_t evictions = 0;
  std::size_t variants = 0;
};

/// Runs the mixed roster at mu = 0 and mu = 1 under several strategy
/// labelings with one shared seed per realization, and compares the full
/// per-agent tallies.
std::vector<EndpointCheck> verify_endpoints(std::uint64_t seed, std::size_t realizations = 1,
                                            PayoffMatrix payoffs = {}, std::uint32_t tau = 30,
                                            unsigned threads = 0);

}  // namespace ipdmem
