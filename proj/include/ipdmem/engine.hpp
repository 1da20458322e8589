#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ipdmem/core.hpp"

namespace ipdmem {

/// Everything needed to reproduce one realization bit-exactly.
struct EnvironmentConfig {
  std::size_t n_agents = 0;
  double mu = 0.0;
  PayoffMatrix payoffs{};
  std::uint32_t tau = 30;
  std::vector<AgentSpec> roster;
  std::uint64_t seed = 0;

  /// M = round(mu * N), halves rounded up.
  std::size_t memory_capacity() const noexcept;
  /// C(N, 2) * tau
  std::uint64_t round_count() const noexcept;

  /// Throws std::invalid_argument on any broken invariant.
  void validate() const;
};

/// Config with n_agents taken from the roster.
EnvironmentConfig make_config(std::vector<AgentSpec> roster, double mu, std::uint64_t seed,
                              PayoffMatrix payoffs = {}, std::uint32_t tau = 30);

std::size_t memory_capacity(double mu, std::size_t n_agents) noexcept;

struct RoundOutcome {
  bool played = false;
  Action first_action = Action::Defect;   // lower-index agent
  Action second_action = Action::Defect;  // higher-index agent
  Score first_payoff = 0;
  Score second_payoff = 0;
  std::uint32_t evictions = 0;
};

/// One pairing. Both agents check willingness (lower index first, stopping
/// at the first refusal). If both agree, actions are drawn lower index first,
/// payoffs are credited, and memories are updated lower index first.
RoundOutcome play_round(std::span<AgentState> agents, AgentId i, AgentId j, const PayoffMatrix& payoffs,
                        RandomStream& rng);

struct AgentTally {
  Score total_payoff = 0;
  std::uint64_t games_played = 0;
  std::uint64_t rounds_refused = 0;

  friend bool operator==(const AgentTally&, const AgentTally&) = default;
};

struct RealizationResult {
  EnvironmentConfig config;
  std::vector<AgentTally> agents;
  std::uint64_t rounds = 0;
  std::uint64_t played_rounds = 0;
  std::uint64_t refused_rounds = 0;
  std::uint64_t evictions = 0;
  std::uint64_t draws = 0;
};

/// Called after every round with the pair, the outcome and the agents' state.
using RoundObserver =
    std::function<void(AgentId, AgentId, const RoundOutcome&, std::span<const AgentState>)>;

RealizationResult run_realization(const EnvironmentConfig& config, const RoundObserver& observer = {});

/// Runs realizations k = 0..count-1 with seed split_seed(master_seed, k),
/// ignoring config.seed. Output is ordered by k. threads = 0 uses all cores.
std::vector<RealizationResult> run_batch(const EnvironmentConfig& config, std::size_t realizations,
                                         std::uint64_t master_seed, unsigned threads = 0);

/// Calls body(i) for i in [0, n) on a pool of worker threads. Rethrows the
/// first exception after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned threads = 0);

}  // namespace ipdmem
