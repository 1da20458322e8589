#include "ipdmem/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "ipdmem/forgetting.hpp"

namespace ipdmem {

std::size_t memory_capacity(double mu, std::size_t n_agents) noexcept {
  // The epsilon absorbs representation error in grid values such as 0.15.
  return static_cast<std::size_t>(std::floor(mu * static_cast<double>(n_agents) + 0.5 + 1e-9));
}

std::size_t EnvironmentConfig::memory_capacity() const noexcept { return ipdmem::memory_capacity(mu, n_agents); }

std::uint64_t EnvironmentConfig::round_count() const noexcept {
  const std::uint64_t n = n_agents;
  return n * (n - 1) / 2 * tau;
}

void EnvironmentConfig::validate() const {
  if (n_agents < 2) throw std::invalid_argument("environment needs at least 2 agents");
  if (roster.size() != n_agents)
    throw std::invalid_argument("roster size " + std::to_string(roster.size()) + " != n_agents " +
                                std::to_string(n_agents));
  if (!(mu >= 0.0 && mu <= 1.0)) throw std::invalid_argument("mu must lie in [0, 1]");
  if (tau == 0) throw std::invalid_argument("tau must be positive");
  payoffs.validate();
  for (std::size_t i = 0; i < roster.size(); ++i) {
    const AgentSpec& spec = roster[i];
    if (spec.id != i) throw std::invalid_argument("roster ids must be 0..N-1 in order");
    if (!(spec.rho >= 0.0 && spec.rho <= 1.0))
      throw std::invalid_argument("rho of agent " + std::to_string(i) + " outside [0, 1]");
  }
}

EnvironmentConfig make_config(std::vector<AgentSpec> roster, double mu, std::uint64_t seed,
                              PayoffMatrix payoffs, std::uint32_t tau) {
  EnvironmentConfig config;
  config.n_agents = roster.size();
  config.mu = mu;
  config.payoffs = payoffs;
  config.tau = tau;
  config.roster = std::move(roster);
  config.seed = seed;
  return config;
}

RoundOutcome play_round(std::span<AgentState> agents, AgentId i, AgentId j, const PayoffMatrix& payoffs,
                        RandomStream& rng) {
  if (i == j) throw std::logic_error("play_round: an agent cannot play itself");
  if (i > j) std::swap(i, j);
  AgentState& first = agents[i];
  AgentState& second = agents[j];

  RoundOutcome outcome;
  if (!willing_to_play(first, j) || !willing_to_play(second, i)) {
    ++first.rounds_refused;
    ++second.rounds_refused;
    return outcome;
  }

  outcome.played = true;
  outcome.first_action = draw_action(first.spec.rho, rng);
  outcome.second_action = draw_action(second.spec.rho, rng);
  std::tie(outcome.first_payoff, outcome.second_payoff) =
      payoffs.outcome(outcome.first_action, outcome.second_action);

  first.total_payoff += outcome.first_payoff;
  second.total_payoff += outcome.second_payoff;
  ++first.games_played;
  ++second.games_played;

  outcome.evictions += record_outcome(first, j, outcome.second_action, evictor_for(first.spec.strategy), rng);
  outcome.evictions += record_outcome(second, i, outcome.first_action, evictor_for(second.spec.strategy), rng);
  return outcome;
}

RealizationResult run_realization(const EnvironmentConfig& config, const RoundObserver& observer) {
  config.validate();
  const std::size_t n = config.n_agents;
  const std::size_t capacity = config.memory_capacity();

  std::vector<AgentState> agents;
  agents.reserve(n);
  for (const AgentSpec& spec : config.roster) agents.push_back(AgentState{spec, MemoryStore(capacity)});

  // Pair index k in [0, C(N,2)) decodes to the k-th (i, j), i < j, in
  // lexicographic order.
  std::vector<std::pair<AgentId, AgentId>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (AgentId i = 0; i < n; ++i)
    for (AgentId j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  RandomStream rng(config.seed);
  RealizationResult result;
  result.rounds = config.round_count();
  for (std::uint64_t round = 0; round < result.rounds; ++round) {
    const auto [i, j] = pairs[rng.below(pairs.size())];
    const RoundOutcome outcome = play_round(agents, i, j, config.payoffs, rng);
    if (outcome.played)
      ++result.played_rounds;
    else
      ++result.refused_rounds;
    result.evictions += outcome.evictions;
    if (observer) observer(i, j, outcome, agents);
  }

  result.agents.reserve(n);
  for (const AgentState& agent : agents)
    result.agents.push_back({agent.total_payoff, agent.games_played, agent.rounds_refused});
  result.draws = rng.draws();
  result.config = config;
  return result;
}

std::vector<RealizationResult> run_batch(const EnvironmentConfig& config, std::size_t realizations,
                                         std::uint64_t master_seed, unsigned threads) {
  if (realizations == 0) throw std::invalid_argument("run_batch: realizations must be >= 1");
  config.validate();
  std::vector<RealizationResult> results(realizations);
  parallel_for(
      realizations,
      [&](std::size_t k) {
        EnvironmentConfig local = config;
        local.seed = split_seed(master_seed, k);
        results[k] = run_realization(local);
      },
      threads);
  return results;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = n;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace ipdmem
