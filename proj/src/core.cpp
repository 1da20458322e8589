#include "ipdmem/core.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ipdmem {

namespace {
constexpr std::array<std::string_view, 6> kStrategyTokens = {"FR", "FMC", "FMD", "FMU", "FLP", "FMP"};
}

std::string_view to_string(Strategy s) noexcept { return kStrategyTokens[index_of(s)]; }

std::optional<Strategy> parse_strategy(std::string_view token) noexcept {
  for (Strategy s : kAllStrategies) {
    if (to_string(s) == token) return s;
  }
  return std::nullopt;
}

void PayoffMatrix::validate() const {
  const Score t = temptation, r = reward, p = punishment, s = sucker;
  if (!(s < p)) throw std::invalid_argument("S < P violated");
  if (!(p < r)) throw std::invalid_argument("P < R violated");
  if (!(r < t)) throw std::invalid_argument("R < T violated");
  if (!(s + t < 2 * r)) throw std::invalid_argument("S + T < 2R violated");
}

std::pair<Score, Score> PayoffMatrix::outcome(Action first, Action second) const noexcept {
  const bool c1 = first == Action::Cooperate;
  const bool c2 = second == Action::Cooperate;
  if (c1 && c2) return {reward, reward};
  if (c1) return {sucker, temptation};
  if (c2) return {temptation, sucker};
  return {punishment, punishment};
}

// MemoryStore

std::vector<MemoryRecord>::iterator MemoryStore::lower_bound(AgentId opponent) {
  return std::lower_bound(records_.begin(), records_.end(), opponent,
                          [](const MemoryRecord& r, AgentId id) { return r.opponent < id; });
}

const MemoryRecord* MemoryStore::find(AgentId opponent) const noexcept {
  auto it = std::lower_bound(records_.begin(), records_.end(), opponent,
                             [](const MemoryRecord& r, AgentId id) { return r.opponent < id; });
  if (it == records_.end() || it->opponent != opponent) return nullptr;
  return &*it;
}

void MemoryStore::observe(AgentId opponent, Action action) {
  auto it = lower_bound(opponent);
  if (it == records_.end() || it->opponent != opponent)
    throw std::logic_error("observe: opponent " + std::to_string(opponent) + " not in memory");
  if (action == Action::Cooperate)
    ++it->coop_count;
  else
    ++it->defect_count;
}

void MemoryStore::insert(const MemoryRecord& record) {
  if (full()) throw std::logic_error("insert: memory is full");
  if (record.games() == 0) throw std::logic_error("insert: record without any game");
  auto it = lower_bound(record.opponent);
  if (it != records_.end() && it->opponent == record.opponent)
    throw std::logic_error("insert: opponent " + std::to_string(record.opponent) + " already in memory");
  records_.insert(it, record);
}

void MemoryStore::erase(AgentId opponent) {
  auto it = lower_bound(opponent);
  if (it == records_.end() || it->opponent != opponent)
    throw std::logic_error("erase: opponent " + std::to_string(opponent) + " not in memory");
  records_.erase(it);
}

// Perception and decisions

double perceived_ratio(std::uint64_t coop_count, std::uint64_t defect_count) noexcept {
  const double c = static_cast<double>(coop_count) + 1.0;
  const double d = static_cast<double>(defect_count) + 1.0;
  return c / (c + d);
}

Perception classify(double t) noexcept { return t > 0.5 ? Perception::Cooperator : Perception::Defector; }

Action draw_action(double rho, RandomStream& rng) {
  return rng.uniform01() < rho ? Action::Cooperate : Action::Defect;
}

bool willing_to_play(const AgentState& agent, AgentId opponent) {
  if (opponent == agent.spec.id) throw std::logic_error("willing_to_play: agent cannot face itself");
  const MemoryRecord* record = agent.memory.find(opponent);
  if (record == nullptr) return true;
  return classify(perceived_ratio(record->coop_count, record->defect_count)) == Perception::Cooperator;
}

bool record_outcome(AgentState& agent, AgentId opponent, Action opponent_action, Evictor evictor,
                    RandomStream& rng) {
  if (opponent == agent.spec.id) throw std::logic_error("record_outcome: agent cannot remember itself");
  MemoryStore& memory = agent.memory;
  if (memory.contains(opponent)) {
    memory.observe(opponent, opponent_action);
    return false;
  }
  if (memory.capacity() == 0) return false;

  bool evicted = false;
  if (memory.full()) {
    const AgentId victim = evictor(memory, rng);
    memory.erase(victim);  // throws if the evictor named an absent opponent
    evicted = true;
  }
  const bool cooperated = opponent_action == Action::Cooperate;
  memory.insert({opponent, cooperated ? 1u : 0u, cooperated ? 0u : 1u});
  return evicted;
}

}  // namespace ipdmem
