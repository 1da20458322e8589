#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "ipdmem/random.hpp"

namespace ipdmem {

using AgentId = std::uint32_t;
using Score = double;

enum class Action : std::uint8_t { Cooperate, Defect };

enum class Perception : std::uint8_t { Cooperator, Defector };

/// Forgetting strategies. The tokens FR, FMC, FMD, FMU, FLP, FMP are the
/// serialized form in configs and CSV output.
enum class Strategy : std::uint8_t { FR, FMC, FMD, FMU, FLP, FMP };

inline constexpr std::array<Strategy, 6> kAllStrategies = {
    Strategy::FR, Strategy::FMC, Strategy::FMD, Strategy::FMU, Strategy::FLP, Strategy::FMP};

std::string_view to_string(Strategy s) noexcept;
std::optional<Strategy> parse_strategy(std::string_view token) noexcept;
constexpr std::size_t index_of(Strategy s) noexcept { return static_cast<std::size_t>(s); }

/// The four prisoner's dilemma payoffs.
struct PayoffMatrix {
  Score temptation = 5;
  Score reward = 3;
  Score punishment = 1;
  Score sucker = 0;

  /// Throws std::invalid_argument naming the first violated inequality
  /// ("S < P violated", ..., "S + T < 2R violated").
  void validate() const;

  /// Payoffs (first, second) for the given pair of actions.
  std::pair<Score, Score> outcome(Action first, Action second) const noexcept;

  friend bool operator==(const PayoffMatrix&, const PayoffMatrix&) = default;
};

struct AgentSpec {
  AgentId id = 0;
  double rho = 0.0;
  Strategy strategy = Strategy::FR;

  friend bool operator==(const AgentSpec&, const AgentSpec&) = default;
};

/// What an agent remembers about one opponent: how often that opponent
/// cooperated and defected against it.
struct MemoryRecord {
  AgentId opponent = 0;
  std::uint64_t coop_count = 0;
  std::uint64_t defect_count = 0;

  std::uint64_t games() const noexcept { return coop_count + defect_count; }

  friend bool operator==(const MemoryRecord&, const MemoryRecord&) = default;
};

/// Bounded per-opponent memory. Records are kept sorted by opponent id so
/// iteration order is index order.
class MemoryStore {
 public:
  explicit MemoryStore(std::size_t capacity = 0) : capacity_(capacity) {}

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  bool full() const noexcept { return records_.size() >= capacity_; }

  const MemoryRecord* find(AgentId opponent) const noexcept;
  bool contains(AgentId opponent) const noexcept { return find(opponent) != nullptr; }
  std::span<const MemoryRecord> records() const noexcept { return records_; }

  /// Counts one more action of a remembered opponent. Throws std::logic_error
  /// if the opponent is not remembered.
  void observe(AgentId opponent, Action action);

  /// Adds a record for an unknown opponent. Throws std::logic_error when the
  /// store is full, the opponent is already present, or the record is empty.
  void insert(const MemoryRecord& record);

  /// Throws std::logic_error if the opponent is not remembered.
  void erase(AgentId opponent);

 private:
  std::vector<MemoryRecord>::iterator lower_bound(AgentId opponent);

  std::size_t capacity_;
  std::vector<MemoryRecord> records_;
};

struct AgentState {
  AgentSpec spec;
  MemoryStore memory;
  Score total_payoff = 0;
  std::uint64_t games_played = 0;
  std::uint64_t rounds_refused = 0;
};

/// (c + 1) / (c + d + 2)
double perceived_ratio(std::uint64_t coop_count, std::uint64_t defect_count) noexcept;

/// Cooperator iff t > 0.5.
Perception classify(double t) noexcept;

/// Cooperate iff u < rho for a single uniform draw u in [0, 1).
Action draw_action(double rho, RandomStream& rng);

/// Unknown opponents and opponents perceived as cooperators are played with.
bool willing_to_play(const AgentState& agent, AgentId opponent);

using Evictor = AgentId (*)(const MemoryStore&, RandomStream&);

/// Updates `agent`'s memory after a game against `opponent`. Returns true if
/// a record had to be evicted to make room.
bool record_outcome(AgentState& agent, AgentId opponent, Action opponent_action, Evictor evictor,
                    RandomStream& rng);

}  // namespace ipdmem
