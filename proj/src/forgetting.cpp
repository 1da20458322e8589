#include "ipdmem/forgetting.hpp"

#include <stdexcept>
#include <vector>

namespace ipdmem {

namespace {

using u128 = uint128_t;

// Non-negative rational num/den, den > 0.
struct Fraction {
  std::uint64_t num;
  std::uint64_t den;
};

int compare(Fraction a, Fraction b) noexcept {
  const u128 lhs = static_cast<u128>(a.num) * b.den;
  const u128 rhs = static_cast<u128>(b.num) * a.den;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

Fraction ratio_of(const MemoryRecord& r) noexcept { return {r.coop_count + 1, r.games() + 2}; }

// |t - 1/2| = |c - d| / (2 (c + d + 2))
Fraction unpredictability_of(const MemoryRecord& r) noexcept {
  const std::uint64_t c = r.coop_count, d = r.defect_count;
  return {c > d ? c - d : d - c, 2 * (r.games() + 2)};
}

Fraction games_of(const MemoryRecord& r) noexcept { return {r.games(), 1}; }

void require_nonempty(const MemoryStore& memory) {
  if (memory.empty()) throw std::logic_error("evict: memory is empty");
}

// Returns an opponent attaining the extremum of key; sign = +1 for max,
// -1 for min.
template <typename Key>
AgentId select_extremal(const MemoryStore& memory, RandomStream& rng, Key key, int sign) {
  require_nonempty(memory);
  auto records = memory.records();
  thread_local std::vector<AgentId> ties;
  ties.clear();
  Fraction best = key(records.front());
  ties.push_back(records.front().opponent);
  for (std::size_t i = 1; i < records.size(); ++i) {
    const Fraction value = key(records[i]);
    const int cmp = compare(value, best) * sign;
    if (cmp > 0) {
      best = value;
      ties.clear();
      ties.push_back(records[i].opponent);
    } else if (cmp == 0) {
      ties.push_back(records[i].opponent);
    }
  }
  if (ties.size() == 1) return ties.front();
  return ties[rng.below(ties.size())];
}

}  // namespace

AgentId evict_fr(const MemoryStore& memory, RandomStream& rng) {
  require_nonempty(memory);
  return memory.records()[rng.below(memory.size())].opponent;
}

AgentId evict_fmc(const MemoryStore& memory, RandomStream& rng) {
  return select_extremal(memory, rng, ratio_of, +1);
}

AgentId evict_fmd(const MemoryStore& memory, RandomStream& rng) {
  return select_extremal(memory, rng, ratio_of, -1);
}

AgentId evict_fmu(const MemoryStore& memory, RandomStream& rng) {
  return select_extremal(memory, rng, unpredictability_of, -1);
}

AgentId evict_flp(const MemoryStore& memory, RandomStream& rng) {
  return select_extremal(memory, rng, games_of, -1);
}

AgentId evict_fmp(const MemoryStore& memory, RandomStream& rng) {
  return select_extremal(memory, rng, games_of, +1);
}

Evictor evictor_for(Strategy strategy) noexcept {
  switch (strategy) {
    case Strategy::FR: return &evict_fr;
    case Strategy::FMC: return &evict_fmc;
    case Strategy::FMD: return &evict_fmd;
    case Strategy::FMU: return &evict_fmu;
    case Strategy::FLP: return &evict_flp;
    case Strategy::FMP: return &evict_fmp;
  }
  return &evict_fr;
}

}  // namespace ipdmem
