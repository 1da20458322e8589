#pragma once

#include "ipdmem/core.hpp"

namespace ipdmem {

// Eviction policies. Each returns the opponent to forget from a non-empty
// store and throws std::logic_error on an empty one.
//
// Except for FR, every policy picks an extremum of a per-record key. Keys are
// compared in exact integer arithmetic, and ties are broken uniformly at
// random with one draw over the tied set (collected in opponent-id order).
// A unique extremum consumes no draw. FR always consumes exactly one draw.

/// Forget a uniformly random record.
AgentId evict_fr(const MemoryStore& memory, RandomStream& rng);
/// Forget the record with the highest perceived cooperation ratio.
AgentId evict_fmc(const MemoryStore& memory, RandomStream& rng);
/// Forget the record with the lowest perceived cooperation ratio.
AgentId evict_fmd(const MemoryStore& memory, RandomStream& rng);
/// Forget the record whose perceived ratio is closest to 0.5.
AgentId evict_fmu(const MemoryStore& memory, RandomStream& rng);
/// Forget the record with the fewest games.
AgentId evict_flp(const MemoryStore& memory, RandomStream& rng);
/// Forget the record with the most games.
AgentId evict_fmp(const MemoryStore& memory, RandomStream& rng);

Evictor evictor_for(Strategy strategy) noexcept;

}  // namespace ipdmem
