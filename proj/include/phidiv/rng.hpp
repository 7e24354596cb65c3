#pragma once

#include <cstdint>
#include <random>

namespace phidiv {

// Identifies one independent random stream. Monte Carlo replication m uses
// stream_id = m so results do not depend on thread scheduling.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

using Engine = std::mt19937_64;

// Engine keyed by (master_seed, stream_id). Both words are passed through
// splitmix64 before seeding so adjacent stream ids give unrelated states.
Engine make_engine(SeedSpec seed);

std::uint64_t splitmix64(std::uint64_t x);

// Standard normal draw. Wraps std::normal_distribution so callers that need
// mean + sd * z with sd == 0 stay well defined.
double standard_normal(Engine& engine);

}  // namespace phidiv
