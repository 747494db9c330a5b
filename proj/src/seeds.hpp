#pragma once

#include <cstdint>

#include "inr.hpp"

namespace fresh {

// Sub-seed for stream `stream` of candidate `config`:
//   base ^ mix(mix(mix(mix(family) ^ bits(p1)) ^ bits(p2)) ^ stream)
// where mix is the SplitMix64 finalizer and p1/p2 are the embedding
// parameters (p2 = 0 unless Finer). It depends only on the candidate itself,
// never on its position in a grid. Streams 0..repeats-1 seed the repeated
// initializations during selection; training uses stream 0 for the model and
// kBatchStream for mini-batch sampling.
std::uint64_t derive_seed(std::uint64_t base, const EmbeddingConfig& config, std::uint64_t stream);

inline constexpr std::uint64_t kBatchStream = 0x62617463680000ULL;

}  // namespace fresh
