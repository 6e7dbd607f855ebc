#pragma once

#include <cstdint>
#include <random>

namespace tiltmap {

using Rng = std::mt19937_64;

/// Counter-based seed derivation: every (master, stream, index) triple maps
/// to an independent seed, so batch items can be generated in any order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) noexcept;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace tiltmap
