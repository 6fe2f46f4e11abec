#pragma once

#include <cstdint>
#include <random>

namespace idslab {

/// Engine used for every random draw in the library.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed of an independent stream `stream` derived from `master`. Used for per-realization
/// seeds so that realization r is reproducible regardless of how work is scheduled.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;

Rng make_rng(std::uint64_t seed);

}  // namespace idslab
