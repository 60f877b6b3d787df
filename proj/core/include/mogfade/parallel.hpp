#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace mogfade {

/// Worker cap: MOGFADE_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs fn(i) for i in [0, count) on up to worker_count() threads. Each index
/// runs exactly once; the first exception thrown is rethrown on the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

/// Seed for sub-stream `index` of `seed` (splitmix64 finalizer over both).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace mogfade
