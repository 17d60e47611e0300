#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace dgdiss {

/// Worker count: hardware concurrency, capped by DG_THREADS when set (>= 1).
unsigned worker_count();

/// SplitMix64 finaliser; used to give every sample its own stream.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t sample_seed(std::uint64_t base, std::uint64_t index);

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Results must be
/// written to per-index slots so the outcome is independent of scheduling.
/// The first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace dgdiss
