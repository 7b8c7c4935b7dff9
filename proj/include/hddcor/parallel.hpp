#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace hddcor {

// Number of worker threads to use when the caller passes 0: the
// HDDCOR_THREADS environment variable if set and positive, otherwise the
// hardware concurrency.
unsigned default_thread_count();
unsigned resolve_threads(unsigned requested);

// Calls task(i) for every i in [0, count) on up to `threads` workers.
// Tasks must write only to index-addressed outputs; results are then
// independent of the thread count. The first exception thrown by any task
// is rethrown after all workers have joined.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task);

// splitmix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

// Seed for the independent RNG stream of work item `index` under `seed`.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace hddcor
