#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace first {

/// Resolve the worker count for a parallel region. A request of 0 means
/// "as many as the runtime offers". The FIRST_THREADS environment variable,
/// when set to a positive integer, caps the result.
std::size_t resolve_workers(std::size_t requested);

/// Run body(i) for i in [0, count) on up to `workers` threads with a static
/// schedule. body must only write to state owned by index i.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& body);

/// Like parallel_for, but also hands the body the id of the executing worker
/// in [0, workers) so it can reuse per-worker scratch space.
void parallel_for_worker(std::size_t count, std::size_t workers,
                         const std::function<void(std::size_t index, std::size_t worker)>& body);

/// splitmix64 finaliser. Used to derive independent RNG seeds from a base
/// seed and a stream id.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace first
