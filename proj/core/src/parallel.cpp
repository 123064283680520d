#include "first/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <string_view>

namespace first {

namespace {

std::size_t env_cap() {
  const char* raw = std::getenv("FIRST_THREADS");
  if (raw == nullptr) return 0;
  std::string_view text{raw};
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return 0;
  return value;
}

}  // namespace

std::size_t resolve_workers(std::size_t requested) {
  std::size_t workers = requested == 0 ? static_cast<std::size_t>(omp_get_max_threads()) : requested;
  if (const std::size_t cap = env_cap(); cap > 0) workers = std::min(workers, cap);
  return std::max<std::size_t>(workers, 1);
}

void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& body) {
  parallel_for_worker(count, workers, [&](std::size_t i, std::size_t) { body(i); });
}

void parallel_for_worker(std::size_t count, std::size_t workers,
                         const std::function<void(std::size_t, std::size_t)>& body) {
  if (count == 0) return;
  workers = std::min(std::max<std::size_t>(workers, 1), count);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i, 0);
    return;
  }
  const auto n = static_cast<std::int64_t>(count);
  std::exception_ptr failure;
#pragma omp parallel num_threads(static_cast<int>(workers))
  {
    const auto worker = static_cast<std::size_t>(omp_get_thread_num());
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        body(static_cast<std::size_t>(i), worker);
      } catch (...) {
#pragma omp critical(first_parallel_failure)
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace first
