#pragma once

#include <cstddef>
#include <functional>

namespace parc {

/// Worker count used by library kernels. Defaults to 1 (sequential).
std::size_t thread_count();

/// Sets the worker count, clamped to [1, thread_cap()].
void set_thread_count(std::size_t n);

/// Upper bound on workers: PARC_THREADS if set and positive, otherwise
/// std::thread::hardware_concurrency().
std::size_t thread_cap();

/// Runs body(begin, end) over contiguous chunks of [0, n). Each index is
/// visited by exactly one call, so kernels that write disjoint outputs per
/// index give identical results for any thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace parc
