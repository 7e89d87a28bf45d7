#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <vector>

namespace selfaction {

/// Worker count used by parallel_for_index. Resolved once from
/// ALPHA_SELFACTION_THREADS (default 1) unless overridden.
int thread_count();
void set_thread_count(int n);

/// Runs body(i) for i in [0, n). Indices are split into contiguous chunks, one
/// per worker; the first exception thrown is rethrown on the caller.
/// Callers write results by index and reduce in a fixed order afterwards, so
/// output does not depend on the worker count.
void parallel_for_index(std::size_t n, const std::function<void(std::size_t)>& body);

template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& fn) {
  std::vector<T> out(n);
  parallel_for_index(n, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace selfaction
