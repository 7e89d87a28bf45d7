#include "selfaction/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace selfaction {

namespace {

int from_environment() {
  const char* env = std::getenv("ALPHA_SELFACTION_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  try {
    const int n = std::stoi(env);
    return n >= 1 ? n : 1;
  } catch (const std::exception&) {
    return 1;
  }
}

std::atomic<int>& configured() {
  static std::atomic<int> n{from_environment()};
  return n;
}

}  // namespace

int thread_count() { return configured().load(); }

void set_thread_count(int n) {
  if (n < 1) throw std::invalid_argument("thread count must be at least 1");
  configured().store(n);
}

void parallel_for_index(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace selfaction
