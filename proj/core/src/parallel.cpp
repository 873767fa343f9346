#include "logcontrast/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace logcontrast {

namespace {

std::atomic<int> g_thread_override{0};
thread_local bool g_inside_worker = false;

int env_thread_count() {
  if (const char* env = std::getenv("LOGCONTRAST_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

int worker_thread_count() {
  const int override_count = g_thread_override.load();
  return override_count > 0 ? override_count : env_thread_count();
}

void set_worker_thread_count(int threads) { g_thread_override.store(threads); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(worker_thread_count()), count);
  // Nested calls run serially so parallel regions never oversubscribe.
  if (workers <= 1 || g_inside_worker) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      g_inside_worker = true;
      try {
        // Strided assignment keeps shard loads balanced without coordination.
        for (std::size_t i = w; i < count; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

}  // namespace logcontrast
