#ifndef LOGCONTRAST_PARALLEL_HPP_
#define LOGCONTRAST_PARALLEL_HPP_

#include <cstddef>
#include <exception>
#include <functional>

namespace logcontrast {

// Worker cap: LOGCONTRAST_THREADS when set, otherwise hardware concurrency.
int worker_thread_count();
void set_worker_thread_count(int threads);  // <= 0 restores the environment default

// Runs body(i) for i in [0, count). Each index owns its output slot, so the
// result must not depend on scheduling; exceptions are rethrown in the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace logcontrast

#endif  // LOGCONTRAST_PARALLEL_HPP_
