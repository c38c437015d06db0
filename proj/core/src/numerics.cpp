#include "ddforge/numerics.hpp"

#include <mutex>
#include <thread>

namespace ddforge {

void parallel_for(long count, int threads, const std::function<void(long)>& fn) {
  if (count <= 0) return;
  unsigned n = threads > 0 ? static_cast<unsigned>(threads)
                           : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, static_cast<unsigned>(count));
  if (n <= 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(n);
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned t = 0; t < n; ++t) {
    const long lo = static_cast<long>(count * static_cast<double>(t) / n);
    const long hi = static_cast<long>(count * static_cast<double>(t + 1) / n);
    pool.emplace_back([&, lo, hi]() {
      try {
        for (long i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace ddforge
