#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace chainopt {

// Runs fn(i) for i in [0, count). Work items must be independent and write
// only to their own output slot; results are then identical for any job
// count. Exceptions are captured and rethrown on the calling thread.
template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  unsigned hw = std::thread::hardware_concurrency();
  std::size_t workers = std::min<std::size_t>(
      count, std::min<std::size_t>(static_cast<std::size_t>(jobs),
                                   hw ? hw : 4));
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace chainopt
