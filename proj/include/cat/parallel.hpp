#pragma once

#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cat {

// Runs fn(i) for i in [begin, end) on up to `jobs` threads in contiguous
// chunks. Writes must be disjoint per index; results are then identical to
// the sequential order. The first captured exception is rethrown.
template <typename Fn>
void parallel_for(int begin, int end, int jobs, Fn&& fn) {
  const int count = end - begin;
  if (count <= 0) return;
  if (jobs < 1) jobs = 1;
  const int workers = std::min<int>(jobs, count);
  if (workers == 1) {
    for (int i = begin; i < end; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex err_mu;
  const int chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int lo = begin + w * chunk;
    const int hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        for (int i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace cat
