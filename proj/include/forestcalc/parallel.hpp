#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace forestcalc {

/// Worker count used by parallel_sum; 0 means hardware concurrency.
void set_jobs(unsigned jobs);
unsigned jobs();

/// Sums term(i) for i in [0, count) over a small pool of threads. Each worker
/// owns a contiguous chunk and its own accumulator; partial sums are combined
/// in chunk order. With exact arithmetic the result does not depend on the
/// worker count.
template <typename T, typename Term>
T parallel_sum(std::size_t count, Term&& term, T zero) {
  unsigned workers = std::max(1u, std::min<unsigned>(jobs(), static_cast<unsigned>(count)));
  if (workers <= 1) {
    T acc = zero;
    for (std::size_t i = 0; i < count; ++i) acc += term(i);
    return acc;
  }
  std::vector<T> partial(workers, zero);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(count, lo + chunk);
        for (std::size_t i = lo; i < hi; ++i) partial[w] += term(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  T acc = zero;
  for (auto& p : partial) acc += p;
  return acc;
}

} // namespace forestcalc
