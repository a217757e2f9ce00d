#include "forestcalc/parallel.hpp"

#include <atomic>

namespace forestcalc {

namespace {
std::atomic<unsigned> g_jobs{0};
}

void set_jobs(unsigned n) { g_jobs = n; }

unsigned jobs() {
  unsigned n = g_jobs.load();
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

} // namespace forestcalc
