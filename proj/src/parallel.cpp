#include "capsym/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>

namespace capsym {

unsigned thread_count() {
  if (const char* env = std::getenv("CAPSYM_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void for_chunks(std::size_t n, std::size_t chunk,
                const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  if (chunk == 0) chunk = 1;
  const std::size_t chunks = (n + chunk - 1) / chunk;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), chunks));
  auto run = [&](std::size_t c) {
    const std::size_t b = c * chunk;
    body(c, b, std::min(n, b + chunk));
  };
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < chunks; c = next++) run(c);
    });
  }
  for (auto& t : pool) t.join();
}

double chunked_sum(std::size_t n, std::size_t chunk,
                   const std::function<double(std::size_t, std::size_t)>& body) {
  if (n == 0) return 0.0;
  if (chunk == 0) chunk = 1;
  std::vector<double> partial((n + chunk - 1) / chunk, 0.0);
  for_chunks(n, chunk, [&](std::size_t c, std::size_t b, std::size_t e) { partial[c] = body(b, e); });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace capsym
