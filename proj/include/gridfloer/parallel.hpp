#ifndef GRIDFLOER_PARALLEL_HPP
#define GRIDFLOER_PARALLEL_HPP

#include <cstdlib>
#include <thread>
#include <vector>

namespace gridfloer {

inline int workerCount() {
  if (const char* env = std::getenv("GRIDFLOER_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Chunked parallel loop over [0, count).  f(begin, end) must only write to
// its own slice of any shared output.
template <typename F>
void parallelChunks(std::size_t count, F&& f) {
  int workers = workerCount();
  if (workers <= 1 || count < 1024) {
    f(std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; w++) {
    std::size_t b = w * chunk, e = std::min(count, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&f, b, e] { f(b, e); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace gridfloer

#endif
