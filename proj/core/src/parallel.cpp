#include "varcert/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace varcert {

namespace {

std::atomic<std::size_t> g_max_threads{0};

std::size_t threads_from_env() {
  if (const char* env = std::getenv("VARCERT_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      // fall through to hardware concurrency
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

void set_max_threads(std::size_t threads) { g_max_threads.store(threads); }

std::size_t max_threads() {
  const std::size_t t = g_max_threads.load();
  return t == 0 ? threads_from_env() : t;
}

void parallel_chunks(std::size_t count,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  const std::size_t chunks = (count + kParallelChunk - 1) / kParallelChunk;
  if (chunks == 0) return;
  const std::size_t workers = std::min(max_threads(), chunks);
  auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = c * kParallelChunk;
    body(c, begin, std::min(count, begin + kParallelChunk));
  };
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::size_t failed_chunk = chunks;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t c; (c = next.fetch_add(1)) < chunks;) {
      try {
        run_chunk(c);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (c < failed_chunk) {
          failed_chunk = c;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace varcert
