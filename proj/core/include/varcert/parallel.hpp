#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace varcert {

/// Worker cap. Zero means "read VARCERT_THREADS, else hardware concurrency".
void set_max_threads(std::size_t threads);
std::size_t max_threads();

/// Chunk size used by every parallel loop. Fixed so that chunk boundaries,
/// and therefore reduction order, never depend on the thread count.
inline constexpr std::size_t kParallelChunk = 256;

/// Runs body(chunk_index, begin, end) over fixed-size chunks of [0, count).
void parallel_chunks(std::size_t count,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

/// Maps each index to a value in parallel; output order equals index order.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, Fn&& fn) {
  std::vector<T> out(count);
  parallel_chunks(count, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = fn(i);
  });
  return out;
}

/// Deterministic reduction: each chunk folds locally, then chunks are
/// combined left to right.
template <class T, class Fold, class Combine>
T parallel_reduce(std::size_t count, T init, Fold&& fold, Combine&& combine) {
  const std::size_t chunks = (count + kParallelChunk - 1) / kParallelChunk;
  std::vector<T> partial(chunks, init);
  parallel_chunks(count, [&](std::size_t c, std::size_t begin, std::size_t end) {
    T acc = init;
    for (std::size_t i = begin; i < end; ++i) fold(acc, i);
    partial[c] = std::move(acc);
  });
  T result = init;
  for (auto& p : partial) result = combine(std::move(result), std::move(p));
  return result;
}

}  // namespace varcert
