#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace apxgrp::detail {

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Splits [0, count) into `chunks` contiguous ranges and runs
/// fn(chunk_index, begin, end) for each, using up to `threads` workers.
/// Callers must combine per-chunk results in chunk order.
template <typename Fn>
void for_each_chunk(std::size_t count, std::size_t chunks, unsigned threads, Fn&& fn) {
  chunks = std::max<std::size_t>(1, std::min(chunks, count));
  auto bounds = [&](std::size_t c) { return count * c / chunks; };
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) fn(c, bounds(c), bounds(c + 1));
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t c = w; c < chunks; c += workers) fn(c, bounds(c), bounds(c + 1));
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Pairwise (cascade) summation in a fixed order, so floating-point results
/// do not depend on how the summands were produced.
template <typename T>
T pairwise_sum(const T* data, std::size_t count) {
  if (count <= 16) {
    T s{};
    for (std::size_t i = 0; i < count; ++i) s += data[i];
    return s;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, count - half);
}

}  // namespace apxgrp::detail
