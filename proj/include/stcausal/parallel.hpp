#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace stcausal {

// Worker-pool bound: STCAUSAL_THREADS env var, overridable via set_max_threads.
int max_threads();
void set_max_threads(int n);

template <class F>
void parallel_for(std::int64_t n, F&& f) {
  const int nt = max_threads();
  if (nt <= 1 || n < 2) {
    for (std::int64_t i = 0; i < n; ++i) f(i);
    return;
  }
#if defined(_OPENMP)
  #pragma omp parallel for schedule(static) num_threads(nt)
  for (std::int64_t i = 0; i < n; ++i) f(i);
#else
  for (std::int64_t i = 0; i < n; ++i) f(i);
#endif
}

// Reduction over fixed-size index blocks. Each block's partial is computed
// independently and partials are merged in block order, so the result is
// bitwise identical for any thread count (including 1).
constexpr std::int64_t kReduceBlock = 2048;

template <class Acc, class BlockFn, class MergeFn>
Acc blocked_reduce(std::int64_t n, Acc init, BlockFn&& block, MergeFn&& merge) {
  const std::int64_t nblocks = (n + kReduceBlock - 1) / kReduceBlock;
  if (nblocks <= 1) {
    Acc acc = std::move(init);
    block(0, n, acc);
    return acc;
  }
  std::vector<Acc> partials(static_cast<std::size_t>(nblocks), init);
  parallel_for(nblocks, [&](std::int64_t b) {
    std::int64_t lo = b * kReduceBlock;
    std::int64_t hi = lo + kReduceBlock < n ? lo + kReduceBlock : n;
    block(lo, hi, partials[static_cast<std::size_t>(b)]);
  });
  Acc acc = std::move(init);
  for (auto& p : partials) merge(acc, p);
  return acc;
}

}  // namespace stcausal
