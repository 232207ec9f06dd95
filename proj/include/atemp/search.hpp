#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace atemp::search {

/// Knobs for the exhaustive searches. Results are identical in serial and
/// parallel mode; parallelism only changes wall-clock time.
struct Options {
  bool parallel = true;
};

/// Runs `probe` over branch indices 0..branches-1 and returns the result of
/// the smallest succeeding branch. The parallel path races branches but
/// keeps the minimum, so the outcome matches the serial scan.
template <typename R>
std::optional<std::pair<int, R>> first_success(int branches,
                                               const std::function<std::optional<R>(int)>& probe,
                                               const Options& opt = {}) {
#ifdef _OPENMP
  if (opt.parallel && branches > 1) {
    std::atomic<int> best{branches};
    std::vector<std::optional<R>> results(branches);
#pragma omp parallel for schedule(dynamic)
    for (int c = 0; c < branches; ++c) {
      if (c >= best.load(std::memory_order_relaxed)) continue;
      auto r = probe(c);
      if (r) {
        results[c] = std::move(r);
        int cur = best.load();
        while (c < cur && !best.compare_exchange_weak(cur, c)) {
        }
      }
    }
    int b = best.load();
    if (b < branches) return std::make_pair(b, std::move(*results[b]));
    return std::nullopt;
  }
#endif
  (void)opt;
  for (int c = 0; c < branches; ++c) {
    auto r = probe(c);
    if (r) return std::make_pair(c, std::move(*r));
  }
  return std::nullopt;
}

/// Maps `fn` over [0,n) collecting per-index output vectors; concatenation
/// order is by index, so the result is schedule-independent.
template <typename T>
std::vector<T> collect(int n, const std::function<void(int, std::vector<T>&)>& fn,
                       const Options& opt = {}) {
  std::vector<std::vector<T>> buckets(n);
#ifdef _OPENMP
  if (opt.parallel && n > 1) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) fn(i, buckets[i]);
  } else
#endif
  {
    (void)opt;
    for (int i = 0; i < n; ++i) fn(i, buckets[i]);
  }
  std::vector<T> out;
  size_t total = 0;
  for (auto& b : buckets) total += b.size();
  out.reserve(total);
  for (auto& b : buckets) out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace atemp::search
