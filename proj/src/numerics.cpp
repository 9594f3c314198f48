#include "adf/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace adf {

namespace {
int g_threads = 1;
}

void set_thread_count(int n) { g_threads = std::max(1, n); }
int thread_count() { return g_threads; }

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 16) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

std::size_t block_count(std::size_t n) { return (n + kSumBlock - 1) / kSumBlock; }

void for_each_block(std::size_t n,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  const std::size_t nb = block_count(n);
  if (nb == 0) return;
  const int nt = std::min<std::size_t>(g_threads, nb);
  if (nt <= 1) {
    for (std::size_t b = 0; b < nb; ++b)
      body(b, b * kSumBlock, std::min(n, (b + 1) * kSumBlock));
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= nb) return;
      body(b, b * kSumBlock, std::min(n, (b + 1) * kSumBlock));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nt));
  for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

double blocked_sum(std::size_t n, const std::function<double(std::size_t)>& f) {
  std::vector<double> partial(block_count(n), 0.0);
  for_each_block(n, [&](std::size_t b, std::size_t lo, std::size_t hi) {
    std::vector<double> vals;
    vals.reserve(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) vals.push_back(f(i));
    partial[b] = pairwise_sum(vals);
  });
  return pairwise_sum(partial);
}

}  // namespace adf
