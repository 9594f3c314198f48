#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace adf {

// Number of worker threads used by the block-parallel loops below.
// 1 = fully sequential. Results are identical for any value because
// partial sums are always combined in fixed block order.
void set_thread_count(int n);
int thread_count();

// Pairwise (tree) summation. Bit-stable for a fixed input ordering.
double pairwise_sum(std::span<const double> values);

// Splits [0, n) into fixed-size blocks and runs `body(block_id, begin, end)`
// over them, possibly on several threads. Block boundaries do not depend on
// the thread count, so any per-block outputs can be reduced deterministically.
inline constexpr std::size_t kSumBlock = 4096;

std::size_t block_count(std::size_t n);
void for_each_block(std::size_t n,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

// Deterministic parallel sum of f(i) over i in [0, n).
double blocked_sum(std::size_t n, const std::function<double(std::size_t)>& f);

}  // namespace adf
