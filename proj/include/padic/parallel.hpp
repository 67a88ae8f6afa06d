#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

#include "padic/scalar.hpp"

namespace padic {

// Upper bound on worker threads used by the pair sums. Results never depend
// on this value: work is split into fixed-size blocks whose partial sums are
// combined by the same binary tree whatever the thread count.
void set_max_threads(unsigned n);
unsigned max_threads();

inline constexpr std::size_t kReductionBlock = 1024;

// Fixed-shape pairwise (tree) sum of a sequence of scalars.
Scalar tree_sum(std::vector<Scalar> terms, Mode mode);

// Deterministic sum of block_sum(begin, end) over the fixed partition of
// [0, n) into kReductionBlock-sized blocks, computed on up to max_threads()
// workers and combined with tree_sum.
Scalar blocked_sum(std::size_t n, Mode mode,
                   const std::function<Scalar(std::size_t, std::size_t)>& block_sum);

// Runs body(i) for i in [0, n) across workers; body must only touch slot i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace padic
