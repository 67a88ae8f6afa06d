#include "padic/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>

namespace padic {

namespace {
std::atomic<unsigned> g_max_threads{0};
}

void set_max_threads(unsigned n) { g_max_threads.store(n); }

unsigned max_threads() {
  const unsigned configured = g_max_threads.load();
  if (configured > 0) return configured;
  return std::max(1u, std::thread::hardware_concurrency());
}

Scalar tree_sum(std::vector<Scalar> terms, Mode mode) {
  if (terms.empty()) return Scalar::zero(mode);
  while (terms.size() > 1) {
    std::vector<Scalar> next;
    next.reserve((terms.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < terms.size(); i += 2) next.push_back(terms[i] + terms[i + 1]);
    if (terms.size() % 2 == 1) next.push_back(terms.back());
    terms = std::move(next);
  }
  return terms.front();
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(max_threads(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_lock;
  std::exception_ptr error;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      try {
        for (std::size_t i = next++; i < n; i = next++) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> guard(error_lock);
        if (!error) error = std::current_exception();
        next = n;
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

Scalar blocked_sum(std::size_t n, Mode mode,
                   const std::function<Scalar(std::size_t, std::size_t)>& block_sum) {
  const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<Scalar> partial(blocks, Scalar::zero(mode));
  parallel_for(blocks, [&](std::size_t b) {
    const std::size_t begin = b * kReductionBlock;
    partial[b] = block_sum(begin, std::min(n, begin + kReductionBlock));
  });
  return tree_sum(std::move(partial), mode);
}

}  // namespace padic
