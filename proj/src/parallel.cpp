#include "lyz/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>
#include <vector>

namespace lyz {
namespace {

std::atomic<unsigned> g_threads{1};

constexpr std::size_t kBlock = 2048;

template <typename T>
T pairwise(const T* data, std::size_t count) {
  if (count <= 8) {
    T acc{};
    for (std::size_t i = 0; i < count; ++i) acc += data[i];
    return acc;
  }
  const std::size_t half = count / 2;
  return pairwise(data, half) + pairwise(data + half, count - half);
}

template <typename T>
T tree_sum(std::span<const T> values) {
  const std::size_t blocks = (values.size() + kBlock - 1) / kBlock;
  if (blocks <= 1) return pairwise(values.data(), values.size());
  std::vector<T> partial(blocks);
  parallel_for(blocks, [&](std::size_t b0, std::size_t b1) {
    for (std::size_t b = b0; b < b1; ++b) {
      const std::size_t begin = b * kBlock;
      const std::size_t len = std::min(kBlock, values.size() - begin);
      partial[b] = pairwise(values.data() + begin, len);
    }
  });
  return pairwise(partial.data(), partial.size());
}

}  // namespace

void set_thread_count(unsigned count) { g_threads = std::max(1u, count); }

unsigned thread_count() { return g_threads; }

void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(g_threads, count));
  if (workers <= 1 || count < 256) {
    if (count > 0) body(0, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 1; w < workers; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(count, b + chunk);
    if (b < e) pool.emplace_back(body, b, e);
  }
  body(0, std::min(count, chunk));
  for (auto& th : pool) th.join();
}

double reproducible_sum(std::span<const double> values) { return tree_sum(values); }

std::complex<double> reproducible_sum(std::span<const std::complex<double>> values) {
  return tree_sum(values);
}

double reproducible_dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("reproducible_dot: size mismatch");
  std::vector<double> prod(a.size());
  parallel_for(a.size(), [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) prod[i] = a[i] * b[i];
  });
  return tree_sum(std::span<const double>(prod));
}

}  // namespace lyz
