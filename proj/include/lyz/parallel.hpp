#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>

namespace lyz {

// Worker count used by pointwise kernels. Results never depend on it.
void set_thread_count(unsigned count);
unsigned thread_count();

// Calls body(begin, end) over disjoint blocks covering [0, count).
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

// Pairwise tree summation over a fixed block layout. The reduction order
// depends only on values.size(), so the result is bit-reproducible.
double reproducible_sum(std::span<const double> values);
std::complex<double> reproducible_sum(std::span<const std::complex<double>> values);

// Reproducible inner product sum_i a[i]*b[i].
double reproducible_dot(std::span<const double> a, std::span<const double> b);

}  // namespace lyz
