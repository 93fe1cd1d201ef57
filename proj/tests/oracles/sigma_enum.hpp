#pragma once

#include <span>
#include <vector>

namespace oracle {

// sigma_k by summing products over all k-subsets.
inline double sigma_enum(std::span<const double> l, int k) {
  const int n = static_cast<int>(l.size());
  if (k == 0) return 1.0;
  if (k < 0 || k > n) return 0.0;
  double total = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    double p = 1.0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) p *= l[i];
    total += p;
  }
  return total;
}

inline double sigma_enum_abs(std::span<const double> l, int k) {
  std::vector<double> a(l.begin(), l.end());
  for (double& x : a) x = x < 0 ? -x : x;
  return sigma_enum(a, k);
}

}  // namespace oracle
