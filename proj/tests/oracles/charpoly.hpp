#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using Mat = std::vector<std::vector<std::complex<double>>>;

// Coefficients c[0..n] of det(xI - A) = sum c_k x^{n-k} by Faddeev-LeVerrier.
inline std::vector<double> charpoly(const Mat& a) {
  const int n = static_cast<int>(a.size());
  std::vector<double> c(n + 1, 0.0);
  c[0] = 1.0;
  Mat m(n, std::vector<std::complex<double>>(n, 0.0));
  for (int k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{k-1} I, c_k = -tr(A M_k) / k
    Mat next(n, std::vector<std::complex<double>>(n, 0.0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        std::complex<double> s = 0.0;
        for (int l = 0; l < n; ++l) s += a[i][l] * m[l][j];
        next[i][j] = s + (i == j ? c[k - 1] : 0.0);
      }
    m = next;
    std::complex<double> tr = 0.0;
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) tr += a[i][l] * m[l][i];
    c[k] = -tr.real() / k;
  }
  return c;
}

inline double polyval(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (double ck : c) v = v * x + ck;
  return v;
}

// Real roots of a polynomial with only simple real roots inside [-bound, bound],
// descending. Brackets sign changes on a fine grid, then bisects.
inline std::vector<double> real_roots(const std::vector<double>& c, double bound, int grid = 20000) {
  std::vector<double> roots;
  double x0 = -bound, f0 = polyval(c, x0);
  for (int i = 1; i <= grid; ++i) {
    const double x1 = -bound + 2.0 * bound * i / grid, f1 = polyval(c, x1);
    if (f0 == 0.0) roots.push_back(x0);
    else if (f0 * f1 < 0.0) {
      double lo = x0, hi = x1, flo = f0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi), fm = polyval(c, mid);
        if ((fm < 0) == (flo < 0)) { lo = mid; flo = fm; } else { hi = mid; }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    f0 = f1;
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return roots;
}

inline std::vector<double> hermitian_roots(const Mat& a) {
  double bound = 1.0;
  for (const auto& row : a) {
    double r = 0.0;
    for (auto v : row) r += std::abs(v);
    bound = std::max(bound, r);
  }
  return real_roots(charpoly(a), 1.01 * bound);
}

}  // namespace oracle
