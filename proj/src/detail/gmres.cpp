#include "detail/gmres.hpp"

#include <cmath>

#include "lyz/parallel.hpp"

namespace lyz::detail {

namespace {

double dot(const Vec& a, const Vec& b) { return reproducible_dot(a, b); }
double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

void axpy(double s, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += s * x[i];
}

}  // namespace

KrylovResult gmres(const LinearMap& a, const LinearMap& m_inv, const Vec& b, Vec& x, double rtol, int restart,
                   int max_iter) {
  KrylovResult res;
  const std::size_t n = b.size();
  const double bnorm = norm(b);
  if (bnorm == 0.0) {
    x.assign(n, 0.0);
    res.converged = true;
    return res;
  }
  Vec r(n), tmp(n), z(n);
  while (res.iterations < max_iter) {
    a(x, tmp);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - tmp[i];
    double beta = norm(r);
    res.rel_residual = beta / bnorm;
    if (res.rel_residual <= rtol) {
      res.converged = true;
      return res;
    }
    const int m = restart;
    std::vector<Vec> v(m + 1, Vec(n));
    std::vector<std::vector<double>> h(m + 1, std::vector<double>(m, 0.0));
    std::vector<double> cs(m), sn(m), g(m + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[0][i] = r[i] / beta;
    g[0] = beta;
    int k = 0;
    for (; k < m && res.iterations < max_iter; ++k) {
      ++res.iterations;
      m_inv(v[k], z);
      a(z, v[k + 1]);
      for (int j = 0; j <= k; ++j) {
        h[j][k] = dot(v[k + 1], v[j]);
        axpy(-h[j][k], v[j], v[k + 1]);
      }
      h[k + 1][k] = norm(v[k + 1]);
      if (h[k + 1][k] > 0.0)
        for (double& e : v[k + 1]) e /= h[k + 1][k];
      for (int j = 0; j < k; ++j) {
        const double t = cs[j] * h[j][k] + sn[j] * h[j + 1][k];
        h[j + 1][k] = -sn[j] * h[j][k] + cs[j] * h[j + 1][k];
        h[j][k] = t;
      }
      const double den = std::hypot(h[k][k], h[k + 1][k]);
      cs[k] = den == 0.0 ? 1.0 : h[k][k] / den;
      sn[k] = den == 0.0 ? 0.0 : h[k + 1][k] / den;
      h[k][k] = den;
      h[k + 1][k] = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];
      res.rel_residual = std::abs(g[k + 1]) / bnorm;
      if (res.rel_residual <= rtol) {
        ++k;
        break;
      }
    }
    // Back substitution and update x += M^{-1} V y.
    std::vector<double> y(k, 0.0);
    for (int i = k - 1; i >= 0; --i) {
      double s = g[i];
      for (int j = i + 1; j < k; ++j) s -= h[i][j] * y[j];
      y[i] = h[i][i] == 0.0 ? 0.0 : s / h[i][i];
    }
    Vec upd(n, 0.0);
    for (int j = 0; j < k; ++j) axpy(y[j], v[j], upd);
    m_inv(upd, z);
    axpy(1.0, z, x);
    if (res.rel_residual <= rtol) {
      res.converged = true;
      return res;
    }
  }
  return res;
}

}  // namespace lyz::detail
