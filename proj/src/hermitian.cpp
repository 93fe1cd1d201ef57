#include "lyz/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "lyz/rng.hpp"

namespace lyz {

SmallMatrix::SmallMatrix(int dim) : dim_(dim) {
  if (dim < 0 || dim > kMaxDim) throw std::domain_error("SmallMatrix: dimension out of range");
}

SmallMatrix SmallMatrix::identity(int dim) {
  SmallMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

SmallMatrix SmallMatrix::diagonal(std::span<const double> entries) {
  SmallMatrix m(static_cast<int>(entries.size()));
  for (int i = 0; i < m.dim(); ++i) m(i, i) = entries[i];
  return m;
}

void SmallMatrix::set_hermitian(int i, int j, cplx v) {
  if (i == j) {
    (*this)(i, i) = v.real();
    return;
  }
  (*this)(i, j) = v;
  (*this)(j, i) = std::conj(v);
}

SmallMatrix SmallMatrix::adjoint() const {
  SmallMatrix r(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) r(i, j) = std::conj((*this)(j, i));
  return r;
}

cplx SmallMatrix::trace() const {
  cplx s = 0.0;
  for (int i = 0; i < dim_; ++i) s += (*this)(i, i);
  return s;
}

SmallMatrix& SmallMatrix::operator+=(const SmallMatrix& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("SmallMatrix: dimension mismatch");
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) (*this)(i, j) += o(i, j);
  return *this;
}

SmallMatrix& SmallMatrix::operator-=(const SmallMatrix& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("SmallMatrix: dimension mismatch");
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) (*this)(i, j) -= o(i, j);
  return *this;
}

SmallMatrix& SmallMatrix::operator*=(double s) {
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) (*this)(i, j) *= s;
  return *this;
}

SmallMatrix operator*(const SmallMatrix& a, const SmallMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("SmallMatrix: dimension mismatch");
  const int n = a.dim();
  SmallMatrix r(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const cplx aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

double SmallMatrix::hermitian_defect() const {
  double d = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return d;
}

double SmallMatrix::max_abs() const {
  double m = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m = std::max(m, std::abs((*this)(i, j)));
  return m;
}

double SmallMatrix::frobenius() const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) s += std::norm((*this)(i, j));
  return std::sqrt(s);
}

namespace {

constexpr double kJacobiThreshold = 1e-13;
constexpr int kMaxSweeps = 60;

void check_finite(const SmallMatrix& h) {
  for (int i = 0; i < h.dim(); ++i)
    for (int j = 0; j < h.dim(); ++j)
      if (!std::isfinite(h(i, j).real()) || !std::isfinite(h(i, j).imag()))
        throw std::domain_error("hermitian eigen-decomposition: non-finite entry");
}

double off_norm(const SmallMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Cyclic complex Jacobi. On return a is diagonal to threshold; v (if given)
// accumulates the rotations so that h = v diag v^*.
void jacobi(SmallMatrix& a, SmallMatrix* v) {
  const int n = a.dim();
  const double scale = a.frobenius();
  if (scale == 0.0) return;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_norm(a) <= kJacobiThreshold * scale) return;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cplx b = a(p, q);
        const double mag = std::abs(b);
        if (mag == 0.0) continue;
        const cplx phase = b / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx jqp = -s * std::conj(phase);
        const cplx jqq = c * std::conj(phase);
        auto rotate_columns = [&](SmallMatrix& m) {
          for (int k = 0; k < n; ++k) {
            const cplx mkp = m(k, p);
            const cplx mkq = m(k, q);
            m(k, p) = mkp * c + mkq * jqp;
            m(k, q) = mkp * s + mkq * jqq;
          }
        };
        rotate_columns(a);
        for (int k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = c * apk + std::conj(jqp) * aqk;
          a(q, k) = s * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = app - t * mag;
        a(q, q) = aqq + t * mag;
        if (v) rotate_columns(*v);
      }
    }
  }
}

}  // namespace

std::vector<double> hermitian_eigenvalues(const SmallMatrix& h) {
  check_finite(h);
  const int n = h.dim();
  std::vector<double> ev(n);
  if (n == 1) {
    ev[0] = h(0, 0).real();
    return ev;
  }
  if (n == 2) {
    const double a = h(0, 0).real();
    const double d = h(1, 1).real();
    const double mid = 0.5 * (a + d);
    const double rad = std::hypot(0.5 * (a - d), std::abs(h(0, 1)));
    ev[0] = mid + rad;
    ev[1] = mid - rad;
    return ev;
  }
  SmallMatrix a = h;
  jacobi(a, nullptr);
  for (int i = 0; i < n; ++i) ev[i] = a(i, i).real();
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

HermitianEigen hermitian_eigen(const SmallMatrix& h) {
  check_finite(h);
  const int n = h.dim();
  SmallMatrix a = h;
  SmallMatrix v = SmallMatrix::identity(n);
  jacobi(a, &v);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return a(x, x).real() > a(y, y).real(); });
  HermitianEigen out{std::vector<double>(n), SmallMatrix(n)};
  for (int j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]).real();
    for (int i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

SmallMatrix hpd_inverse(const SmallMatrix& h) {
  const int n = h.dim();
  SmallMatrix l(n);
  for (int j = 0; j < n; ++j) {
    double d = h(j, j).real();
    for (int k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > 0.0)) throw std::domain_error("hpd_inverse: matrix is not positive definite");
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      cplx s = h(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  // inv(L) by forward substitution, then inv(h) = inv(L)^* inv(L).
  SmallMatrix li(n);
  for (int c = 0; c < n; ++c) {
    for (int i = c; i < n; ++i) {
      cplx s = (i == c) ? 1.0 : 0.0;
      for (int k = c; k < i; ++k) s -= l(i, k) * li(k, c);
      li(i, c) = s / l(i, i);
    }
  }
  SmallMatrix inv = li.adjoint() * li;
  for (int i = 0; i < n; ++i) inv(i, i) = inv(i, i).real();
  return inv;
}

cplx determinant(const SmallMatrix& m) {
  SmallMatrix a = m;
  const int n = a.dim();
  cplx det = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (a(piv, c) == 0.0) return 0.0;
    if (piv != c) {
      for (int k = 0; k < n; ++k) std::swap(a(c, k), a(piv, k));
      det = -det;
    }
    det *= a(c, c);
    for (int r = c + 1; r < n; ++r) {
      const cplx f = a(r, c) / a(c, c);
      for (int k = c; k < n; ++k) a(r, k) -= f * a(c, k);
    }
  }
  return det;
}

SmallMatrix random_unitary(CounterRng& rng, int dim) {
  SmallMatrix g(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
  // Modified Gram-Schmidt on columns; positive R diagonal gives Haar measure.
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < j; ++k) {
      cplx proj = 0.0;
      for (int i = 0; i < dim; ++i) proj += std::conj(g(i, k)) * g(i, j);
      for (int i = 0; i < dim; ++i) g(i, j) -= proj * g(i, k);
    }
    double norm = 0.0;
    for (int i = 0; i < dim; ++i) norm += std::norm(g(i, j));
    norm = std::sqrt(norm);
    for (int i = 0; i < dim; ++i) g(i, j) /= norm;
  }
  return g;
}

SmallMatrix conjugate_diagonal(const SmallMatrix& u, std::span<const double> d) {
  const int n = u.dim();
  if (static_cast<int>(d.size()) != n) throw std::invalid_argument("conjugate_diagonal: size mismatch");
  SmallMatrix r(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      cplx s = 0.0;
      for (int k = 0; k < n; ++k) s += u(i, k) * d[k] * std::conj(u(j, k));
      r.set_hermitian(i, j, s);
    }
  return r;
}

}  // namespace lyz
