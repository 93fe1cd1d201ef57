#include "lyz/torus_field.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "detail/fft.hpp"
#include "lyz/errors.hpp"
#include "lyz/parallel.hpp"

namespace lyz {

using std::numbers::pi;

namespace {

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

int signed_k(int j, int N) {
  if (2 * j == N) return -N / 2;
  return j < N / 2 ? j : j - N;
}

void require_same(const TorusGrid& a, const TorusGrid& b) {
  if (!(a == b)) throw std::invalid_argument("grid mismatch");
}

using Spectrum = std::vector<cplx>;

ScalarField from_spectrum(const TorusGrid& g, Spectrum spec) {
  ScalarField out(g);
  detail::backward(g, spec, out.values);
  return out;
}

Spectrum multiply(const TorusGrid& g, const Spectrum& base, const std::function<cplx(std::size_t)>& symbol) {
  Spectrum s(base.size());
  parallel_for(s.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) s[i] = base[i] * symbol(i);
  });
  (void)g;
  return s;
}

}  // namespace

TorusGrid::TorusGrid(int n, int N, std::size_t point_cap) : n_(n), N_(N) {
  if (n < 1 || n > 4) throw std::domain_error("TorusGrid: n must be in 1..4");
  if (N % 2 != 0) throw std::domain_error("TorusGrid: N must be even");
  if (N < 4 || N > 64) throw std::domain_error("TorusGrid: N must be in 4..64");
  const int a = 2 * n;
  // Overflow-safe cap check.
  std::size_t pts = 1;
  for (int i = 0; i < a; ++i) {
    pts *= static_cast<std::size_t>(N);
    if (pts > point_cap)
      throw std::domain_error("TorusGrid: " + std::to_string(N) + "^" + std::to_string(a) +
                              " points exceeds the point cap " + std::to_string(point_cap));
  }
  points_ = pts;
  const std::size_t half = static_cast<std::size_t>(N / 2 + 1);
  spectral_ = ipow(N, a - 1) * half;
  auto tab = std::make_shared<std::vector<std::int16_t>>(spectral_ * a);
  for (std::size_t s = 0; s < spectral_; ++s) {
    std::size_t rem = s;
    const int jl = static_cast<int>(rem % half);
    rem /= half;
    (*tab)[s * a + (a - 1)] = static_cast<std::int16_t>(signed_k(jl, N));
    for (int ax = a - 2; ax >= 0; --ax) {
      const int j = static_cast<int>(rem % N);
      rem /= N;
      (*tab)[s * a + ax] = static_cast<std::int16_t>(signed_k(j, N));
    }
  }
  ktab_ = std::move(tab);
}

double TorusGrid::spacing() const { return 2.0 * pi / N_; }

std::vector<double> TorusGrid::coordinates(std::size_t p) const {
  std::vector<double> x(axes());
  for (int ax = axes() - 1; ax >= 0; --ax) {
    x[ax] = spacing() * static_cast<double>(p % N_);
    p /= N_;
  }
  return x;
}

TorusGrid make_grid(int n, int N, std::size_t point_cap) { return TorusGrid(n, N, point_cap); }

HermitianField::HermitianField(const TorusGrid& g) : grid_(g), data_(g.points() * g.n() * g.n(), 0.0) {}

int HermitianField::offdiag_index(int n, int i, int j) {
  // pairs (i, j), i < j, in lexicographic order after the n diagonal slots
  int idx = 0;
  for (int a = 0; a < i; ++a) idx += n - 1 - a;
  idx += j - i - 1;
  return n + 2 * idx;
}

SmallMatrix HermitianField::at(std::size_t p) const {
  const int n = this->n();
  SmallMatrix m(n);
  const double* d = data_.data() + p * stride();
  for (int i = 0; i < n; ++i) m(i, i) = d[i];
  int c = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, c += 2) m.set_hermitian(i, j, cplx(d[c], d[c + 1]));
  return m;
}

void HermitianField::set(std::size_t p, const SmallMatrix& h) {
  const int n = this->n();
  if (h.dim() != n) throw std::invalid_argument("HermitianField::set: dimension mismatch");
  double* d = data_.data() + p * stride();
  for (int i = 0; i < n; ++i) d[i] = h(i, i).real();
  int c = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, c += 2) {
      d[c] = h(i, j).real();
      d[c + 1] = h(i, j).imag();
    }
}

ScalarField HermitianField::component(int c) const {
  ScalarField f(grid_);
  const std::size_t st = stride();
  for (std::size_t p = 0; p < points(); ++p) f.values[p] = data_[p * st + c];
  return f;
}

void HermitianField::set_component(int c, const ScalarField& f) {
  require_same(grid_, f.grid);
  const std::size_t st = stride();
  for (std::size_t p = 0; p < points(); ++p) data_[p * st + c] = f.values[p];
}

ScalarField trig_field(const TorusGrid& grid, std::span<const TrigMode> modes) {
  const int a = grid.axes();
  const int N = grid.N();
  for (const auto& m : modes) {
    if (static_cast<int>(m.k.size()) != a) throw std::domain_error("trig_field: wavevector has wrong length");
    for (int v : m.k)
      if (2 * std::abs(v) >= N) throw std::domain_error("trig_field: mode not resolved by the grid");
  }
  ScalarField f(grid);
  parallel_for(grid.points(), [&](std::size_t b, std::size_t e) {
    std::vector<int> j(a);
    for (std::size_t p = b; p < e; ++p) {
      std::size_t rem = p;
      for (int ax = a - 1; ax >= 0; --ax) {
        j[ax] = static_cast<int>(rem % N);
        rem /= N;
      }
      double s = 0.0;
      for (const auto& m : modes) {
        long long dot = 0;
        for (int ax = 0; ax < a; ++ax) dot += static_cast<long long>(m.k[ax]) * j[ax];
        const long long r = ((dot % N) + N) % N;
        s += m.amplitude * std::cos(2.0 * pi * static_cast<double>(r) / N + m.phase);
      }
      f.values[p] = s;
    }
  });
  return f;
}

ScalarField sample(const TorusGrid& grid, const std::function<double(std::span<const double>)>& fn) {
  ScalarField f(grid);
  parallel_for(grid.points(), [&](std::size_t b, std::size_t e) {
    for (std::size_t p = b; p < e; ++p) f.values[p] = fn(grid.coordinates(p));
  });
  return f;
}

HermitianField complex_hessian(const ScalarField& f) {
  const TorusGrid& g = f.grid;
  const int n = g.n();
  const Spectrum base = detail::forward(g, f.values);
  HermitianField h(g);
  for (int al = 0; al < n; ++al) {
    const int xa = 2 * al, ya = 2 * al + 1;
    auto diag = multiply(g, base, [&](std::size_t s) {
      const double kx = g.k(s, xa), ky = g.k(s, ya);
      return cplx(-0.25 * (kx * kx + ky * ky), 0.0);
    });
    h.set_component(al, from_spectrum(g, std::move(diag)));
  }
  for (int al = 0; al < n; ++al)
    for (int be = al + 1; be < n; ++be) {
      const int xa = 2 * al, ya = 2 * al + 1, xb = 2 * be, yb = 2 * be + 1;
      const int c = HermitianField::offdiag_index(n, al, be);
      auto re = multiply(g, base, [&](std::size_t s) {
        return cplx(-0.25 * (double(g.k_odd(s, xa)) * g.k_odd(s, xb) + double(g.k_odd(s, ya)) * g.k_odd(s, yb)), 0.0);
      });
      h.set_component(c, from_spectrum(g, std::move(re)));
      auto im = multiply(g, base, [&](std::size_t s) {
        return cplx(-0.25 * (double(g.k_odd(s, xa)) * g.k_odd(s, yb) - double(g.k_odd(s, ya)) * g.k_odd(s, xb)), 0.0);
      });
      h.set_component(c + 1, from_spectrum(g, std::move(im)));
    }
  return h;
}

namespace {

ScalarField derivative_from(const TorusGrid& g, const Spectrum& base, int axis) {
  return from_spectrum(g, multiply(g, base, [&](std::size_t s) { return cplx(0.0, g.k_odd(s, axis)); }));
}

}  // namespace

ScalarField axis_derivative(const ScalarField& f, int axis) {
  if (axis < 0 || axis >= f.grid.axes()) throw std::domain_error("axis_derivative: axis out of range");
  return derivative_from(f.grid, detail::forward(f.grid, f.values), axis);
}

GradientField complex_gradient(const ScalarField& f) {
  const TorusGrid& g = f.grid;
  const int n = g.n();
  const Spectrum base = detail::forward(g, f.values);
  GradientField out{g, std::vector<cplx>(g.points() * n)};
  for (int al = 0; al < n; ++al) {
    const ScalarField dx = derivative_from(g, base, 2 * al);
    const ScalarField dy = derivative_from(g, base, 2 * al + 1);
    for (std::size_t p = 0; p < g.points(); ++p) out.values[p * n + al] = 0.5 * cplx(dx.values[p], -dy.values[p]);
  }
  return out;
}

ScalarField apply_symbol(const ScalarField& f, const std::function<double(std::size_t)>& symbol) {
  const TorusGrid& g = f.grid;
  const Spectrum base = detail::forward(g, f.values);
  return from_spectrum(g, multiply(g, base, [&](std::size_t s) { return cplx(symbol(s), 0.0); }));
}

EigenField pointwise_eigs(const HermitianField& h) {
  const auto n = static_cast<std::size_t>(h.n());
  EigenField out{h.grid(), std::vector<double>(h.points() * n)};
  parallel_for(h.points(), [&](std::size_t b, std::size_t e) {
    for (std::size_t p = b; p < e; ++p) {
      const auto ev = hermitian_eigenvalues(h.at(p));
      std::copy(ev.begin(), ev.end(), out.values.begin() + static_cast<std::ptrdiff_t>(p * n));
    }
  });
  return out;
}

double volume(const TorusGrid& grid) { return std::pow(2.0 * pi, grid.axes()); }

double mean(const ScalarField& f) {
  return reproducible_sum(f.values) / static_cast<double>(f.values.size());
}

double integrate(const ScalarField& f) { return volume(f.grid) * mean(f); }

double sup_abs(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

HermitianField constant_field(const TorusGrid& grid, const SmallMatrix& c) {
  if (c.dim() != grid.n()) throw std::invalid_argument("constant_field: dimension mismatch");
  if (c.hermitian_defect() > 1e-14 * std::max(1.0, c.max_abs()))
    throw PreconditionError("constant_field: matrix is not Hermitian");
  HermitianField h(grid);
  for (std::size_t p = 0; p < grid.points(); ++p) h.set(p, c);
  return h;
}

HermitianField build_chi(const TorusGrid& grid, const SmallMatrix& c, const ScalarField& rho) {
  require_same(grid, rho.grid);
  HermitianField chi = constant_field(grid, c);
  const HermitianField hr = complex_hessian(rho);
  auto dst = chi.raw();
  const auto src = hr.raw();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  return chi;
}

HermitianField axpy(const HermitianField& a, double s, const HermitianField& b) {
  require_same(a.grid(), b.grid());
  HermitianField r = a;
  auto dst = r.raw();
  const auto src = b.raw();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += s * src[i];
  return r;
}

void add_identity(HermitianField& h, double t) {
  const std::size_t st = h.stride();
  auto d = h.raw();
  for (std::size_t p = 0; p < h.points(); ++p)
    for (int i = 0; i < h.n(); ++i) d[p * st + i] += t;
}

}  // namespace lyz
