#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "lyz/cone_algebra.hpp"
#include "lyz/hermitian.hpp"

namespace lyz {

inline constexpr std::size_t kDefaultPointCap = std::size_t{1} << 21;

// Uniform periodic grid on (R/2piZ)^{2n}, axes ordered (x1, y1, ..., xn, yn),
// row-major with the last axis fastest. Copies share the wavenumber table.
class TorusGrid {
 public:
  TorusGrid() = default;
  TorusGrid(int n, int N, std::size_t point_cap = kDefaultPointCap);

  int n() const { return n_; }
  int N() const { return N_; }
  int axes() const { return 2 * n_; }
  std::size_t points() const { return points_; }
  double spacing() const;

  // r2c half-spectrum: N^{2n-1} (N/2 + 1) coefficients.
  std::size_t spectral_points() const { return spectral_; }

  // Signed wavenumber of spectral coefficient s along axis a; the Nyquist
  // index carries -N/2.
  int k(std::size_t s, int a) const { return static_cast<int>((*ktab_)[s * axes() + a]); }
  // Same, zeroed at Nyquist (odd-order derivative convention).
  int k_odd(std::size_t s, int a) const {
    const int v = k(s, a);
    return 2 * v == -N_ ? 0 : v;
  }

  // Real coordinates of grid point p.
  std::vector<double> coordinates(std::size_t p) const;

  friend bool operator==(const TorusGrid& a, const TorusGrid& b) { return a.n_ == b.n_ && a.N_ == b.N_; }

 private:
  int n_ = 0;
  int N_ = 0;
  std::size_t points_ = 0;
  std::size_t spectral_ = 0;
  std::shared_ptr<const std::vector<std::int16_t>> ktab_;
};

TorusGrid make_grid(int n, int N, std::size_t point_cap = kDefaultPointCap);

struct ScalarField {
  TorusGrid grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const TorusGrid& g, double fill = 0.0) : grid(g), values(g.points(), fill) {}
};

// Per point: n real diagonal entries, then (re, im) of h_ij for i < j in
// lexicographic order. n^2 doubles per point, point-major.
class HermitianField {
 public:
  HermitianField() = default;
  explicit HermitianField(const TorusGrid& g);

  const TorusGrid& grid() const { return grid_; }
  int n() const { return grid_.n(); }
  std::size_t stride() const { return static_cast<std::size_t>(n()) * n(); }
  std::size_t points() const { return grid_.points(); }

  SmallMatrix at(std::size_t p) const;
  void set(std::size_t p, const SmallMatrix& h);

  std::span<double> raw() { return data_; }
  std::span<const double> raw() const { return data_; }

  // Component c in [0, n^2) of the storage layout as a scalar field.
  ScalarField component(int c) const;
  void set_component(int c, const ScalarField& f);

  // Storage component index of Re h_ij (i < j); Im is the next one.
  static int offdiag_index(int n, int i, int j);

 private:
  TorusGrid grid_;
  std::vector<double> data_;
};

struct GradientField {
  TorusGrid grid;
  std::vector<cplx> values;  // n per point
};

// Sorted-descending eigenvalues per point.
struct EigenField {
  TorusGrid grid;
  std::vector<double> values;  // n per point

  std::span<const double> at(std::size_t p) const {
    const auto n = static_cast<std::size_t>(grid.n());
    return {values.data() + p * n, n};
  }
  EigenTuple tuple(std::size_t p) const {
    const auto s = at(p);
    return EigenTuple(std::vector<double>(s.begin(), s.end()));
  }
};

struct TrigMode {
  std::vector<int> k;  // 2n integers
  double amplitude = 0.0;
  double phase = 0.0;
};

// sum amplitude cos(<k, x> + phase); each |k_a| < N/2.
ScalarField trig_field(const TorusGrid& grid, std::span<const TrigMode> modes);

// f(x) evaluated at every grid point.
ScalarField sample(const TorusGrid& grid, const std::function<double(std::span<const double>)>& f);

HermitianField complex_hessian(const ScalarField& f);
GradientField complex_gradient(const ScalarField& f);

// Real partial derivative along axis a.
ScalarField axis_derivative(const ScalarField& f, int axis);

// Fourier multiplier with real even symbol(s), s indexing grid.spectral_points().
ScalarField apply_symbol(const ScalarField& f, const std::function<double(std::size_t)>& symbol);

EigenField pointwise_eigs(const HermitianField& h);

double integrate(const ScalarField& f);
double mean(const ScalarField& f);
double sup_abs(const ScalarField& f);
double volume(const TorusGrid& grid);

HermitianField constant_field(const TorusGrid& grid, const SmallMatrix& c);

// chi = C + i ddbar rho
HermitianField build_chi(const TorusGrid& grid, const SmallMatrix& c, const ScalarField& rho);

// a + s b, pointwise
HermitianField axpy(const HermitianField& a, double s, const HermitianField& b);
void add_identity(HermitianField& h, double t);

}  // namespace lyz
