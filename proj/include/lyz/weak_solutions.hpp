#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lyz/hermitian.hpp"
#include "lyz/torus_field.hpp"

namespace lyz {

// Radial bump eta(y) = C exp(1 / (|y|^2 - 1)) on R^d, unit mass in Lebesgue
// measure. Measure-scale conventions cancel: only the normalized kernel enters.
class MollifierKernel {
 public:
  explicit MollifierKernel(int real_dim);

  int real_dim() const { return d_; }
  double normalization() const { return c_; }
  // E|Y|^2 under eta.
  double second_moment() const { return m2_; }

  double operator()(std::span<const double> y) const;
  double radial(double s) const;

  // Fourier transform at radius rho: int eta(y) exp(-i xi.y) dy with |xi| = rho.
  double transform(double rho) const;

  // Unnormalized radial bump exp(1/(s^2 - 1)).
  static double bump(double s);

 private:
  int d_;
  double c_;
  double m2_;
};

// M for the one-complex-dimension kernel eta_0.
double lift_constant();

// Second moment of eta_0 by tensor Gauss-Legendre on [-1,1]^2 with the support indicator.
double lift_constant_tensor(int points_per_axis);

// v(z) = sum_ij Q_ij z_i conj(z_j) + 2 Re sum_i conj(b_i) z_i + Re(h z_1^2) + c
// The h term is pluriharmonic: it changes v but not its complex Hessian.
struct QuadraticTestFn {
  SmallMatrix Q;
  std::vector<cplx> b;
  double c = 0.0;
  cplx h = 0.0;

  int n() const { return Q.dim(); }
  double value(std::span<const cplx> z) const;
  // p_a = dv/dz_a
  std::vector<cplx> gradient(std::span<const cplx> z) const;
  std::vector<double> eigenvalues() const { return hermitian_eigenvalues(Q); }
};

// Closed form: [v]_r = v + r^2 tr(Q) m2 / n. Hessian unchanged.
QuadraticTestFn mollify(const QuadraticTestFn& v, double r, const MollifierKernel& kernel);

// Periodic convolution with eta_r on the torus via its transform. r must be
// at least two grid spacings.
ScalarField mollify(const ScalarField& f, double r, const MollifierKernel& kernel);

struct LiftedMollification {
  QuadraticTestFn base;     // [v]_r
  double additive = 0.0;    // r^2 M
};
LiftedMollification lifted_mollify(const QuadraticTestFn& v, double r, const MollifierKernel& kernel);

// int |z_{n+1} + r y|^2 eta_0(y) dy by tensor quadrature; equals |z_{n+1}|^2 + r^2 M.
double lifted_fiber_quadrature(cplx z_last, double r, int points_per_axis);

enum class ConeMode { Subsolution, Admissible };

struct ConeMargins {
  double equation = 0.0;  // (sigma_{n-1} + sigma_n) / max(1, sigma_{n-1}(|l|) + sigma_n(|l|))
  double cone = 0.0;      // min_{m <= n-1} sigma_m / max(1, sigma_m(|l|))
  bool pass = false;
};

ConeMargins pointwise_cone_check(std::span<const double> lambda, ConeMode mode, double tol = 1e-10);
ConeMargins pointwise_cone_check(const SmallMatrix& hessian, ConeMode mode, double tol = 1e-10);

// Quadratic with sigma_{n-1} + sigma_n = 0 for the Hessian and lambda in the
// closure of Gamma_{n-1}; drawn from stream `index` of `seed`.
QuadraticTestFn sample_solution_quadratic(std::uint64_t seed, std::uint64_t index, int n);

// x with sigma_{n-1}(l', x) + sigma_n(l', x) = 0.
double closing_eigenvalue(std::span<const double> lambda_prime);

struct KeyLemmaReport {
  double mollified_margin = 0.0;  // (ii)
  double square_margin = 0.0;     // (iii), over points with 0 <= v <= 1
  int square_points = 0;
  double midpoint_margin = 0.0;   // (iv)
  bool pass = false;
};

// Samples points uniformly in [-box, box]^{2n}.
KeyLemmaReport keylemmavr_checks(const QuadraticTestFn& v, const QuadraticTestFn& w, double r, double box,
                                 std::uint64_t seed, std::uint64_t index, int points);

struct FieldMargins {
  double input = 0.0;      // min over grid of the margins of q + i ddbar p
  double mollified = 0.0;  // same for q + i ddbar [p]_r
};

// (ii) on a grid: v = (quadratic with Hessian q) + periodic p. Mollifying v
// shifts the quadratic part by a constant, so only p is convolved.
FieldMargins mollified_field_margin(const SmallMatrix& q, const ScalarField& p, double r,
                                    const MollifierKernel& kernel);

// Relative error between sigma_k(lambda(Q + 1)) and sigma_k + sigma_{k-1}, max over k.
double lift_identity_error(const QuadraticTestFn& v);

// (1/k!) sum_S (-1)^{k-|S|} sigma_k(sum_{i in S} A_i), normalized by the same sum of sigma_k(|.|).
double garding_polarization(std::span<const SmallMatrix> hessians, int k);

struct ComparisonResult {
  bool checked = false;   // false when a hypothesis failed
  bool pass = false;
  std::string skipped;    // hypothesis that failed
  double boundary_gap = 0.0;  // min over boundary samples of v - w
  double interior_gap = 0.0;  // min over interior samples of v - w
};

ComparisonResult comparison_check(const QuadraticTestFn& w_sub, const QuadraticTestFn& v_super, double ball_radius,
                                  int grid_res, std::uint64_t seed);

// v_super = w + eps Re(z_1^2) + eps R^2.
QuadraticTestFn pluriharmonic_super(const QuadraticTestFn& w, double eps, double ball_radius);

struct WeakLabReport {
  int n = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  double kernel_mass_error = 0.0;
  double second_moment = 0.0;
  double lift_M = 0.0;
  double lift_M_refinement = 0.0;
  double constraint_max = 0.0;      // |sigma_{n-1} + sigma_n| relative
  double mollified_min = 0.0;       // (ii)
  double square_min = 0.0;          // (iii)
  long long square_points = 0;
  double midpoint_min = 0.0;        // (iv)
  double lift_identity_max = 0.0;
  double lift_fiber_max = 0.0;
  double garding_min = 0.0;
  double grid_input_min = 0.0;
  double grid_mollified_min = 0.0;
  int comparison_pairs = 0;
  int comparison_passed = 0;
  std::vector<std::string> failures;
  bool pass = false;
};

WeakLabReport run_weaklab(int n, int samples, std::uint64_t seed, int comparison_pairs = 100);

}  // namespace lyz
