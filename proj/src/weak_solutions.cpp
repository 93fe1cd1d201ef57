#include "lyz/weak_solutions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "lyz/cone_algebra.hpp"
#include "lyz/errors.hpp"
#include "lyz/parallel.hpp"
#include "lyz/quadrature.hpp"
#include "lyz/rng.hpp"

namespace lyz {

using std::numbers::pi;

namespace {

constexpr int kRadialPanels = 16;
constexpr double kTol = 1e-10;

double sphere_area(int d) { return 2.0 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d); }

std::vector<cplx> random_point(CounterRng& rng, int n, double box) {
  std::vector<cplx> z(n);
  for (auto& v : z) v = cplx(rng.uniform(-box, box), rng.uniform(-box, box));
  return z;
}

double worst(const ConeMargins& m, ConeMode mode) {
  return mode == ConeMode::Admissible ? m.cone : std::min(m.equation, m.cone);
}

}  // namespace

double MollifierKernel::bump(double s) {
  const double s2 = s * s;
  return s2 < 1.0 ? std::exp(1.0 / (s2 - 1.0)) : 0.0;
}

MollifierKernel::MollifierKernel(int real_dim) : d_(real_dim) {
  if (real_dim < 1) throw std::domain_error("MollifierKernel: dimension must be positive");
  const double i0 = composite_gauss([&](double s) { return bump(s) * std::pow(s, d_ - 1); }, 0.0, 1.0, kRadialPanels);
  const double i2 = composite_gauss([&](double s) { return bump(s) * std::pow(s, d_ + 1); }, 0.0, 1.0, kRadialPanels);
  c_ = 1.0 / (sphere_area(d_) * i0);
  m2_ = i2 / i0;
}

double MollifierKernel::radial(double s) const { return c_ * bump(s); }

double MollifierKernel::operator()(std::span<const double> y) const {
  double s2 = 0.0;
  for (double v : y) s2 += v * v;
  return radial(std::sqrt(s2));
}

double MollifierKernel::transform(double rho) const {
  if (rho == 0.0) return 1.0;
  const double nu = 0.5 * d_ - 1.0;
  const int panels = kRadialPanels + static_cast<int>(std::ceil(rho));
  const double integral = composite_gauss(
      [&](double s) { return bump(s) * std::cyl_bessel_j(nu, rho * s) * std::pow(s, 0.5 * d_); }, 0.0, 1.0, panels);
  return std::pow(2.0 * pi, 0.5 * d_) * std::pow(rho, -nu) * c_ * integral;
}

double lift_constant() { return MollifierKernel(2).second_moment(); }

double lift_constant_tensor(int points) {
  const GaussRule g = gauss_legendre(points);
  double mass = 0.0, moment = 0.0;
  for (int i = 0; i < points; ++i)
    for (int j = 0; j < points; ++j) {
      const double r2 = g.nodes[i] * g.nodes[i] + g.nodes[j] * g.nodes[j];
      const double w = g.weights[i] * g.weights[j] * MollifierKernel::bump(std::sqrt(r2));
      mass += w;
      moment += w * r2;
    }
  return moment / mass;
}

double lifted_fiber_quadrature(cplx z_last, double r, int points) {
  const GaussRule g = gauss_legendre(points);
  double mass = 0.0, acc = 0.0;
  for (int i = 0; i < points; ++i)
    for (int j = 0; j < points; ++j) {
      const cplx y(g.nodes[i], g.nodes[j]);
      const double w = g.weights[i] * g.weights[j] * MollifierKernel::bump(std::abs(y));
      mass += w;
      acc += w * std::norm(z_last + r * y);
    }
  return acc / mass;
}

double QuadraticTestFn::value(std::span<const cplx> z) const {
  const int m = n();
  cplx q = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) q += Q(i, j) * z[i] * std::conj(z[j]);
  double lin = 0.0;
  for (int i = 0; i < m; ++i) lin += 2.0 * (std::conj(b[i]) * z[i]).real();
  return q.real() + lin + (h * z[0] * z[0]).real() + c;
}

std::vector<cplx> QuadraticTestFn::gradient(std::span<const cplx> z) const {
  const int m = n();
  std::vector<cplx> p(m);
  for (int a = 0; a < m; ++a) {
    cplx s = std::conj(b[a]);
    for (int j = 0; j < m; ++j) s += Q(a, j) * std::conj(z[j]);
    p[a] = s;
  }
  p[0] += h * z[0];
  return p;
}

QuadraticTestFn mollify(const QuadraticTestFn& v, double r, const MollifierKernel& kernel) {
  if (!(r > 0.0)) throw PreconditionError("mollify: r must be positive");
  if (kernel.real_dim() != 2 * v.n()) throw std::invalid_argument("mollify: kernel dimension mismatch");
  QuadraticTestFn out = v;
  out.c += r * r * v.Q.trace().real() * kernel.second_moment() / v.n();
  return out;
}

ScalarField mollify(const ScalarField& f, double r, const MollifierKernel& kernel) {
  const TorusGrid& g = f.grid;
  if (kernel.real_dim() != g.axes()) throw std::invalid_argument("mollify: kernel dimension mismatch");
  if (!(r >= 2.0 * g.spacing())) throw PreconditionError("mollify: r is below two grid spacings");
  std::map<int, double> cache;
  std::vector<double> symbol(g.spectral_points());
  for (std::size_t s = 0; s < symbol.size(); ++s) {
    int k2 = 0;
    for (int a = 0; a < g.axes(); ++a) k2 += g.k(s, a) * g.k(s, a);
    auto it = cache.find(k2);
    if (it == cache.end()) it = cache.emplace(k2, kernel.transform(r * std::sqrt(double(k2)))).first;
    symbol[s] = it->second;
  }
  return apply_symbol(f, [&](std::size_t s) { return symbol[s]; });
}

LiftedMollification lifted_mollify(const QuadraticTestFn& v, double r, const MollifierKernel& kernel) {
  return {mollify(v, r, kernel), r * r * lift_constant()};
}

ConeMargins pointwise_cone_check(std::span<const double> lambda, ConeMode mode, double tol) {
  const int n = static_cast<int>(lambda.size());
  if (n < 2) throw std::domain_error("pointwise_cone_check: requires n >= 2");
  const auto e = elementary_symmetric(lambda);
  std::vector<double> abs_l(lambda.begin(), lambda.end());
  for (double& x : abs_l) x = std::abs(x);
  const auto a = elementary_symmetric(abs_l);
  ConeMargins m;
  m.equation = (e[n - 1] + e[n]) / std::max(1.0, a[n - 1] + a[n]);
  m.cone = INFINITY;
  for (int k = 1; k <= n - 1; ++k) m.cone = std::min(m.cone, e[k] / std::max(1.0, a[k]));
  m.pass = worst(m, mode) >= -tol;
  return m;
}

ConeMargins pointwise_cone_check(const SmallMatrix& hessian, ConeMode mode, double tol) {
  return pointwise_cone_check(hermitian_eigenvalues(hessian), mode, tol);
}

double closing_eigenvalue(std::span<const double> lp) {
  const int m = static_cast<int>(lp.size());
  if (m < 1) throw std::domain_error("closing_eigenvalue: need at least one entry");
  const auto e = elementary_symmetric(lp);
  const double den = e[m - 1] + e[m];
  if (std::abs(den) < 1e-12) throw std::domain_error("closing_eigenvalue: degenerate denominator");
  return -e[m] / den;
}

QuadraticTestFn sample_solution_quadratic(std::uint64_t seed, std::uint64_t index, int n) {
  if (n < 2 || n > SmallMatrix::kMaxDim - 1) throw std::domain_error("sample_solution_quadratic: n out of range");
  CounterRng rng(seed, (index << 4) | 1);
  std::vector<double> l;
  double x = 0.0;
  while (true) {
    l.assign(n - 1, 0.0);
    for (double& v : l) v = rng.uniform(0.1, 3.0);
    try {
      x = closing_eigenvalue(l);
      break;
    } catch (const std::domain_error&) {
    }
  }
  l.push_back(x);
  QuadraticTestFn v;
  v.Q = conjugate_diagonal(random_unitary(rng, n), l);
  v.b.resize(n);
  for (auto& bi : v.b) bi = 0.3 * cplx(rng.normal(), rng.normal());
  v.c = rng.uniform(0.2, 0.8);
  const auto ev = v.eigenvalues();
  const ConeMargins m = pointwise_cone_check(ev, ConeMode::Subsolution);
  if (std::abs(m.equation) > 1e-12 || m.cone < -1e-12 || ev.back() < -1.0)
    throw std::logic_error("sample_solution_quadratic: sampled Hessian misses the solution set");
  return v;
}

KeyLemmaReport keylemmavr_checks(const QuadraticTestFn& v, const QuadraticTestFn& w, double r, double box,
                                 std::uint64_t seed, std::uint64_t index, int points) {
  const int n = v.n();
  KeyLemmaReport rep;
  const MollifierKernel kernel(2 * n);
  rep.mollified_margin = worst(pointwise_cone_check(mollify(v, r, kernel).Q, ConeMode::Subsolution), ConeMode::Subsolution);

  CounterRng rng(seed, (index << 4) | 2);
  rep.square_margin = INFINITY;
  for (int i = 0; i < points; ++i) {
    const auto z = random_point(rng, n, box);
    const double val = v.value(z);
    if (val < 0.0 || val > 1.0) continue;
    const auto p = v.gradient(z);
    SmallMatrix hs = v.Q * val;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) hs(a, b) += p[a] * std::conj(p[b]);
    rep.square_margin = std::min(rep.square_margin, worst(pointwise_cone_check(hs, ConeMode::Subsolution), ConeMode::Subsolution));
    ++rep.square_points;
  }

  const SmallMatrix mid = (v.Q + w.Q) * 0.5;
  rep.midpoint_margin = worst(pointwise_cone_check(mid, ConeMode::Subsolution), ConeMode::Subsolution);
  rep.pass = rep.mollified_margin >= -kTol && rep.square_margin >= -kTol && rep.midpoint_margin >= -kTol;
  return rep;
}

FieldMargins mollified_field_margin(const SmallMatrix& q, const ScalarField& p, double r,
                                    const MollifierKernel& kernel) {
  if (q.dim() != p.grid.n()) throw std::invalid_argument("mollified_field_margin: dimension mismatch");
  auto margins = [&](const ScalarField& f) {
    const HermitianField h = axpy(constant_field(f.grid, q), 1.0, complex_hessian(f));
    const EigenField e = pointwise_eigs(h);
    double m = INFINITY;
    for (std::size_t i = 0; i < f.grid.points(); ++i)
      m = std::min(m, worst(pointwise_cone_check(e.at(i), ConeMode::Subsolution), ConeMode::Subsolution));
    return m;
  };
  return {margins(p), margins(mollify(p, r, kernel))};
}

double lift_identity_error(const QuadraticTestFn& v) {
  const int n = v.n();
  const auto l = v.eigenvalues();
  SmallMatrix lifted(n + 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) lifted(i, j) = v.Q(i, j);
  lifted(n, n) = 1.0;
  const auto lt = hermitian_eigenvalues(lifted);
  const auto e = elementary_symmetric(l);
  const auto et = elementary_symmetric(lt);
  double err = 0.0;
  for (int k = 0; k <= n + 1; ++k) {
    const double predicted = (k <= n ? e[k] : 0.0) + (k >= 1 ? e[k - 1] : 0.0);
    err = std::max(err, std::abs(et[k] - predicted) / std::max(1.0, sigma_k_abs(lt, k)));
  }
  return err;
}

double garding_polarization(std::span<const SmallMatrix> hs, int k) {
  if (static_cast<int>(hs.size()) != k || k < 1) throw std::invalid_argument("garding_polarization: need k matrices");
  const int n = hs[0].dim();
  double d = 0.0, scale = 0.0;
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    SmallMatrix s(n);
    int size = 0;
    for (int i = 0; i < k; ++i)
      if (mask & (1u << i)) {
        s += hs[i];
        ++size;
      }
    const auto l = hermitian_eigenvalues(s);
    const double sign = ((k - size) % 2 == 0) ? 1.0 : -1.0;
    d += sign * sigma_k(l, k);
    scale += sigma_k_abs(l, k);
  }
  double fact = 1.0;
  for (int i = 2; i <= k; ++i) fact *= i;
  return (d / fact) / std::max(1.0, scale / fact);
}

QuadraticTestFn pluriharmonic_super(const QuadraticTestFn& w, double eps, double ball_radius) {
  QuadraticTestFn v = w;
  v.h += eps;
  // min of eps Re(z_1^2) on the sphere is -eps R^2, attained at z_1 = iR.
  v.c += eps * ball_radius * ball_radius;
  return v;
}

ComparisonResult comparison_check(const QuadraticTestFn& w_sub, const QuadraticTestFn& v_super, double radius,
                                  int grid_res, std::uint64_t seed) {
  const int n = w_sub.n();
  ComparisonResult res;
  if (!pointwise_cone_check(w_sub.Q, ConeMode::Subsolution).pass) {
    res.skipped = "w_sub is not an admissible subsolution";
    return res;
  }
  const ConeMargins sv = pointwise_cone_check(v_super.Q, ConeMode::Subsolution);
  if (!(sv.equation <= kTol || sv.cone < 0.0)) {
    res.skipped = "v_super is not a supersolution";
    return res;
  }
  auto gap = [&](std::span<const cplx> z) { return v_super.value(z) - w_sub.value(z); };
  CounterRng rng(seed, 7);
  res.boundary_gap = INFINITY;
  std::vector<cplx> z(n);
  for (int k = 0; k < n; ++k)
    for (cplx dir : {cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)}) {
      std::fill(z.begin(), z.end(), cplx(0.0));
      z[k] = radius * dir;
      res.boundary_gap = std::min(res.boundary_gap, gap(z));
    }
  for (int i = 0; i < grid_res; ++i) {
    double norm2 = 0.0;
    for (auto& v : z) {
      v = cplx(rng.normal(), rng.normal());
      norm2 += std::norm(v);
    }
    for (auto& v : z) v *= radius / std::sqrt(norm2);
    res.boundary_gap = std::min(res.boundary_gap, gap(z));
  }
  if (res.boundary_gap < -kTol) {
    res.skipped = "v_super does not dominate w_sub on the boundary";
    return res;
  }
  res.checked = true;
  res.interior_gap = INFINITY;
  for (int i = 0; i < grid_res; ++i) {
    // uniform in the ball: direction times R u^{1/(2n)}
    double norm2 = 0.0;
    for (auto& v : z) {
      v = cplx(rng.normal(), rng.normal());
      norm2 += std::norm(v);
    }
    const double rad = radius * std::pow(rng.uniform(), 1.0 / (2 * n));
    for (auto& v : z) v *= rad / std::sqrt(norm2);
    res.interior_gap = std::min(res.interior_gap, gap(z));
  }
  for (int j = 0; j <= grid_res; ++j) {
    std::fill(z.begin(), z.end(), cplx(0.0));
    z[0] = cplx(0.0, radius * j / (grid_res + 1));
    res.interior_gap = std::min(res.interior_gap, gap(z));
  }
  res.pass = res.interior_gap >= -kTol;
  return res;
}

WeakLabReport run_weaklab(int n, int samples, std::uint64_t seed, int comparison_pairs) {
  if (n < 2 || n > 4) throw PreconditionError("weaklab: n must be in 2..4");
  if (samples < 1) throw PreconditionError("weaklab: samples must be positive");
  WeakLabReport rep;
  rep.n = n;
  rep.samples = samples;
  rep.seed = seed;
  const MollifierKernel kernel(2 * n);
  {
    const double fine =
        composite_gauss([&](double s) { return kernel.radial(s) * std::pow(s, 2 * n - 1); }, 0.0, 1.0, 64);
    rep.kernel_mass_error = std::abs(sphere_area(2 * n) * fine - 1.0);
  }
  rep.second_moment = kernel.second_moment();
  rep.lift_M = lift_constant();
  rep.lift_M_refinement =
      std::max(std::abs(lift_constant_tensor(64) - rep.lift_M), std::abs(lift_constant_tensor(96) - rep.lift_M));

  const double m_tensor = lift_constant_tensor(64);
  const double r = 0.3;
  const int k = n - 1;
  const auto su = static_cast<std::uint64_t>(samples);
  comparison_pairs = std::min(comparison_pairs, samples);
  struct Row {
    double constraint, moll, square, mid, lift, fiber, garding;
    long long pts;
    bool cmp_pass;
  };
  std::vector<Row> rows(samples);
  parallel_for(rows.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const QuadraticTestFn v = sample_solution_quadratic(seed, i, n);
      const QuadraticTestFn w = sample_solution_quadratic(seed, i + su, n);
      Row& row = rows[i];
      row.constraint = std::abs(pointwise_cone_check(v.Q, ConeMode::Subsolution).equation);
      const KeyLemmaReport kl = keylemmavr_checks(v, w, r, 1.0, seed, i, 8);
      row.moll = kl.mollified_margin;
      row.square = kl.square_margin;
      row.pts = kl.square_points;
      row.mid = kl.midpoint_margin;
      row.lift = lift_identity_error(v);
      CounterRng rng(seed, (i << 4) | 3);
      const cplx zl(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
      row.fiber = std::abs(lifted_fiber_quadrature(zl, r, 64) - (std::norm(zl) + r * r * m_tensor));
      std::vector<SmallMatrix> hs{v.Q};
      for (int j = 1; j < k; ++j) hs.push_back(sample_solution_quadratic(seed, i + (j + 1) * su, n).Q);
      row.garding = garding_polarization(hs, k);
      row.cmp_pass = true;
      if (static_cast<int>(i) < comparison_pairs) {
        const auto cr = comparison_check(v, pluriharmonic_super(v, 0.5, 1.0), 1.0, 64, seed + i);
        row.cmp_pass = cr.checked && cr.pass;
      }
    }
  });

  rep.mollified_min = rep.square_min = rep.midpoint_min = rep.garding_min = INFINITY;
  auto fail = [&](std::size_t i, const char* what, double value) {
    if (rep.failures.size() < 20) rep.failures.push_back("sample " + std::to_string(i) + ": " + what + " " + std::to_string(value));
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& row = rows[i];
    rep.constraint_max = std::max(rep.constraint_max, row.constraint);
    rep.mollified_min = std::min(rep.mollified_min, row.moll);
    rep.square_min = std::min(rep.square_min, row.square);
    rep.square_points += row.pts;
    rep.midpoint_min = std::min(rep.midpoint_min, row.mid);
    rep.lift_identity_max = std::max(rep.lift_identity_max, row.lift);
    rep.lift_fiber_max = std::max(rep.lift_fiber_max, row.fiber);
    rep.garding_min = std::min(rep.garding_min, row.garding);
    if (static_cast<int>(i) < comparison_pairs) {
      ++rep.comparison_pairs;
      if (row.cmp_pass) ++rep.comparison_passed;
    }
    if (row.constraint > 1e-12) fail(i, "constraint", row.constraint);
    if (row.moll < -kTol) fail(i, "mollified margin", row.moll);
    if (row.square < -kTol) fail(i, "square margin", row.square);
    if (row.mid < -kTol) fail(i, "midpoint margin", row.mid);
    if (row.lift > 1e-12) fail(i, "lift identity", row.lift);
    if (row.garding < -kTol) fail(i, "garding", row.garding);
    if (!row.cmp_pass) fail(i, "comparison", 0.0);
  }

  {
    // Grid form of (ii) in complex dimension 2 with a strictly interior quadratic part.
    const QuadraticTestFn q = sample_solution_quadratic(seed, 3 * su + 7, 2);
    const SmallMatrix qi = q.Q + SmallMatrix::identity(2) * 0.2;
    const TorusGrid g = make_grid(2, 16);
    CounterRng rng(seed, 11);
    std::vector<TrigMode> modes;
    for (int m = 0; m < 3; ++m) {
      TrigMode t;
      t.k = {rng.integer(-2, 2), rng.integer(-2, 2), rng.integer(-2, 2), rng.integer(-2, 2)};
      t.amplitude = 0.005;
      t.phase = rng.uniform(0.0, 2 * pi);
      modes.push_back(t);
    }
    const FieldMargins fm = mollified_field_margin(qi, trig_field(g, modes), 2.5 * g.spacing(), MollifierKernel(4));
    rep.grid_input_min = fm.input;
    rep.grid_mollified_min = fm.mollified;
  }

  rep.pass = rep.kernel_mass_error <= 1e-10 && rep.lift_M_refinement <= 1e-7 && rep.constraint_max <= 1e-12 &&
             rep.mollified_min >= -kTol && rep.square_min >= -kTol && rep.midpoint_min >= -kTol &&
             rep.lift_identity_max <= 1e-12 && rep.lift_fiber_max <= 1e-10 && rep.garding_min >= -kTol &&
             rep.comparison_passed == rep.comparison_pairs && rep.grid_input_min >= 0.0 &&
             rep.grid_mollified_min >= -kTol;
  return rep;
}

}  // namespace lyz
