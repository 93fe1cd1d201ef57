#include <stdexcept>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "lyz/cone_algebra.hpp"
#include "lyz/dhym_solver.hpp"
#include "lyz/errors.hpp"
#include "lyz/rng.hpp"
#include "oracles/fd_newton.hpp"

using namespace lyz;
using std::numbers::pi;

namespace {

std::vector<TrigMode> modes(CounterRng& rng, int n, int kmax, int count, double amp) {
  std::vector<TrigMode> out;
  for (int m = 0; m < count; ++m) {
    TrigMode t;
    for (int a = 0; a < 2 * n; ++a) t.k.push_back(rng.integer(-kmax, kmax));
    t.amplitude = rng.uniform(-amp, amp);
    t.phase = rng.uniform(0, 2 * pi);
    out.push_back(t);
  }
  return out;
}

ScalarField zero_mean(ScalarField f) {
  const double m = mean(f);
  for (double& v : f.values) v -= m;
  return f;
}

HermitianField chi_22(const TorusGrid& g) {
  const std::vector<double> d{2, 2};
  const std::vector<TrigMode> m{{{1, 0, 0, 0}, 0.2, 0.0}};
  return build_chi(g, SmallMatrix::diagonal(d), trig_field(g, m));
}

}  // namespace

TEST_CASE("residual of constant fields") {
  const TorusGrid g = make_grid(2, 4);
  const std::vector<double> mu{1.5, -0.3};
  const HermitianField chi = constant_field(g, SmallMatrix::diagonal(mu));
  const double t = 0.1;
  const double th = theta_angle(std::vector<double>{1.6, -0.2});
  CHECK(sup_abs(residual(chi, ScalarField(g), th, t)) < 1e-15);
  const ScalarField r = residual(chi, ScalarField(g), 0.0, t);
  for (double v : r.values) CHECK(v == doctest::Approx(th));
}

TEST_CASE("residual is pointwise theta minus c") {
  const TorusGrid g = make_grid(2, 4);
  const HermitianField chi = chi_22(g);
  const ScalarField r = residual(chi, ScalarField(g), 1.0, 0.05);
  for (std::size_t p = 0; p < g.points(); ++p) {
    SmallMatrix w = chi.at(p) + SmallMatrix::identity(2) * 0.05;
    CHECK(r.values[p] == doctest::Approx(theta_angle(hermitian_eigenvalues(w)) - 1.0).epsilon(1e-14));
  }
}

TEST_CASE("linearized coefficients") {
  const TorusGrid g = make_grid(3, 4);
  CHECK((linear_coefficients(HermitianField(g)).at(0) - SmallMatrix::identity(3)).max_abs() < 1e-15);
  const std::vector<double> d{1, 1, 0}, f{0.5, 0.5, 1};
  CHECK((linear_coefficients(constant_field(g, SmallMatrix::diagonal(d))).at(3) - SmallMatrix::diagonal(f)).max_abs() <
        1e-15);

  CounterRng rng(51);
  const TorusGrid g2 = make_grid(2, 8);
  const HermitianField w = build_chi(g2, SmallMatrix::identity(2), trig_field(g2, modes(rng, 2, 3, 5, 0.5)));
  const HermitianField F = linear_coefficients(w);
  double law = 0.0, inv = 0.0;
  for (std::size_t p = 0; p < g2.points(); ++p) {
    const SmallMatrix wp = w.at(p), fp = F.at(p);
    inv = std::max(inv, (fp * (wp * wp + SmallMatrix::identity(2)) - SmallMatrix::identity(2)).max_abs());
    const auto lw = hermitian_eigenvalues(wp);
    const auto lf = hermitian_eigenvalues(fp);
    // F is decreasing in |lambda|: match each 1/(1+l^2) against the sorted spectrum of F.
    std::vector<double> want;
    for (double l : lw) want.push_back(1.0 / (1.0 + l * l));
    std::sort(want.begin(), want.end(), std::greater<>());
    for (std::size_t i = 0; i < want.size(); ++i) law = std::max(law, std::abs(lf[i] - want[i]));
  }
  CHECK(inv < 1e-12);
  CHECK(law < 1e-10);
}

TEST_CASE("linearized operator") {
  const TorusGrid g = make_grid(2, 8);
  const HermitianField id = constant_field(g, SmallMatrix::identity(2));
  CHECK(sup_abs(apply_linearized(id, ScalarField(g, 4.0))) < 1e-14);

  CounterRng rng(52);
  const ScalarField v = trig_field(g, modes(rng, 2, 3, 4, 1.0));
  const ScalarField lv = apply_linearized(id, v);
  const HermitianField hv = complex_hessian(v);
  double err = 0.0;
  for (std::size_t p = 0; p < g.points(); ++p) err = std::max(err, std::abs(lv.values[p] - hv.at(p).trace().real()));
  CHECK(err < 1e-12);

  SmallMatrix fc(2);
  fc(0, 0) = 0.7;
  fc(1, 1) = 0.4;
  fc.set_hermitian(0, 1, cplx(0.1, -0.2));
  const std::vector<TrigMode> one{{{1, -2, 3, 1}, 1.0, 0.4}};
  const ScalarField m = trig_field(g, one);
  const ScalarField lm = apply_linearized(constant_field(g, fc), m);
  // i ddbar cos(k.x) = -1/4 K cos(k.x) with K_ab = (kxa kxb + kya kyb) + i (kxa kyb - kya kxb)
  const double k[4] = {1, -2, 3, 1};
  double q = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const cplx K(k[2 * a] * k[2 * b] + k[2 * a + 1] * k[2 * b + 1], k[2 * a] * k[2 * b + 1] - k[2 * a + 1] * k[2 * b]);
      q += (fc(b, a) * K).real();
    }
  for (std::size_t p = 0; p < g.points(); ++p) CHECK(lm.values[p] == doctest::Approx(-0.25 * q * m.values[p]).epsilon(1e-12));
}

TEST_CASE("linearization matches central differences") {
  const TorusGrid g = make_grid(2, 8);
  const HermitianField chi = chi_22(g);
  CounterRng rng(53);
  const double t = 0.05, h = 1e-5;
  double worst = 0.0;
  for (int pair = 0; pair < 100; ++pair) {
    const ScalarField u = zero_mean(trig_field(g, modes(rng, 2, 3, 3, 0.05)));
    const ScalarField v = zero_mean(trig_field(g, modes(rng, 2, 3, 3, 1.0)));
    ScalarField up(u), um(u);
    for (std::size_t p = 0; p < g.points(); ++p) {
      up.values[p] += h * v.values[p];
      um.values[p] -= h * v.values[p];
    }
    const ScalarField rp = residual(chi, up, 0.0, t), rm = residual(chi, um, 0.0, t);
    const ScalarField lv = apply_linearized(linear_coefficients(assemble_w(chi, u, t)), v);
    double diff = 0.0;
    for (std::size_t p = 0; p < g.points(); ++p)
      diff = std::max(diff, std::abs((rp.values[p] - rm.values[p]) / (2 * h) - lv.values[p]));
    worst = std::max(worst, diff / sup_abs(lv));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("constant coefficient solves are immediate") {
  const TorusGrid g = make_grid(2, 4);
  const std::vector<double> mu{1.0, 0.5};
  const SolverState s = newton_solve(constant_field(g, SmallMatrix::diagonal(mu)), 0.1, ScalarField(g));
  CHECK(s.converged);
  CHECK(s.iterations <= 1);
  CHECK(sup_abs(s.u) < 1e-14);
  CHECK(s.c == doctest::Approx(theta_angle(std::vector<double>{1.1, 0.6})));
  CHECK(differentiate1_check(s).normalized < 1e-14);
}

TEST_CASE("solver recovers the exact potential and keeps its invariants") {
  const TorusGrid g = make_grid(2, 8);
  CounterRng rng(54);
  const ScalarField rho = zero_mean(trig_field(g, modes(rng, 2, 2, 3, 0.3)));
  const HermitianField chi = build_chi(g, SmallMatrix::identity(2), rho);
  const SolverState s = newton_solve(chi, 0.05, ScalarField(g));
  REQUIRE(s.converged);
  double err = 0.0;
  for (std::size_t p = 0; p < g.points(); ++p) err = std::max(err, std::abs(s.u.values[p] + rho.values[p]));
  CHECK(err < 1e-9);
  CHECK(std::abs(mean(s.u)) < 1e-13);
  CHECK(sup_abs(residual(chi, s.u, s.c, 0.05)) < 1e-9);
  CHECK(std::abs(sup_abs(residual(chi, s.u, s.c, 0.05)) - sup_abs(s.residual)) < 1e-13);
  // quadratic tail: each of the last steps squares the error up to the Krylov floor
  const auto& hst = s.history;
  REQUIRE(hst.size() >= 3);
  for (std::size_t i = hst.size() - 2; i < hst.size(); ++i)
    if (hst[i - 1] < 0.1) CHECK(hst[i] <= std::max(10.0 * hst[i - 1] * hst[i - 1], 1e-4 * hst[i - 1]));
  const EigenField e = pointwise_eigs(s.w);
  for (std::size_t p = 0; p < g.points(); ++p) {
    CHECK(theta_angle(e.at(p)) > 0.0);
    CHECK(in_cone(e.at(p), GammaK{1}, 0.0));
  }
  CHECK(differentiate1_check(s).normalized <= 1e-6);
}

TEST_CASE("manufactured variable-target solution") {
  const TorusGrid g = make_grid(2, 16);
  CounterRng rng(55);
  const ScalarField ustar = zero_mean(trig_field(g, modes(rng, 2, 3, 4, 0.15)));
  const HermitianField chi = build_chi(g, SmallMatrix::identity(2) * 1.5, trig_field(g, modes(rng, 2, 2, 2, 0.2)));
  const double t = 0.05;
  const ScalarField target = phase_field(assemble_w(chi, ustar, t));
  const SolverState s = newton_solve_variable(chi, t, ScalarField(g), target);
  REQUIRE(s.converged);
  double err = 0.0;
  for (std::size_t p = 0; p < g.points(); ++p) err = std::max(err, std::abs(s.u.values[p] - ustar.values[p]));
  CHECK(err <= 1e-8);
  CHECK(std::abs(s.c) < 1e-8);

  // Negative control: the differentiated identity fails by the target
  // gradient, up to aliasing since the target is not band-limited.
  double grad = 0.0;
  for (int a = 0; a < g.axes(); ++a) grad = std::max(grad, sup_abs(axis_derivative(target, a)));
  const Differentiate1 d1 = differentiate1_check(s);
  CHECK(d1.sup_raw == doctest::Approx(grad).epsilon(0.05));
  CHECK(d1.normalized > 1e-2);
}

TEST_CASE("finite-difference Newton oracle") {
  const int N = 8;
  const TorusGrid g = make_grid(2, N);
  const std::vector<TrigMode> m{{{1, 0, 0, 0}, 0.2, 0.0}};
  const ScalarField rho = trig_field(g, m);
  const double t = 0.05;

  // The oracle builds its chi with its own difference stencil, so both
  // discretizations target the same continuous potential.
  oracle::FdProblem prob;
  prob.N = N;
  prob.t = t;
  prob.chi = oracle::fd_complex_hessian(N, rho.values);
  for (auto& c : prob.chi) {
    c[0] += 2.0;
    c[3] += 2.0;
  }
  const oracle::FdSolution fd = oracle::fd_newton(prob);
  REQUIRE(fd.residual <= 1e-12);

  const SolverState s = newton_solve(chi_22(g), t, ScalarField(g));
  REQUIRE(s.converged);
  double err = 0.0;
  for (std::size_t p = 0; p < g.points(); ++p) err = std::max(err, std::abs(s.u.values[p] - fd.u[p]));
  CHECK(err <= 1e-4);
  CHECK(std::abs(s.c - fd.c) <= 1e-4);
}

TEST_CASE("solver preconditions") {
  const TorusGrid g = make_grid(3, 4);
  const std::vector<double> d{-1, -1, -1};
  CHECK_THROWS_AS(newton_solve(constant_field(g, SmallMatrix::diagonal(d)), 0.0, ScalarField(g)), PreconditionError);
  SolverState s;
  CHECK_THROWS_AS(differentiate1_check(s), std::domain_error);
  CHECK_THROWS_AS(newton_solve(constant_field(g, SmallMatrix::identity(3)), 0.0, ScalarField(make_grid(3, 6))),
                  std::invalid_argument);
}

TEST_CASE("monitors") {
  const TorusGrid g = make_grid(2, 8);
  const Monitors z = monitors(ScalarField(g));
  CHECK(z.sup_u == 0.0);
  CHECK(z.hmw_ratio == 0.0);
  const double a = 0.8;
  const std::vector<TrigMode> m{{{1, 0, 0, 0}, a, 0.0}};
  const Monitors mm = monitors(trig_field(g, m));
  CHECK(mm.sup_u == doctest::Approx(a));
  CHECK(mm.sup_grad == doctest::Approx(a / 2));
  CHECK(mm.sup_hess == doctest::Approx(a / 4));
  CHECK(mm.hmw_ratio == doctest::Approx((a / 4) / (1 + a * a / 4)));
}
