#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "lyz/cone_algebra.hpp"
#include "lyz/errors.hpp"
#include "lyz/weak_solutions.hpp"
#include "oracles/convolution.hpp"

using namespace lyz;
using std::numbers::pi;

namespace {

double sphere_area(int d) { return 2.0 * std::pow(pi, d / 2.0) / std::tgamma(d / 2.0); }

}  // namespace

TEST_CASE("kernel has unit mass and the expected moments") {
  for (int d : {1, 2, 3, 4, 6, 8}) {
    const MollifierKernel k(d);
    const double radial = oracle::simpson([d](double s) { return oracle::bump(s) * std::pow(s, d - 1); }, 0, 1, 20000);
    CHECK(k.normalization() * sphere_area(d) * radial == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(k.second_moment() == doctest::Approx(oracle::bump_second_moment(d)).epsilon(1e-10));
    CHECK(k.transform(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(lift_constant() == doctest::Approx(0.26131120342055864).epsilon(1e-12));
  CHECK(std::abs(lift_constant_tensor(96) - lift_constant()) < 1e-8);
  CHECK(MollifierKernel::bump(1.0) == 0.0);
  CHECK(MollifierKernel::bump(0.0) == doctest::Approx(std::exp(-1.0)));
  const MollifierKernel k2(2);
  const double y[2] = {0.6, 0.8};
  CHECK(k2(y) == 0.0);
  CHECK_THROWS_AS(MollifierKernel(0), std::domain_error);
}

TEST_CASE("kernel transform matches direct convolution") {
  for (int d : {2, 4}) {
    const MollifierKernel k(d);
    for (double r : {0.1, 0.5, 1.0, 2.5, 6.0})
      CHECK(std::abs(k.transform(r) - oracle::bump_cos_factor(d, r)) < 1e-8);
  }
}

TEST_CASE("grid mollification of a single mode") {
  for (int n : {1, 2}) {
    const TorusGrid g = make_grid(n, 16);
    const MollifierKernel k(2 * n);
    std::vector<int> kv(2 * n, 0);
    kv[0] = 1;
    const std::vector<TrigMode> m{{kv, 1.0, 0.0}};
    const ScalarField f = trig_field(g, m);
    const double r = 0.9;
    const ScalarField mf = mollify(f, r, k);
    const double factor = oracle::bump_cos_factor(2 * n, r);
    double err = 0.0;
    for (std::size_t p = 0; p < g.points(); ++p) err = std::max(err, std::abs(mf.values[p] - factor * f.values[p]));
    CHECK(err < 1e-8);
  }
  const TorusGrid g = make_grid(1, 16);
  CHECK_THROWS_AS(mollify(ScalarField(g), 0.5, MollifierKernel(2)), PreconditionError);
  CHECK_THROWS_AS(mollify(ScalarField(g), 1.0, MollifierKernel(3)), std::invalid_argument);
}

TEST_CASE("quadratic test functions") {
  QuadraticTestFn v;
  const std::vector<double> d{2.0, -0.5};
  v.Q = SmallMatrix::diagonal(d);
  v.b = {cplx(0.5, 0.0), cplx(0.0, 1.0)};
  v.c = 0.25;
  v.h = cplx(0.0, 1.0);
  const std::vector<cplx> z{cplx(1.0, 1.0), cplx(0.0, 2.0)};
  // 2|z1|^2 - 0.5|z2|^2 + 2 Re(0.5 z1 - i z2) + Re(i z1^2) + 0.25
  CHECK(v.value(z) == doctest::Approx(4.0 - 2.0 + 2 * (0.5 + 2.0) - 2.0 + 0.25));
  const auto p = v.gradient(z);
  CHECK(std::abs(p[0] - (2.0 * std::conj(z[0]) + 0.5 + cplx(0, 1) * z[0])) < 1e-14);
  CHECK(std::abs(p[1] - (-0.5 * std::conj(z[1]) + cplx(0, -1))) < 1e-14);

  // complex derivative against central differences in x and y
  const double hstep = 1e-6;
  for (int a = 0; a < 2; ++a) {
    auto zp = z, zm = z, zi = z, zj = z;
    zp[a] += hstep;
    zm[a] -= hstep;
    zi[a] += cplx(0, hstep);
    zj[a] -= cplx(0, hstep);
    const double dx = (v.value(zp) - v.value(zm)) / (2 * hstep);
    const double dy = (v.value(zi) - v.value(zj)) / (2 * hstep);
    CHECK(std::abs(p[a] - 0.5 * cplx(dx, -dy)) < 1e-7);
  }

  const MollifierKernel k(4);
  const QuadraticTestFn m = mollify(v, 0.3, k);
  CHECK((m.Q - v.Q).max_abs() == 0.0);
  CHECK(m.c == doctest::Approx(0.25 + 0.09 * 1.5 * k.second_moment() / 2));
  CHECK_THROWS_AS(mollify(v, 0.0, k), PreconditionError);
  CHECK_THROWS_AS(mollify(v, 0.3, MollifierKernel(2)), std::invalid_argument);

  const LiftedMollification l = lifted_mollify(v, 0.3, k);
  CHECK(l.additive == doctest::Approx(0.09 * lift_constant()));
  CHECK(lifted_fiber_quadrature(cplx(0.3, -0.4), 0.3, 64) ==
        doctest::Approx(0.25 + 0.09 * lift_constant_tensor(64)).epsilon(1e-13));
}

TEST_CASE("closing eigenvalue and cone margins") {
  CHECK(closing_eigenvalue(std::vector<double>{1.0}) == doctest::Approx(-0.5));
  CHECK(closing_eigenvalue(std::vector<double>{1.0, 1.0}) == doctest::Approx(-1.0 / 3));
  CHECK_THROWS_AS(closing_eigenvalue(std::vector<double>{}), std::domain_error);

  const ConeMargins on = pointwise_cone_check(std::vector<double>{1.0, -0.5}, ConeMode::Subsolution);
  CHECK(on.equation == doctest::Approx(0.0));
  CHECK(on.cone == doctest::Approx(1.0 / 3));
  CHECK(on.pass);
  const ConeMargins off = pointwise_cone_check(std::vector<double>{1.0, -0.6}, ConeMode::Subsolution);
  CHECK(off.equation == doctest::Approx(-0.2 / 2.2));
  CHECK(!off.pass);
  CHECK(pointwise_cone_check(std::vector<double>{1.0, -0.6}, ConeMode::Admissible).pass);
  CHECK(!pointwise_cone_check(std::vector<double>{-1.0, -1.0, 5.0}, ConeMode::Admissible).pass);
  CHECK_THROWS_AS(pointwise_cone_check(std::vector<double>{1.0}, ConeMode::Subsolution), std::domain_error);
}

TEST_CASE("sampled solutions lie on the solution set") {
  for (int n : {2, 3, 4})
    for (std::uint64_t i = 0; i < 200; ++i) {
      const QuadraticTestFn v = sample_solution_quadratic(5, i, n);
      const auto l = v.eigenvalues();
      const double s = sigma_k(l, n - 1) + sigma_k(l, n);
      CHECK(std::abs(s) <= 1e-12 * std::max(1.0, sigma_k_abs(l, n - 1) + sigma_k_abs(l, n)));
      CHECK(in_cone(l, GammaK{n - 1}, closure_slack(l)));
      CHECK(lift_identity_error(v) <= 1e-12);
    }
  const QuadraticTestFn a = sample_solution_quadratic(5, 3, 3), b = sample_solution_quadratic(5, 3, 3);
  CHECK((a.Q - b.Q).max_abs() == 0.0);
  CHECK(a.c == b.c);
}

TEST_CASE("mollification, square and midpoint margins") {
  const QuadraticTestFn v = sample_solution_quadratic(9, 0, 3), w = sample_solution_quadratic(9, 1, 3);
  const KeyLemmaReport r = keylemmavr_checks(v, w, 0.3, 1.0, 9, 0, 500);
  CHECK(r.pass);
  CHECK(r.mollified_margin >= -1e-10);
  CHECK(r.midpoint_margin >= -1e-10);
  CHECK(r.square_points > 0);
  CHECK(r.square_margin >= -1e-10);
}

TEST_CASE("grid mollification keeps the margin") {
  const TorusGrid g = make_grid(2, 16);
  const std::vector<double> d{1.0, 0.2};
  const std::vector<TrigMode> m{{{1, 0, 0, 1}, 0.005, 0.2}, {{0, 1, 1, 0}, 0.005, 1.1}};
  const FieldMargins fm = mollified_field_margin(SmallMatrix::diagonal(d), trig_field(g, m), 2.5 * g.spacing(),
                                                 MollifierKernel(4));
  CHECK(fm.input > 0.0);
  CHECK(fm.mollified >= fm.input - 1e-3);
}

TEST_CASE("Garding polarization") {
  const std::vector<double> a{2, 1}, b{1, 3};
  const std::vector<SmallMatrix> hs{SmallMatrix::diagonal(a), SmallMatrix::diagonal(b)};
  // sigma_2: (12 - 2 - 3) / 2 over (12 + 2 + 3) / 2
  CHECK(garding_polarization(hs, 2) == doctest::Approx(3.5 / 8.5));
  const std::vector<SmallMatrix> one{SmallMatrix::diagonal(a)};
  CHECK(garding_polarization(one, 1) == doctest::Approx(1.0));
  CHECK_THROWS_AS(garding_polarization(hs, 1), std::invalid_argument);
}

TEST_CASE("comparison on a ball") {
  const QuadraticTestFn w = sample_solution_quadratic(11, 0, 2);
  const ComparisonResult ok = comparison_check(w, pluriharmonic_super(w, 0.5, 1.0), 1.0, 64, 11);
  CHECK(ok.checked);
  CHECK(ok.pass);
  CHECK(ok.interior_gap >= 0.0);

  QuadraticTestFn lower = w;
  lower.c -= 1.0;
  const ComparisonResult below = comparison_check(w, lower, 1.0, 64, 11);
  CHECK(!below.checked);
  CHECK(below.skipped == "v_super does not dominate w_sub on the boundary");

  // w + eps(|z|^2 - R^2) agrees on the sphere and dips inside; its Hessian is
  // a strict subsolution, so the hypothesis check must refuse it.
  QuadraticTestFn bowl = w;
  bowl.Q += SmallMatrix::identity(2) * 0.1;
  bowl.c -= 0.1;
  const ComparisonResult strict = comparison_check(w, bowl, 1.0, 64, 11);
  CHECK(!strict.checked);
  CHECK(strict.skipped == "v_super is not a supersolution");

  QuadraticTestFn bad = w;
  bad.Q = SmallMatrix::identity(2) * -1.0;
  CHECK(comparison_check(bad, w, 1.0, 64, 11).skipped == "w_sub is not an admissible subsolution");
}

TEST_CASE("weaklab run") {
  const WeakLabReport r = run_weaklab(2, 200, 3, 20);
  CHECK(r.pass);
  CHECK(r.failures.empty());
  CHECK(r.comparison_passed == r.comparison_pairs);
  CHECK_THROWS_AS(run_weaklab(5, 10, 1), PreconditionError);
  CHECK_THROWS_AS(run_weaklab(2, 0, 1), PreconditionError);
}
