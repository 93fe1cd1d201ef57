#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "lyz/cone_algebra.hpp"
#include "lyz/errors.hpp"
#include "lyz/hessian_suite.hpp"

using namespace lyz;
using std::numbers::pi;

TEST_CASE("suite defaults") {
  CHECK(default_suite_options(3).N == 8);
  CHECK(default_suite_options(4).N == 4);
  CHECK_THROWS_AS(default_suite_options(5), PreconditionError);
}

TEST_CASE("wedge integrals") {
  const TorusGrid g = make_grid(2, 4);
  const double vol = std::pow(2 * pi, 4);
  const std::vector<double> d{3, 0.5};
  const HermitianField c = constant_field(g, SmallMatrix::diagonal(d));
  CHECK(wedge_integral(c, 0) == doctest::Approx(vol));
  CHECK(wedge_integral(c, 1) == doctest::Approx(vol * 1.75));
  CHECK(wedge_integral(c, 2) == doctest::Approx(vol * 1.5));
  CHECK_THROWS_AS(wedge_integral(c, 3), std::domain_error);

  // The exact part of chi contributes nothing to the linear term.
  const std::vector<TrigMode> m{{{1, 1, 0, -1}, 0.4, 0.3}};
  const HermitianField cr = build_chi(g, SmallMatrix::diagonal(d), trig_field(g, m));
  CHECK(wedge_integral(cr, 1) == doctest::Approx(vol * 1.75).epsilon(1e-12));
}

TEST_CASE("3D example") {
  const BuiltExample b0 = build_3d_example(4, 1, 0.0);
  CHECK(b0.scale == doctest::Approx(1.0).epsilon(1e-14));
  for (const auto& c : b0.conditions) CHECK_MESSAGE(c.pass, c.name);
  CHECK(b0.chi.at(5).max_abs() == doctest::Approx(1.0));

  const BuiltExample b = build_3d_example(8, 1, 0.05);
  REQUIRE(b.conditions.size() == 4);
  for (const auto& c : b.conditions) CHECK_MESSAGE(c.pass, c.name);
  CHECK(b.conditions[0].value <= 1e-12);
  CHECK(std::abs(b.scale - 1.0) < 0.2);

  // Same seed, same field.
  const BuiltExample again = build_3d_example(8, 1, 0.05);
  CHECK(std::equal(b.chi.raw().begin(), b.chi.raw().end(), again.chi.raw().begin()));

  CHECK_THROWS_AS(build_3d_example(8, 1, 10.0), PreconditionError);
  CHECK_THROWS_AS(build_3d_example(8, 1, -0.1), PreconditionError);
  CHECK_THROWS_AS(conditions_3d(constant_field(make_grid(2, 4), SmallMatrix::identity(2))), PreconditionError);
}

TEST_CASE("4D example and scaling") {
  const TorusGrid g = make_grid(4, 4);
  const std::vector<double> d{3, 1, 1, 1};
  const BuiltExample s = scale_4d(constant_field(g, SmallMatrix::diagonal(d)));
  // sigma_1 = 6, sigma_3 = 10.
  CHECK(s.scale == doctest::Approx(std::sqrt(0.6)));
  for (const auto& c : s.conditions) CHECK_MESSAGE(c.pass, c.name);

  const BuiltExample b0 = build_4d_example(4, 1, 0.0);
  CHECK(b0.scale == doctest::Approx(1.0));
  const BuiltExample b = build_4d_example(4, 1, 0.05);
  for (const auto& c : b.conditions) CHECK_MESSAGE(c.pass, c.name);

  const std::vector<double> neg{-1, -1, -1, -1};
  CHECK_THROWS_AS(scale_4d(constant_field(g, SmallMatrix::diagonal(neg))), PreconditionError);
  CHECK_THROWS_AS(build_4d_example(4, 1, 10.0), PreconditionError);
}

TEST_CASE("necessity quantities") {
  // sigma_3 = sigma_1 at x = 1/2.
  const std::vector<double> l{2, 1, 1, 0.5};
  CHECK(sigma_k(l, 3) == doctest::Approx(sigma_k(l, 1)));
  const NecessityPoint p = necessity_4d(l);
  CHECK(p.sigma2 == doctest::Approx(7.0));
  CHECK(p.sigma2_omit_min == doctest::Approx(5.0));
  CHECK(p.critical_re == doctest::Approx(-5.0));
  CHECK(theta_angle(l) == doctest::Approx(pi));
}

TEST_CASE("unperturbed 3D suite passes") {
  SuiteOptions o = default_suite_options(3);
  o.N = 4;
  o.perturbation = 0.0;
  const SuiteReport r = run_suite(o);
  CHECK(r.solved);
  for (const auto& c : r.preconditions) CHECK_MESSAGE(c.pass, c.name);
  for (const auto& c : r.path_checks) CHECK_MESSAGE(c.pass, c.name);
  for (const auto& c : r.necessity) CHECK_MESSAGE(c.pass, c.name);
  CHECK(r.pass);
}

TEST_CASE("verify rejects a form failing its conditions") {
  const TorusGrid g = make_grid(3, 4);
  const SuiteReport r = verify_3d(constant_field(g, SmallMatrix::identity(3)), default_suite_options(3));
  CHECK(!r.solved);
  CHECK(!r.pass);
}
