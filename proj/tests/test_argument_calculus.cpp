#include <stdexcept>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "lyz/argument_calculus.hpp"
#include "lyz/cone_algebra.hpp"
#include "lyz/errors.hpp"
#include "lyz/rng.hpp"
#include "oracles/convolution.hpp"

using namespace lyz;
using std::numbers::pi;

namespace {

HermitianField diag_field(const TorusGrid& g, std::vector<double> d) { return constant_field(g, SmallMatrix::diagonal(d)); }

HermitianField perturbed_critical(const TorusGrid& g) {
  const std::vector<double> d{1, 1, 0};
  const std::vector<TrigMode> m{{{1, 0, 0, 0, 0, 0}, 0.1, 0.0}};
  return build_chi(g, SmallMatrix::diagonal(d), trig_field(g, m));
}

// Z for diag(1 - 0.025 cos x1, 1, 0) + (t + i) I by quadrature in x1 alone.
cplx refined_charge(double t) {
  auto part = [t](double x, bool imag) {
    const cplx z = cplx(1.0 - 0.025 * std::cos(x) + t, 1.0) * cplx(1.0 + t, 1.0) * cplx(t, 1.0);
    return imag ? z.imag() : z.real();
  };
  const double f = std::pow(2 * pi, 5);
  return f * cplx(oracle::simpson([&](double x) { return part(x, false); }, 0, 2 * pi, 4000),
                  oracle::simpson([&](double x) { return part(x, true); }, 0, 2 * pi, 4000));
}

}  // namespace

TEST_CASE("central charge of constant fields") {
  const TorusGrid g = make_grid(3, 4);
  const double v = std::pow(2 * pi, 6);
  const cplx z1 = central_charge(diag_field(g, {1, 1, 1}), 0.0);
  CHECK(std::abs(z1 - v * cplx(-2, 2)) < 1e-12 * v);
  const cplx z2 = central_charge(diag_field(g, {1, 1, 0}), 0.0);
  CHECK(std::abs(z2 - v * cplx(-2, 0)) < 1e-12 * v);
  CHECK(hat_theta(diag_field(g, {1, 1, 0}), 0.0).hat_theta == doctest::Approx(pi));
  CHECK_THROWS_AS(central_charge(diag_field(g, {1, 1, 0}), -0.1), PreconditionError);
}

TEST_CASE("central charge matches refined quadrature") {
  const TorusGrid g = make_grid(3, 4);
  const HermitianField chi = perturbed_critical(g);
  for (double t : {0.0, 0.01, 0.1}) {
    const cplx want = refined_charge(t);
    CHECK(std::abs(central_charge(chi, t) - want) <= 1e-8 * std::abs(want));
  }
}

TEST_CASE("phase samples") {
  const TorusGrid g = make_grid(3, 4);
  const PhaseSample a = hat_theta(diag_field(g, {1, 1, 1}), 0.0);
  CHECK(a.hat_theta == doctest::Approx(3 * pi / 4));
  CHECK(a.target_theta == doctest::Approx(theta_angle(EigenTuple{1, 1, 1})));
  const PhaseSample b = hat_theta(diag_field(g, {1, 1, 0}), 0.0);
  CHECK(b.target_theta == doctest::Approx(pi / 2));

  const HermitianField chi = perturbed_critical(g);
  double prev = -INFINITY;
  for (double t : {0.2, 0.1, 0.05, 0.01, 0.001}) {
    const PhaseSample s = hat_theta(chi, t);
    CHECK(s.hat_theta == doctest::Approx(std::arg(refined_charge(t))).epsilon(1e-10));
    CHECK(s.hat_theta > prev);
    CHECK(s.hat_theta < pi);
    prev = s.hat_theta;
  }
}

TEST_CASE("argument consistency for constant fields") {
  CounterRng rng(41);
  const TorusGrid g = make_grid(2, 4);
  for (int s = 0; s < 50; ++s) {
    std::vector<double> mu{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const double t = rng.uniform(0, 1);
    const PhaseSample p = hat_theta(diag_field(g, mu), t);
    std::vector<double> shifted(mu);
    for (double& x : shifted) x += t;
    CHECK(angular_distance(p.hat_theta, 2 * pi / 2 - theta_angle(shifted)) < 1e-12);
  }
}

TEST_CASE("vanishing central charge is an error") {
  // diag(g, g) with g = sqrt(2) cos x1 has int (g + i)^2 = 0. Not closed; only the guard is exercised.
  const TorusGrid g = make_grid(2, 4);
  HermitianField h(g);
  for (std::size_t p = 0; p < g.points(); ++p) {
    const double v = std::sqrt(2.0) * std::cos(g.coordinates(p)[0]);
    const std::vector<double> d{v, v};
    h.set(p, SmallMatrix::diagonal(d));
  }
  CHECK(std::abs(central_charge(h, 0.0)) < 1e-9);
  CHECK_THROWS_AS(hat_theta(h, 0.0), SolverError);
}

TEST_CASE("bracket on a constant critical field") {
  const TorusGrid g = make_grid(3, 4);
  const std::vector<double> ts{1e-3, 1e-2, 5e-2, 0.1};
  const BracketFit f = bracket_check(diag_field(g, {1, 1, 0}), ts);
  CHECK(f.pass);
  CHECK(f.c_defined);
  // hat_theta = 3pi/2 - 2 atan(1 + t) - atan t = pi - 2t + t^2/2 + O(t^3)
  CHECK(f.C_fit > 1.0);
  CHECK(f.C_fit < 2.0);
  for (double t : ts) {
    const double closed = 1.5 * pi - 2 * std::atan(1 + t) - std::atan(t);
    CHECK(closed > pi - 2 * f.C_fit * t);
    CHECK(closed < pi - f.C_fit * t);
  }
}

TEST_CASE("bracket edge cases and negative control") {
  const BracketFit empty = fit_bracket(std::span<const PhaseSample>{});
  CHECK(empty.pass);
  CHECK_FALSE(empty.c_defined);
  // Phase above pi and moving away: no C can bracket it.
  std::vector<PhaseSample> wrong;
  for (double t : {1e-3, 1e-2, 1e-1}) wrong.push_back({t, {}, pi - 1e-12 + t, 0.0});
  CHECK_FALSE(fit_bracket(wrong).pass);
  const TorusGrid g = make_grid(3, 4);
  const std::vector<double> ts{1e-2};
  CHECK_THROWS_AS(bracket_check(diag_field(g, {1, 1, 1}), ts), PreconditionError);
  const std::vector<double> desc{1e-2, 1e-3};
  CHECK_THROWS_AS(bracket_check(diag_field(g, {1, 1, 0}), desc), PreconditionError);
}

TEST_CASE("subsolution verification") {
  const TorusGrid g = make_grid(3, 4);
  const SubsolutionCheck a = subsolution_verify(diag_field(g, {1, 1, 0}), ScalarField(g), 0.0, pi / 2);
  CHECK(a.pass);
  CHECK(a.worst_margin == doctest::Approx(pi / 4));
  const SubsolutionCheck b = subsolution_verify(diag_field(g, {0, 0, 0}), ScalarField(g), 0.0, pi / 2);
  CHECK_FALSE(b.pass);
  const SubsolutionCheck c = subsolution_verify(perturbed_critical(g), ScalarField(g), 0.0, pi / 2);
  CHECK(c.pass);
  CHECK(std::abs(c.worst_margin - pi / 4) < 0.05);
  const cplx s = intsub(perturbed_critical(g));
  CHECK(s.imag() > 0.0);
}

TEST_CASE("intsub for constant fields") {
  const TorusGrid g = make_grid(3, 4);
  const std::vector<double> mu{2.0, 0.5, -0.3};
  cplx want = 0.0;
  for (int j = 0; j < 3; ++j) {
    cplx p = 1.0;
    for (int i = 0; i < 3; ++i)
      if (i != j) p *= cplx(mu[i], 1.0);
    want += p / 3.0;
  }
  want *= volume(g);
  CHECK(std::abs(intsub(diag_field(g, mu)) - want) < 1e-10 * std::abs(want));
}
