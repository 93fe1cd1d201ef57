#pragma once

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

// Composite Simpson on [a, b] with an even number of intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int intervals) {
  if (intervals % 2) ++intervals;
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

inline double bump(double s) { return s * s < 1.0 ? std::exp(1.0 / (s * s - 1.0)) : 0.0; }

// int_{S^{d-1}} cos(a w_1) dw up to the constant area of S^{d-2}, which
// cancels against the same factor in the mass.
inline double sphere_cos(int d, double a) {
  if (d == 1) return 2.0 * std::cos(a);
  if (d == 2) return simpson([a](double phi) { return std::cos(a * std::cos(phi)); }, 0.0, 2 * std::numbers::pi, 2000);
  return simpson([a, d](double phi) { return std::cos(a * std::cos(phi)) * std::pow(std::sin(phi), d - 2); }, 0.0,
                 std::numbers::pi, 2000);
}

// Direct convolution of the unit-mass bump eta_r on R^d with cos(y_1):
// (eta_r * cos)(x) = cos(x_1) * int eta_r(y) cos(y_1) dy. Returns the factor.
inline double bump_cos_factor(int d, double r) {
  auto radial = [d](double s) { return bump(s) * std::pow(s, d - 1); };
  const double mass = simpson([&](double s) { return radial(s) * sphere_cos(d, 0.0); }, 0.0, 1.0, 4000);
  const double num = simpson([&](double s) { return radial(s) * sphere_cos(d, r * s); }, 0.0, 1.0, 4000);
  return num / mass;
}

// E|Y|^2 for the unit-mass bump on R^d.
inline double bump_second_moment(int d) {
  const double m0 = simpson([d](double s) { return bump(s) * std::pow(s, d - 1); }, 0.0, 1.0, 20000);
  const double m2 = simpson([d](double s) { return bump(s) * std::pow(s, d + 1); }, 0.0, 1.0, 20000);
  return m2 / m0;
}

}  // namespace oracle
