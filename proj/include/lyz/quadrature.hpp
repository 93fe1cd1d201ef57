#pragma once

#include <functional>
#include <vector>

namespace lyz {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre rule with the given number of points.
GaussRule gauss_legendre(int points);

// Composite 30-point Gauss-Legendre over equal panels of [a, b].
double composite_gauss(const std::function<double(double)>& f, double a, double b, int panels);

}  // namespace lyz
