#include "lyz/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <stdexcept>

namespace lyz {

GaussRule gauss_legendre(int points) {
  if (points < 1) throw std::domain_error("gauss_legendre: need at least one point");
  GaussRule r;
  // legendre_p_zeros returns the nonnegative zeros in ascending order.
  const auto zeros = boost::math::legendre_p_zeros<double>(points);
  auto weight = [points](double x) {
    const double d = boost::math::legendre_p_prime<double>(points, x);
    return 2.0 / ((1.0 - x * x) * d * d);
  };
  for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
    if (*it == 0.0) continue;
    r.nodes.push_back(-*it);
    r.weights.push_back(weight(*it));
  }
  if (points % 2 == 1) {
    r.nodes.push_back(0.0);
    r.weights.push_back(weight(0.0));
  }
  for (double z : zeros) {
    if (z == 0.0) continue;
    r.nodes.push_back(z);
    r.weights.push_back(weight(z));
  }
  return r;
}

double composite_gauss(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels < 1) throw std::domain_error("composite_gauss: need at least one panel");
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int i = 0; i < panels; ++i)
    s += boost::math::quadrature::gauss<double, 30>::integrate(f, a + i * h, a + (i + 1) * h);
  return s;
}

}  // namespace lyz
