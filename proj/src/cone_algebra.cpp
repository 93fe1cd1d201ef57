#include "lyz/cone_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace lyz {

using std::numbers::pi;

EigenTuple::EigenTuple(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::domain_error("EigenTuple: empty tuple");
  for (double v : values_)
    if (!std::isfinite(v)) throw std::domain_error("EigenTuple: non-finite entry");
  std::stable_sort(values_.begin(), values_.end(), std::greater<>());
}

EigenTuple::EigenTuple(std::initializer_list<double> values) : EigenTuple(std::vector<double>(values)) {}

double EigenTuple::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> elementary_symmetric(std::span<const double> lambda) {
  const std::size_t n = lambda.size();
  std::vector<double> e(n + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k >= 1; --k) e[k] += lambda[i] * e[k - 1];
  }
  return e;
}

double sigma_k(std::span<const double> lambda, int k) {
  if (k < 0 || k > static_cast<int>(lambda.size())) throw std::domain_error("sigma_k: k out of range");
  if (k == 0) return 1.0;
  return elementary_symmetric(lambda)[k];
}

double sigma_k(const EigenTuple& lambda, int k) { return sigma_k(lambda.values(), k); }

double sigma_k_abs(std::span<const double> lambda, int k) {
  std::vector<double> a(lambda.begin(), lambda.end());
  for (double& x : a) x = std::abs(x);
  return sigma_k(a, k);
}

double sigma_k_omit(std::span<const double> lambda, int k, std::size_t j) {
  std::vector<double> rest;
  rest.reserve(lambda.size());
  for (std::size_t i = 0; i < lambda.size(); ++i)
    if (i != j) rest.push_back(lambda[i]);
  return sigma_k(rest, k);
}

double theta_angle(std::span<const double> lambda) {
  double s = 0.0;
  for (double v : lambda) {
    if (!std::isfinite(v)) throw std::domain_error("theta_angle: non-finite entry");
    s += std::atan(v);
  }
  return s;
}

double theta_angle(const EigenTuple& lambda) { return theta_angle(lambda.values()); }

double closure_slack(std::span<const double> lambda) {
  double m = 1.0;
  for (double v : lambda) m = std::max(m, std::abs(v));
  return kClosureRelTol * m;
}

bool in_cone(std::span<const double> lambda, const ConeTag& tag, double slack) {
  if (slack < 0.0) throw std::domain_error("in_cone: negative slack");
  const int n = static_cast<int>(lambda.size());
  if (const auto* g = std::get_if<GammaK>(&tag)) {
    if (g->k < 1 || g->k > n) throw std::domain_error("in_cone: Gamma_k with k out of range");
    const auto e = elementary_symmetric(lambda);
    for (int m = 1; m <= g->k; ++m)
      if (!(e[m] > -slack)) return false;
    return true;
  }
  const double tau = std::get<GammaTau>(tag).tau;
  if (tau < (n - 2) * pi / 2 || tau >= n * pi / 2)
    throw std::domain_error("in_cone: Gamma^tau requires tau in [(n-2)pi/2, n pi/2)");
  return theta_angle(lambda) > tau - slack;
}

bool in_cone(const EigenTuple& lambda, const ConeTag& tag, double slack) {
  return in_cone(lambda.values(), tag, slack);
}

double subsolution_margin(std::span<const double> mu) {
  if (mu.size() < 2) throw std::domain_error("subsolution_margin: requires n >= 2");
  std::vector<double> at(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) at[i] = std::atan(mu[i]);
  double best = INFINITY;
  for (std::size_t j = 0; j < mu.size(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i)
      if (i != j) s += at[i];
    best = std::min(best, s);
  }
  return best;
}

YuanReport yuan_check(const EigenTuple& lambda, double tau, double tol) {
  YuanReport r;
  const int n = lambda.dim();
  const double th = theta_angle(lambda);
  if (n < 2 || tau < (n - 2) * pi / 2 || th < tau) return r;
  r.hypothesis_holds = true;
  const double scale = std::max(1.0, lambda.max_abs());
  const double ln1 = lambda[n - 2];
  const double ln = lambda[n - 1];
  r.ordered_positive = ln1 > -tol * scale && ln1 >= std::abs(ln) - tol * scale;
  r.balanced = lambda[0] + (n - 1) * ln >= -tol * scale;
  bool cone = true;
  const auto e = elementary_symmetric(lambda.values());
  for (int m = 1; m <= n - 1; ++m) {
    const double s = std::max(1.0, sigma_k_abs(lambda.values(), m));
    if (e[m] < -tol * s) cone = false;
  }
  r.in_gamma_n_minus_1 = cone;
  return r;
}

DichotomyResult dichotomy(const EigenTuple& mu, const EigenTuple& lambda, double delta0, double t0) {
  if (!(delta0 > 0.0)) throw std::domain_error("dichotomy: delta0 must be positive");
  if (mu.size() != lambda.size()) throw std::invalid_argument("dichotomy: dimension mismatch");
  const std::size_t n = mu.size();
  double weight_sum = 0.0;
  double paired = 0.0;
  double min_weight = INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = 1.0 / (1.0 + lambda[i] * lambda[i]);
    weight_sum += f;
    paired += (mu[i] - lambda[i]) * f;
    min_weight = std::min(min_weight, f);
  }
  Branch b = Branch::Neither;
  if (paired >= delta0 * weight_sum)
    b = Branch::Subsolution;
  else if (min_weight >= delta0 * weight_sum)
    b = Branch::SmallEigenvalue;
  return {b, delta0, t0};
}

double search_delta0(const EigenTuple& mu, std::span<const EigenTuple> lambdas) {
  constexpr int kGrid = 64;
  auto delta_at = [](int i) { return std::pow(10.0, -12.0 + 12.0 * i / (kGrid - 1)); };
  auto all_pass = [&](double d) {
    for (const auto& l : lambdas)
      if (dichotomy(mu, l, d).branch == Branch::Neither) return false;
    return true;
  };
  // Failure is monotone in delta, so bisect on the grid index.
  if (!all_pass(delta_at(0))) return 0.0;
  int lo = 0;
  int hi = kGrid - 1;
  if (all_pass(delta_at(hi))) return delta_at(hi);
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (all_pass(delta_at(mid)))
      lo = mid;
    else
      hi = mid;
  }
  return delta_at(lo);
}

double dichotomy_t0(int n, double a0, double c) {
  if (!(c > 0.0)) throw std::domain_error("dichotomy_t0: C must be positive");
  const double gap = a0 - (n - 3) * pi / 2;
  if (!(gap > 0.0)) throw std::domain_error("dichotomy_t0: A0 must exceed (n-3)pi/2");
  return gap / (8.0 * c);
}

std::pair<double, double> append_unit_eigenvalue_identity(const EigenTuple& lambda, int k) {
  const int n = lambda.dim();
  if (k < 0 || k > n + 1) throw std::domain_error("append_unit_eigenvalue_identity: k out of range");
  std::vector<double> lifted(lambda.values().begin(), lambda.values().end());
  lifted.push_back(1.0);
  const double lhs = sigma_k(lifted, k);
  const auto e = elementary_symmetric(lambda.values());
  const double sk = k <= n ? e[k] : 0.0;
  const double skm1 = k >= 1 ? e[k - 1] : 0.0;
  return {lhs, sk + skm1};
}

std::pair<double, double> critical_form_parts(std::span<const double> lambda) {
  const int n = static_cast<int>(lambda.size());
  const auto e = elementary_symmetric(lambda);
  double re = 0.0;
  double im = 0.0;
  // prod (lambda_j + i) = sum_k sigma_k i^{n-k}
  for (int k = n; k >= 0; --k) {
    const int p = n - k;
    const double sign = ((p / 2) % 2 == 0) ? 1.0 : -1.0;
    if (p % 2 == 0)
      re += sign * e[k];
    else
      im += sign * e[k];
  }
  return {re, im};
}

double phase_shift_to(std::span<const double> lambda, double target) {
  const int n = static_cast<int>(lambda.size());
  if (!(target > -n * pi / 2 && target < n * pi / 2))
    throw std::domain_error("phase_shift_to: target outside the angle range");
  auto shifted = [&](double s) {
    double th = 0.0;
    for (double v : lambda) th += std::atan(v + s);
    return th;
  };
  double lo = -1.0;
  double hi = 1.0;
  while (shifted(lo) > target) lo *= 2.0;
  while (shifted(hi) < target) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (shifted(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace lyz
