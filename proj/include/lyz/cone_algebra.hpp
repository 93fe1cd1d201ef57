#pragma once

#include <initializer_list>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace lyz {

/// Real eigenvalue tuple of a Hermitian form relative to the background
/// metric. Entries are sorted descending on construction.
class EigenTuple {
 public:
  explicit EigenTuple(std::vector<double> values);
  EigenTuple(std::initializer_list<double> values);

  std::size_t size() const { return values_.size(); }
  int dim() const { return static_cast<int>(values_.size()); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  double max_abs() const;

 private:
  std::vector<double> values_;
};

struct GammaK {
  int k;
};
struct GammaTau {
  double tau;
};
using ConeTag = std::variant<GammaK, GammaTau>;

enum class Branch { Subsolution, SmallEigenvalue, Neither };

struct DichotomyResult {
  Branch branch;
  double delta0;
  double t0;
};

/// Per-conclusion outcome of the phase-cone structure check. When the
/// hypothesis fails the conclusion flags are meaningless and left false.
struct YuanReport {
  bool hypothesis_holds = false;
  bool ordered_positive = false;   // lambda_{n-1} > 0 and lambda_{n-1} >= |lambda_n|
  bool balanced = false;           // lambda_1 + (n-1) lambda_n >= 0
  bool in_gamma_n_minus_1 = false;
};

inline constexpr double kDefaultT0 = 1e-2;
inline constexpr double kClosureRelTol = 1e-12;

// sigma_0..sigma_n via incremental expansion of prod_i (1 + lambda_i x).
std::vector<double> elementary_symmetric(std::span<const double> lambda);

// sigma_k; 0 <= k <= n, otherwise std::domain_error.
double sigma_k(std::span<const double> lambda, int k);
double sigma_k(const EigenTuple& lambda, int k);

// sigma_k of the entrywise absolute values: the natural rounding scale of sigma_k.
double sigma_k_abs(std::span<const double> lambda, int k);

// sigma_k with entry j removed, i.e. sigma_k(lambda | j).
double sigma_k_omit(std::span<const double> lambda, int k, std::size_t j);

// Sum of arctangents, in (-n pi/2, n pi/2).
double theta_angle(std::span<const double> lambda);
double theta_angle(const EigenTuple& lambda);

bool in_cone(std::span<const double> lambda, const ConeTag& tag, double slack);
bool in_cone(const EigenTuple& lambda, const ConeTag& tag, double slack);

// Closure slack for strict cone tests: 1e-12 times the largest |entry| (at least 1e-12).
double closure_slack(std::span<const double> lambda);

// min_j sum_{i != j} arctan mu_i. Requires n >= 2.
double subsolution_margin(std::span<const double> mu);

YuanReport yuan_check(const EigenTuple& lambda, double tau, double tol = 1e-10);

DichotomyResult dichotomy(const EigenTuple& mu, const EigenTuple& lambda, double delta0,
                          double t0 = kDefaultT0);

// Largest delta on a 64-point log grid over [1e-12, 1] for which no sample
// lands in the Neither branch; 0 if every grid value fails.
double search_delta0(const EigenTuple& mu, std::span<const EigenTuple> lambdas);

// t0 = (A0 - (n-3) pi/2) / (8 C) from the dichotomy constant C.
double dichotomy_t0(int n, double a0, double c);

// (sigma_k(lambda, 1), sigma_k(lambda) + sigma_{k-1}(lambda)), 0 <= k <= n+1.
std::pair<double, double> append_unit_eigenvalue_identity(const EigenTuple& lambda, int k);

// (Re, Im) of prod_j (lambda_j + i) from alternating sigma sums.
std::pair<double, double> critical_form_parts(std::span<const double> lambda);

// Shift s such that theta(lambda + s 1) = target (bisection; theta is increasing in s).
double phase_shift_to(std::span<const double> lambda, double target);

}  // namespace lyz
