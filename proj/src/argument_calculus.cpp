#include "lyz/argument_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lyz/cone_algebra.hpp"
#include "lyz/errors.hpp"
#include "lyz/parallel.hpp"

namespace lyz {

using std::numbers::pi;

cplx central_charge(const HermitianField& chi, double t) {
  if (t < 0.0) throw PreconditionError("central_charge: t must be nonnegative");
  const int n = chi.n();
  std::vector<cplx> dets(chi.points());
  parallel_for(chi.points(), [&](std::size_t b, std::size_t e) {
    for (std::size_t p = b; p < e; ++p) {
      SmallMatrix m = chi.at(p);
      for (int i = 0; i < n; ++i) m(i, i) += cplx(t, 1.0);
      dets[p] = determinant(m);
    }
  });
  return reproducible_sum(std::span<const cplx>(dets)) * (volume(chi.grid()) / static_cast<double>(chi.points()));
}

double target_phase(int n, double hat) { return n * pi / 2 - hat; }

double angular_distance(double a, double b) { return std::abs(std::remainder(a - b, 2 * pi)); }

PhaseSample hat_theta(const HermitianField& chi, double t) {
  PhaseSample s;
  s.t = t;
  s.Z = central_charge(chi, t);
  if (!(std::abs(s.Z) > kVanishingChargeRel * volume(chi.grid())))
    throw SolverError("vanishing central charge at t = " + std::to_string(t));
  double a = std::arg(s.Z);
  if (a <= -pi) a = pi;
  s.hat_theta = a;
  s.target_theta = target_phase(chi.n(), a);
  return s;
}

BracketFit fit_bracket(std::span<const PhaseSample> samples) {
  BracketFit fit;
  if (samples.empty()) {
    fit.pass = true;
    return fit;
  }
  std::vector<PhaseSample> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  for (const auto& x : s)
    if (!(x.t > 0.0)) throw PreconditionError("fit_bracket: sample t must be positive");

  constexpr int kGrid = 200;
  // For each grid C, the number of leading (smallest-t) samples it brackets.
  std::vector<std::size_t> prefix(kGrid, 0);
  std::vector<double> cs(kGrid);
  std::size_t best = 0;
  for (int j = 0; j < kGrid; ++j) {
    cs[j] = std::pow(10.0, -4.0 + 8.0 * j / (kGrid - 1));
    std::size_t m = 0;
    while (m < s.size()) {
      const double lo = pi - 2 * cs[j] * s[m].t;
      const double hi = pi - cs[j] * s[m].t;
      if (!(s[m].hat_theta > lo && s[m].hat_theta < hi)) break;
      ++m;
    }
    prefix[j] = m;
    best = std::max(best, m);
  }
  fit.pass = best == s.size();
  if (best == 0) return fit;
  // Report the middle of the feasible grid range for the best prefix.
  std::vector<int> feasible;
  for (int j = 0; j < kGrid; ++j)
    if (prefix[j] == best) feasible.push_back(j);
  fit.c_defined = true;
  fit.C_fit = cs[feasible[feasible.size() / 2]];
  fit.t_lo = s.front().t;
  fit.t_hi = s[best - 1].t;
  fit.t0 = fit.t_hi;
  return fit;
}

BracketFit bracket_check(const HermitianField& chi, std::span<const double> t_samples) {
  for (std::size_t i = 0; i < t_samples.size(); ++i) {
    if (!(t_samples[i] > 0.0)) throw PreconditionError("bracket_check: t samples must be positive");
    if (i > 0 && !(t_samples[i] > t_samples[i - 1]))
      throw PreconditionError("bracket_check: t samples must be strictly ascending");
  }
  const PhaseSample at0 = hat_theta(chi, 0.0);
  if (angular_distance(at0.hat_theta, pi) > 1e-8)
    throw PreconditionError("bracket_check: hat_theta(0) is not pi (critical normalization fails)");
  std::vector<PhaseSample> s;
  s.reserve(t_samples.size());
  for (double t : t_samples) s.push_back(hat_theta(chi, t));
  return fit_bracket(s);
}

SubsolutionCheck subsolution_verify(const HermitianField& chi, const ScalarField& u_bar, double t, double theta_t) {
  HermitianField w = axpy(chi, 1.0, complex_hessian(u_bar));
  add_identity(w, t);
  const EigenField eig = pointwise_eigs(w);
  std::vector<double> margins(w.points());
  const double need = theta_t - pi / 2;
  parallel_for(w.points(), [&](std::size_t b, std::size_t e) {
    for (std::size_t p = b; p < e; ++p) margins[p] = subsolution_margin(eig.at(p)) - need;
  });
  SubsolutionCheck r;
  r.worst_margin = *std::min_element(margins.begin(), margins.end());
  r.pass = r.worst_margin > 0.0;
  return r;
}

cplx intsub(const HermitianField& chi) {
  const int n = chi.n();
  const EigenField eig = pointwise_eigs(chi);
  std::vector<cplx> vals(chi.points());
  parallel_for(chi.points(), [&](std::size_t b, std::size_t e) {
    for (std::size_t p = b; p < e; ++p) {
      const auto l = eig.at(p);
      cplx s = 0.0;
      for (int j = 0; j < n; ++j) {
        cplx prod = 1.0;
        for (int i = 0; i < n; ++i)
          if (i != j) prod *= cplx(l[i], 1.0);
        s += prod;
      }
      vals[p] = s / static_cast<double>(n);
    }
  });
  return reproducible_sum(std::span<const cplx>(vals)) * (volume(chi.grid()) / static_cast<double>(chi.points()));
}

}  // namespace lyz
