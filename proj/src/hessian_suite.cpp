#include "lyz/hessian_suite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lyz/cone_algebra.hpp"
#include "lyz/errors.hpp"
#include "lyz/parallel.hpp"
#include "lyz/rng.hpp"

namespace lyz {

using std::numbers::pi;

namespace {

constexpr std::uint64_t kStream3d = 3;
constexpr std::uint64_t kStream4d = 4;

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<TrigMode> seeded_modes(CounterRng& rng, int n, int count, double scale) {
  std::vector<TrigMode> modes;
  if (scale == 0.0) return modes;
  while (static_cast<int>(modes.size()) < count) {
    TrigMode m;
    m.k.resize(2 * n);
    bool nonzero = false;
    for (int& v : m.k) {
      v = rng.integer(-1, 1);
      nonzero = nonzero || v != 0;
    }
    m.amplitude = scale * rng.uniform(0.5, 1.0);
    m.phase = rng.uniform(0.0, 2 * pi);
    if (nonzero) modes.push_back(std::move(m));
  }
  return modes;
}

HermitianField scaled(const HermitianField& h, double s) {
  HermitianField r = h;
  for (double& v : r.raw()) v *= s;
  return r;
}

// Integral of a pointwise function of the eigenvalues.
double integrate_eigs(const EigenField& e, const std::function<double(std::span<const double>)>& f) {
  ScalarField v(e.grid);
  for (std::size_t p = 0; p < e.grid.points(); ++p) v.values[p] = f(e.at(p));
  return integrate(v);
}

double min_eigs(const EigenField& e, const std::function<double(std::span<const double>)>& f) {
  double m = INFINITY;
  for (std::size_t p = 0; p < e.grid.points(); ++p) m = std::min(m, f(e.at(p)));
  return m;
}

NamedCheck normalization_check(const HermitianField& chi) {
  const double d = angular_distance(hat_theta(chi, 0.0).hat_theta, pi);
  return {"critical_normalization", d, d <= 1e-8};
}

void throw_on_failure(const std::vector<NamedCheck>& checks) {
  for (const auto& c : checks)
    if (!c.pass) throw PreconditionError("condition failed: " + c.name + " (value " + std::to_string(c.value) + ")");
}

bool all_pass(const std::vector<NamedCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

}  // namespace

SuiteOptions default_suite_options(int dimension) {
  SuiteOptions o;
  o.dimension = dimension;
  if (dimension == 4) {
    o.N = 4;
    o.schedule.t_min = 2e-3;
    o.sigma_tol = 1e-2;
  } else if (dimension != 3) {
    throw PreconditionError("suite dimension must be 3 or 4");
  }
  return o;
}

double wedge_integral(const HermitianField& chi, int k) {
  const int n = chi.n();
  if (k < 0 || k > n) throw std::domain_error("wedge_integral: k out of range");
  const EigenField e = pointwise_eigs(chi);
  return integrate_eigs(e, [k](auto l) { return sigma_k(l, k); }) / binom(n, k);
}

std::vector<NamedCheck> conditions_3d(const HermitianField& chi) {
  if (chi.n() != 3) throw PreconditionError("conditions_3d: n must be 3");
  const double vol = volume(chi.grid());
  const EigenField e = pointwise_eigs(chi);
  const double i1 = integrate_eigs(e, [](auto l) { return sigma_k(l, 1); });
  const double i2 = integrate_eigs(e, [](auto l) { return sigma_k(l, 2); });
  const double i3 = integrate_eigs(e, [](auto l) { return sigma_k(l, 3); });
  std::vector<NamedCheck> c;
  const double eq = std::abs(i2 - vol) / vol;
  c.push_back({"quadratic_volume_equality", eq, eq <= 1e-12});
  const double pair = min_eigs(e, [](auto l) { return l[1] + l[2]; });
  c.push_back({"positive_2_2_form", pair, pair > 0.0});
  const double gap = (i1 - i3) / vol;
  c.push_back({"cubic_below_linear", gap, gap > 0.0});
  c.push_back(normalization_check(chi));
  return c;
}

std::vector<NamedCheck> conditions_4d(const HermitianField& chi) {
  if (chi.n() != 4) throw PreconditionError("conditions_4d: n must be 4");
  const double vol = volume(chi.grid());
  const EigenField e = pointwise_eigs(chi);
  const double i1 = integrate_eigs(e, [](auto l) { return sigma_k(l, 1); });
  const double i3 = integrate_eigs(e, [](auto l) { return sigma_k(l, 3); });
  const double re = integrate_eigs(e, [](auto l) { return critical_form_parts(l).first; });
  std::vector<NamedCheck> c;
  const double eq = std::abs(i3 - i1) / std::max(std::abs(i1), 1e-300);
  c.push_back({"cubic_linear_equality", eq, eq <= 1e-12});
  const double form = min_eigs(e, [](auto l) {
    double m = INFINITY;
    for (std::size_t j = 0; j < l.size(); ++j) m = std::min(m, sigma_k_omit(l, 2, j));
    return m - 1.0;
  });
  c.push_back({"positive_3_3_form", form, form > 0.0});
  c.push_back({"linear_positive", i1 / vol, i1 > 0.0});
  c.push_back({"critical_real_negative", -re / vol, re < 0.0});
  c.push_back(normalization_check(chi));
  return c;
}

BuiltExample build_3d_example(int N, std::uint64_t seed, double perturbation) {
  if (!(perturbation >= 0.0)) throw PreconditionError("build_3d_example: perturbation must be nonnegative");
  const TorusGrid g = make_grid(3, N);
  CounterRng rng(seed, kStream3d);
  const std::vector<double> d{1.0, 1.0, 0.0};
  const SmallMatrix u = perturbation == 0.0 ? SmallMatrix::identity(3) : random_unitary(rng, 3);
  const auto modes = seeded_modes(rng, 3, 3, perturbation);
  const HermitianField chi0 = build_chi(g, conjugate_diagonal(u, d), trig_field(g, modes));
  const double i2 = 3.0 * wedge_integral(chi0, 2);
  if (!(i2 > 0.0)) throw PreconditionError("condition failed: quadratic_volume_equality (int sigma_2 <= 0)");
  BuiltExample b;
  b.scale = std::sqrt(volume(g) / i2);
  b.chi = scaled(chi0, b.scale);
  b.conditions = conditions_3d(b.chi);
  throw_on_failure(b.conditions);
  return b;
}

BuiltExample scale_4d(const HermitianField& chi) {
  if (chi.n() != 4) throw PreconditionError("scale_4d: n must be 4");
  const double i1 = wedge_integral(chi, 1);
  const double i3 = wedge_integral(chi, 3);
  if (!(i1 * i3 > 0.0)) throw PreconditionError("scale_4d: int chi^3 ^ omega and int chi ^ omega^3 differ in sign");
  BuiltExample b;
  b.scale = std::sqrt(i1 / i3);
  b.chi = scaled(chi, b.scale);
  b.conditions = conditions_4d(b.chi);
  throw_on_failure(b.conditions);
  return b;
}

BuiltExample build_4d_example(int N, std::uint64_t seed, double perturbation) {
  if (!(perturbation >= 0.0)) throw PreconditionError("build_4d_example: perturbation must be nonnegative");
  const TorusGrid g = make_grid(4, N);
  CounterRng rng(seed, kStream4d);
  std::vector<double> d(4, 1.0);
  SmallMatrix u = SmallMatrix::identity(4);
  if (perturbation != 0.0) {
    u = random_unitary(rng, 4);
    for (double& x : d) x += perturbation * rng.uniform(-1.0, 1.0);
  }
  // At most three modes keep det(i ddbar rho) identically zero, so the
  // N = 4 grid integrates every term of the central charge without aliasing.
  const auto modes = seeded_modes(rng, 4, 3, perturbation);
  return scale_4d(build_chi(g, conjugate_diagonal(u, d), trig_field(g, modes)));
}

NecessityPoint necessity_4d(std::span<const double> lambda) {
  NecessityPoint r;
  r.sigma2 = sigma_k(lambda, 2);
  std::size_t jmin = 0;
  for (std::size_t j = 1; j < lambda.size(); ++j)
    if (lambda[j] < lambda[jmin]) jmin = j;
  r.sigma2_omit_min = sigma_k_omit(lambda, 2, jmin);
  r.critical_re = critical_form_parts(lambda).first;
  return r;
}

namespace {

SuiteReport verify_common(const HermitianField& chi, const SuiteOptions& opts, std::vector<NamedCheck> pre) {
  const int n = chi.n();
  SuiteReport r;
  r.dimension = n;
  r.N = chi.grid().N();
  r.seed = opts.seed;
  r.perturbation = opts.perturbation;
  const auto ts = opts.schedule.ladder();
  const PhaseSample first = hat_theta(chi, ts.front());
  const auto sub = subsolution_verify(chi, ScalarField(chi.grid()), ts.front(), first.target_theta);
  pre.push_back({"subsolution_at_t0", sub.worst_margin, sub.pass});
  r.preconditions = std::move(pre);
  if (!all_pass(r.preconditions)) return r;

  r.trace = run_path(chi, opts.schedule, {opts.solver, true});
  r.solved = true;
  const SolverState& fin = *r.trace.final_state;
  r.critical = critical_residual(chi, fin.u);

  auto& pc = r.path_checks;
  int unconverged = 0;
  double gauge = 0.0, d1 = 0.0;
  std::vector<PhaseSample> samples;
  for (const auto& row : r.trace.rows) {
    if (!row.converged) ++unconverged;
    gauge = std::max(gauge, std::abs(row.c_solved - row.target_theta));
    d1 = std::max(d1, row.differentiate1);
    samples.push_back({row.t, {}, row.hat_theta, row.target_theta});
  }
  pc.push_back({"all_rows_converged", static_cast<double>(unconverged), unconverged == 0 && r.trace.completed});
  r.bracket = fit_bracket(samples);
  pc.push_back({"phase_bracket", r.bracket.C_fit, r.bracket.pass});
  pc.push_back({"gauge_consistency", gauge, gauge <= opts.gauge_tol});
  const HmwCheck h = hmw_trace_check(r.trace);
  pc.push_back({"hmw_ratio_bounded", h.max_ratio, h.pass});
  pc.push_back({"differentiate1", d1, d1 <= opts.d1_tol});
  pc.push_back({"sigma_form_residual", r.critical.sigma_form, r.critical.sigma_form <= opts.sigma_tol});

  const HermitianField chi_u = assemble_w(chi, fin.u, 0.0);
  const EigenField e = pointwise_eigs(chi_u);
  const int k = n - 1;
  const double cone = min_eigs(e, [k](auto l) {
    const auto s = elementary_symmetric(l);
    double m = INFINITY;
    for (int j = 1; j <= k; ++j) m = std::min(m, s[j]);
    return m;
  });
  const bool in_all = min_eigs(e, [k](auto l) { return in_cone(l, GammaK{k}, closure_slack(l)) ? 1.0 : 0.0; }) > 0.5;
  pc.push_back({n == 3 ? "chi_u_in_gamma_2" : "chi_u_in_gamma_3", cone, in_all});

  const double vol = volume(chi.grid());
  auto& nc = r.necessity;
  if (n == 3) {
    const double mac = min_eigs(e, [](auto l) { return sigma_k(l, 1) * sigma_k(l, 2) / 9.0 - sigma_k(l, 3); });
    nc.push_back({"sigma3_le_sigma1_sigma2_over_9", mac, mac >= -1e-10});
    const double i1 = integrate_eigs(e, [](auto l) { return sigma_k(l, 1); });
    const double i3 = integrate_eigs(e, [](auto l) { return sigma_k(l, 3); });
    nc.push_back({"integral_cubic_below_linear", (i1 - i3) / vol, i1 > i3});
  } else {
    const double s2 = min_eigs(e, [](auto l) { return necessity_4d(l).sigma2 - 6.0; });
    nc.push_back({"sigma2_at_least_6", s2, s2 >= -1e-8});
    const double s2o = min_eigs(e, [](auto l) { return necessity_4d(l).sigma2_omit_min - 3.0; });
    nc.push_back({"sigma2_omit_min_at_least_3", s2o, s2o >= -1e-8});
    const double cre = min_eigs(e, [](auto l) { return -2.0 - necessity_4d(l).critical_re; });
    nc.push_back({"critical_real_at_most_minus_2", cre, cre >= -1e-8});
    const double mac = min_eigs(e, [](auto l) { return sigma_k(l, 2) - 6.0 * sigma_k(l, 3) / sigma_k(l, 1); });
    nc.push_back({"maclaurin_sigma2_ge_6_sigma3_over_sigma1", mac, mac >= -1e-10});
    const double i1 = integrate_eigs(e, [](auto l) { return sigma_k(l, 1); });
    const double i3 = integrate_eigs(e, [](auto l) { return sigma_k(l, 3); });
    const double re = integrate_eigs(e, [](auto l) { return critical_form_parts(l).first; });
    const double eq = std::abs(i3 - i1) / std::abs(i1);
    nc.push_back({"integral_cubic_equals_linear", eq, eq <= 1e-12});
    nc.push_back({"integral_linear_positive", i1 / vol, i1 > 0.0});
    nc.push_back({"integral_critical_real_negative", -re / vol, re < 0.0});
  }
  r.pass = all_pass(r.preconditions) && all_pass(r.path_checks) && all_pass(r.necessity);
  return r;
}

}  // namespace

SuiteReport verify_3d(const HermitianField& chi, const SuiteOptions& opts) {
  return verify_common(chi, opts, conditions_3d(chi));
}

SuiteReport verify_4d(const HermitianField& chi, const SuiteOptions& opts) {
  return verify_common(chi, opts, conditions_4d(chi));
}

SuiteReport run_suite(const SuiteOptions& opts) {
  if (opts.dimension == 3) {
    const BuiltExample b = build_3d_example(opts.N, opts.seed, opts.perturbation);
    SuiteReport r = verify_3d(b.chi, opts);
    r.scale = b.scale;
    return r;
  }
  if (opts.dimension == 4) {
    const BuiltExample b = build_4d_example(opts.N, opts.seed, opts.perturbation);
    SuiteReport r = verify_4d(b.chi, opts);
    r.scale = b.scale;
    return r;
  }
  throw PreconditionError("suite dimension must be 3 or 4");
}

}  // namespace lyz
