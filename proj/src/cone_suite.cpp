#include "lyz/cone_suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "lyz/argument_calculus.hpp"
#include "lyz/cone_algebra.hpp"
#include "lyz/errors.hpp"
#include "lyz/hermitian.hpp"
#include "lyz/parallel.hpp"
#include "lyz/rng.hpp"

namespace lyz {

using std::numbers::pi;

namespace {

constexpr long long kBlock = 1000;
constexpr long long kMaxRejections = 100000;
constexpr double kBox = 5.0;

struct Partial {
  long long samples = 0;
  long long violations = 0;
  double worst = INFINITY;

  void record(double margin, double tol) {
    ++samples;
    worst = std::min(worst, margin);
    if (margin < -tol) ++violations;
  }
  void record(bool ok, double margin) {
    ++samples;
    worst = std::min(worst, margin);
    if (!ok) ++violations;
  }
};

std::vector<double> draw(CounterRng& rng, int n) {
  std::vector<double> l(n);
  for (double& v : l) v = rng.uniform(-kBox, kBox);
  std::sort(l.begin(), l.end(), std::greater<>());
  return l;
}

std::vector<double> draw_if(CounterRng& rng, int n, const std::function<bool(std::span<const double>)>& accept) {
  for (long long i = 0; i < kMaxRejections; ++i) {
    auto l = draw(rng, n);
    if (accept(l)) return l;
  }
  throw std::runtime_error("cone suite: rejection sampler exhausted");
}

std::vector<double> midpoint(std::span<const double> a, std::span<const double> b) {
  std::vector<double> m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = 0.5 * (a[i] + b[i]);
  return m;
}

double scale(std::span<const double> l) {
  double s = 1.0;
  for (double v : l) s = std::max(s, std::abs(v));
  return s;
}

using BlockBody = std::function<void(CounterRng&, long long, std::vector<Partial>&)>;

// Runs body over fixed blocks, each with its own stream, and merges in block order.
std::vector<Partial> run_blocks(int tallies, long long count, std::uint64_t seed, std::uint64_t stream_base,
                                const BlockBody& body) {
  const long long blocks = (count + kBlock - 1) / kBlock;
  std::vector<std::vector<Partial>> parts(blocks, std::vector<Partial>(tallies));
  parallel_for(static_cast<std::size_t>(blocks), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      CounterRng rng(seed, (stream_base << 24) | i);
      const long long m = std::min(kBlock, count - static_cast<long long>(i) * kBlock);
      body(rng, m, parts[i]);
    }
  });
  std::vector<Partial> total(tallies);
  for (const auto& block : parts)
    for (int t = 0; t < tallies; ++t) {
      total[t].samples += block[t].samples;
      total[t].violations += block[t].violations;
      total[t].worst = std::min(total[t].worst, block[t].worst);
    }
  return total;
}

Partial run_blocks(long long count, std::uint64_t seed, std::uint64_t stream_base,
                   const std::function<void(CounterRng&, long long, Partial&)>& body) {
  return run_blocks(1, count, seed, stream_base,
                    [&](CounterRng& rng, long long m, std::vector<Partial>& out) { body(rng, m, out[0]); })[0];
}

std::uint64_t stream_id(int property, int n, int tau_index) {
  return (static_cast<std::uint64_t>(property) << 16) | (static_cast<std::uint64_t>(n) << 8) |
         static_cast<std::uint64_t>(tau_index);
}

double yuan_margin(std::span<const double> l) {
  const int n = static_cast<int>(l.size());
  const double s = scale(l);
  double m = std::min(l[n - 2], l[n - 2] - std::abs(l[n - 1])) / s;
  m = std::min(m, (l[0] + (n - 1) * l[n - 1]) / s);
  for (int k = 1; k <= n - 1; ++k) m = std::min(m, sigma_k(l, k) / std::max(1.0, sigma_k_abs(l, k)));
  return m;
}

// Shift s with A(mu + s) = target; A is increasing in s.
std::vector<double> shift_subsolution(std::vector<double> mu, double target) {
  auto a_of = [&](double s) {
    std::vector<double> v(mu);
    for (double& x : v) x += s;
    return subsolution_margin(v);
  };
  double lo = -1.0, hi = 1.0;
  while (a_of(lo) > target) lo *= 2.0;
  while (a_of(hi) < target) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (a_of(mid) < target ? lo : hi) = mid;
  }
  for (double& x : mu) x += hi;
  return mu;
}

}  // namespace

ConeSuiteReport run_cone_suite(const ConeSuiteOptions& opts) {
  if (opts.samples < 1 || opts.dichotomy_samples < 1) throw PreconditionError("cone suite: sample counts must be positive");
  for (int n : opts.dims)
    if (n < 2 || n > SmallMatrix::kMaxDim - 1) throw PreconditionError("cone suite: n must be in 2..7");

  ConeSuiteReport rep;
  rep.seed = opts.seed;
  rep.samples_per_config = opts.samples;
  rep.tol = opts.tol;
  const double tol = opts.tol;
  auto push = [&](const char* name, int n, double tau, const Partial& p) {
    rep.properties.push_back({name, n, tau, p.samples, p.violations, p.worst});
    rep.violations += p.violations;
  };

  for (int n : opts.dims) {
    const double crit = (n - 2) * pi / 2;
    for (int ti = 0; ti < 2; ++ti) {
      const double tau = crit + 0.3 * ti;
      auto in_phase = [tau](std::span<const double> l) { return theta_angle(l) >= tau; };
      const auto tallies = run_blocks(2, opts.samples, opts.seed, stream_id(1, n, ti), [&](CounterRng& rng, long long m, std::vector<Partial>& out) {
        for (long long i = 0; i < m; ++i) {
          const auto a = draw_if(rng, n, in_phase);
          const auto b = draw_if(rng, n, in_phase);
          const YuanReport yr = yuan_check(EigenTuple(a), tau, tol);
          out[0].record(yr.hypothesis_holds && yr.ordered_positive && yr.balanced && yr.in_gamma_n_minus_1, yuan_margin(a));
          out[1].record(theta_angle(midpoint(a, b)) - tau, 1e-12);
        }
      });
      push("yuan_conclusions", n, tau, tallies[0]);
      push("gamma_tau_midpoint", n, tau, tallies[1]);
    }

    auto in_gamma = [n](std::span<const double> l) { return in_cone(l, GammaK{n - 1}, 0.0); };
    push("sigma_n_minus_1_root_concave", n, 0.0,
         run_blocks(opts.samples, opts.seed, stream_id(2, n, 0), [&](CounterRng& rng, long long m, Partial& out) {
           auto f = [n](std::span<const double> l) { return std::pow(sigma_k(l, n - 1), 1.0 / (n - 1)); };
           for (long long i = 0; i < m; ++i) {
             const auto a = draw_if(rng, n, in_gamma);
             const auto b = draw_if(rng, n, in_gamma);
             const double fa = f(a), fb = f(b), fm = f(midpoint(a, b));
             out.record((fm - 0.5 * (fa + fb)) / std::max({1.0, fa, fb}), tol);
           }
         }));
    push("sigma_ratio_concave", n, 0.0,
         run_blocks(opts.samples, opts.seed, stream_id(3, n, 0), [&](CounterRng& rng, long long m, Partial& out) {
           auto f = [n](std::span<const double> l) { return sigma_k(l, n) / sigma_k(l, n - 1); };
           for (long long i = 0; i < m; ++i) {
             const auto a = draw_if(rng, n, in_gamma);
             const auto b = draw_if(rng, n, in_gamma);
             const double fa = f(a), fb = f(b), fm = f(midpoint(a, b));
             out.record((fm - 0.5 * (fa + fb)) / std::max({1.0, std::abs(fa), std::abs(fb), std::abs(fm)}), tol);
           }
         }));
    push("schur_horn_pairing", n, 0.0,
         run_blocks(opts.samples, opts.seed, stream_id(4, n, 0), [&](CounterRng& rng, long long m, Partial& out) {
           for (long long i = 0; i < m; ++i) {
             const auto mu = draw(rng, n);
             std::vector<double> f(n);
             for (double& x : f) x = rng.uniform();
             std::sort(f.begin(), f.end());
             const SmallMatrix a = conjugate_diagonal(random_unitary(rng, n), mu);
             double lhs = 0.0, rhs = 0.0, mag = 0.0;
             for (int j = 0; j < n; ++j) {
               lhs += f[j] * a(j, j).real();
               rhs += f[j] * mu[j];
               mag += f[j] * std::abs(mu[j]);
             }
             out.record((lhs - rhs) / std::max(1.0, mag), tol);
           }
         }));
    push("append_unit_identity", n, 0.0,
         run_blocks(opts.samples, opts.seed, stream_id(5, n, 0), [&](CounterRng& rng, long long m, Partial& out) {
           for (long long i = 0; i < m; ++i) {
             const EigenTuple l(draw(rng, n));
             std::vector<double> lifted_abs(l.values().begin(), l.values().end());
             lifted_abs.push_back(1.0);
             double err = 0.0;
             for (int k = 0; k <= n + 1; ++k) {
               const auto [lhs, rhs] = append_unit_eigenvalue_identity(l, k);
               err = std::max(err, std::abs(lhs - rhs) / std::max(1.0, sigma_k_abs(lifted_abs, k)));
             }
             out.record(-err, 1e-12);
           }
         }));
    push("critical_form_angle", n, 0.0,
         run_blocks(opts.samples, opts.seed, stream_id(6, n, 0), [&](CounterRng& rng, long long m, Partial& out) {
           for (long long i = 0; i < m; ++i) {
             const auto l = draw(rng, n);
             const auto [re, im] = critical_form_parts(l);
             out.record(-angular_distance(std::atan2(im, re), n * pi / 2 - theta_angle(l)), tol);
           }
         }));

    {
      CounterRng rng(opts.seed, stream_id(7, n, 0) << 24);
      const auto mu = shift_subsolution(draw(rng, n), (n - 3) * pi / 2 + 0.3);
      std::vector<EigenTuple> lambdas;
      lambdas.reserve(opts.dichotomy_samples);
      for (long long i = 0; i < opts.dichotomy_samples; ++i) {
        auto l = draw(rng, n);
        const double target = crit + 0.05 * (1.0 - rng.uniform());
        const double s = phase_shift_to(l, target);
        for (double& x : l) x += s;
        lambdas.emplace_back(std::move(l));
      }
      const EigenTuple mu_t(mu);
      const double d0 = search_delta0(mu_t, lambdas);
      Partial p;
      for (const auto& l : lambdas) {
        const bool ok = d0 > 0.0 && dichotomy(mu_t, l, d0).branch != Branch::Neither;
        p.record(ok ? d0 : -1.0, 0.0);
      }
      rep.delta0.push_back(d0);
      push("dichotomy_delta0", n, 0.0, p);
    }
  }
  rep.pass = rep.violations == 0;
  return rep;
}

}  // namespace lyz
