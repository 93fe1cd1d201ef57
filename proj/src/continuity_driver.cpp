#include "lyz/continuity_driver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "lyz/argument_calculus.hpp"
#include "lyz/cone_algebra.hpp"
#include "lyz/errors.hpp"

namespace lyz {

using std::numbers::pi;

void Schedule::validate() const {
  if (!(t0 > 0.0)) throw PreconditionError("schedule: t0 must be positive");
  if (!(ratio > 0.0 && ratio < 1.0)) throw PreconditionError("schedule: ratio must lie in (0, 1)");
  if (!(t_min > 0.0)) throw PreconditionError("schedule: t_min must be positive");
}

std::vector<double> Schedule::ladder() const {
  validate();
  if (t_min >= t0) return {t0};
  std::vector<double> ts;
  for (int k = 0;; ++k) {
    const double t = t0 * std::pow(ratio, k);
    if (t <= t_min) break;
    ts.push_back(t);
  }
  ts.push_back(t_min);
  return ts;
}

namespace {

TraceRow make_row(const HermitianField& chi, const SolverState& st, double elapsed, bool want_d1) {
  TraceRow r;
  r.t = st.t;
  const PhaseSample ph = hat_theta(chi, st.t);
  r.hat_theta = ph.hat_theta;
  r.target_theta = ph.target_theta;
  r.c_solved = st.c;
  r.newton_iters = st.iterations;
  r.res_sup = sup_abs(st.residual);
  const Monitors m = monitors(st.u);
  r.sup_u = m.sup_u;
  r.sup_grad = m.sup_grad;
  r.sup_hess = m.sup_hess;
  r.hmw_ratio = m.hmw_ratio;
  r.wall_time_s = elapsed;
  r.converged = st.converged;
  if (want_d1 && st.converged) r.differentiate1 = differentiate1_check(st).normalized;
  return r;
}

}  // namespace

ContinuityTrace run_path(const HermitianField& chi, const Schedule& schedule, const PathOptions& opts) {
  const auto ts = schedule.ladder();
  const TorusGrid& g = chi.grid();
  const PhaseSample at0 = hat_theta(chi, 0.0);
  if (angular_distance(at0.hat_theta, pi) > 1e-6)
    throw PreconditionError("run_path: hat_theta(0) differs from pi by more than 1e-6");
  const PhaseSample first = hat_theta(chi, ts.front());
  const auto sub = subsolution_verify(chi, ScalarField(g), ts.front(), first.target_theta);
  if (!sub.pass)
    throw PreconditionError("run_path: u = 0 is not a subsolution at t0 (worst margin " +
                            std::to_string(sub.worst_margin) + ")");

  ContinuityTrace trace;
  ScalarField u(g);
  double t_prev = 0.0;
  bool have_prev = false;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double t = ts[i];
    auto clock = std::chrono::steady_clock::now();
    SolverState st = newton_solve(chi, t, u, opts.solver);
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - clock).count(); };
    if (!st.converged && !have_prev)
      throw SolverError("run_path: first solve at t = " + std::to_string(t) + " " + to_string(st.status) +
                        " after " + std::to_string(st.iterations) + " iterations, residual " +
                        std::to_string(sup_abs(st.residual)));
    if (!st.converged) {
      // One geometric midpoint between the last good t and this one.
      const double mid = std::sqrt(t_prev * t);
      clock = std::chrono::steady_clock::now();
      SolverState ms = newton_solve(chi, mid, u, opts.solver);
      TraceRow mrow = make_row(chi, ms, elapsed(), opts.differentiate1);
      mrow.inserted = true;
      trace.rows.push_back(mrow);
      if (!ms.converged) {
        trace.final_state = std::move(ms);
        return trace;
      }
      u = ms.u;
      clock = std::chrono::steady_clock::now();
      st = newton_solve(chi, t, u, opts.solver);
    }
    trace.rows.push_back(make_row(chi, st, elapsed(), opts.differentiate1));
    if (!st.converged) {
      trace.final_state = std::move(st);
      return trace;
    }
    u = st.u;
    t_prev = t;
    have_prev = true;
    trace.final_state = std::move(st);
  }
  trace.completed = true;
  return trace;
}

std::string trace_csv(const ContinuityTrace& trace) {
  std::string out = kTraceHeader;
  out += '\n';
  char buf[512];
  for (const auto& r : trace.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.hat_theta,
                  r.target_theta, r.c_solved, r.newton_iters, r.res_sup, r.sup_u, r.sup_grad, r.sup_hess, r.hmw_ratio,
                  r.wall_time_s);
    out += buf;
  }
  return out;
}

CriticalResidual critical_residual(const HermitianField& chi, const ScalarField& u) {
  const HermitianField w = assemble_w(chi, u, 0.0);
  const EigenField e = pointwise_eigs(w);
  const int n = chi.n();
  CriticalResidual r;
  for (std::size_t p = 0; p < w.points(); ++p) {
    const auto l = e.at(p);
    r.theta_form = std::max(r.theta_form, std::abs(theta_angle(l) - (n - 2) * pi / 2));
    r.sigma_form = std::max(r.sigma_form, std::abs(critical_form_parts(l).second));
  }
  return r;
}

HmwCheck hmw_trace_check(const ContinuityTrace& trace, std::optional<double> bound) {
  if (trace.rows.empty()) throw std::domain_error("hmw_trace_check: empty trace");
  HmwCheck h;
  h.bound = bound.value_or(std::max(1.0, 10.0 * trace.rows.front().hmw_ratio));
  for (const auto& r : trace.rows) h.max_ratio = std::max(h.max_ratio, r.hmw_ratio);
  h.pass = h.max_ratio <= h.bound;
  return h;
}

}  // namespace lyz
