#include "lyz/reports.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace lyz {

using nlohmann::json;

namespace {

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json checks(const std::vector<NamedCheck>& v) {
  json a = json::array();
  for (const auto& c : v) a.push_back(to_json(c));
  return a;
}

bool all_pass(const json& arr) {
  for (const auto& c : arr)
    if (!c.value("pass", false)) return false;
  return true;
}

std::string fmt(const json& v) {
  if (v.is_null()) return "null";
  if (v.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v.get<double>());
    return buf;
  }
  return v.dump();
}

}  // namespace

json to_json(const NamedCheck& c) { return {{"name", c.name}, {"value", num(c.value)}, {"pass", c.pass}}; }

json to_json(const BracketFit& b) {
  return {{"pass", b.pass},       {"c_defined", b.c_defined}, {"C_fit", num(b.C_fit)},
          {"t_lo", num(b.t_lo)}, {"t_hi", num(b.t_hi)},      {"t0", num(b.t0)}};
}

json to_json(const CriticalResidual& r) {
  return {{"theta_form", num(r.theta_form)}, {"sigma_form", num(r.sigma_form)}};
}

json to_json(const TraceRow& r) {
  return {{"t", num(r.t)},
          {"hat_theta", num(r.hat_theta)},
          {"target_theta", num(r.target_theta)},
          {"c_solved", num(r.c_solved)},
          {"newton_iters", r.newton_iters},
          {"res_sup", num(r.res_sup)},
          {"sup_u", num(r.sup_u)},
          {"sup_grad", num(r.sup_grad)},
          {"sup_hess", num(r.sup_hess)},
          {"hmw_ratio", num(r.hmw_ratio)},
          {"converged", r.converged},
          {"inserted", r.inserted},
          {"differentiate1", num(r.differentiate1)}};
}

json to_json(const ContinuityTrace& t) {
  json rows = json::array();
  for (const auto& r : t.rows) rows.push_back(to_json(r));
  return {{"completed", t.completed}, {"rows", rows}};
}

json to_json(const SuiteReport& r) {
  return {{"dimension", r.dimension},
          {"N", r.N},
          {"seed", r.seed},
          {"perturbation", num(r.perturbation)},
          {"scale", num(r.scale)},
          {"preconditions", checks(r.preconditions)},
          {"solved", r.solved},
          {"critical", to_json(r.critical)},
          {"necessity", checks(r.necessity)},
          {"path_checks", checks(r.path_checks)},
          {"bracket", to_json(r.bracket)},
          {"trace", to_json(r.trace)},
          {"pass", r.pass}};
}

json to_json(const WeakLabReport& r) {
  auto check = [](const char* name, double v, bool pass) { return to_json(NamedCheck{name, v, pass}); };
  json c = json::array();
  c.push_back(check("kernel_mass", r.kernel_mass_error, r.kernel_mass_error <= 1e-10));
  c.push_back(check("lift_M_refinement", r.lift_M_refinement, r.lift_M_refinement <= 1e-7));
  c.push_back(check("constraint", r.constraint_max, r.constraint_max <= 1e-12));
  c.push_back(check("mollified_margin", r.mollified_min, r.mollified_min >= -1e-10));
  c.push_back(check("square_margin", r.square_min, r.square_min >= -1e-10));
  c.push_back(check("midpoint_margin", r.midpoint_min, r.midpoint_min >= -1e-10));
  c.push_back(check("lift_identity", r.lift_identity_max, r.lift_identity_max <= 1e-12));
  c.push_back(check("lift_fiber", r.lift_fiber_max, r.lift_fiber_max <= 1e-10));
  c.push_back(check("garding_polarization", r.garding_min, r.garding_min >= -1e-10));
  c.push_back(check("grid_input_margin", r.grid_input_min, r.grid_input_min >= 0.0));
  c.push_back(check("grid_mollified_margin", r.grid_mollified_min, r.grid_mollified_min >= -1e-10));
  c.push_back(check("comparison_pairs", r.comparison_passed, r.comparison_passed == r.comparison_pairs));
  return {{"n", r.n},
          {"samples", r.samples},
          {"seed", r.seed},
          {"second_moment", num(r.second_moment)},
          {"lift_M", num(r.lift_M)},
          {"square_points", r.square_points},
          {"comparison_total", r.comparison_pairs},
          {"checks", c},
          {"failures", r.failures},
          {"pass", r.pass}};
}

json to_json(const ConeSuiteReport& r) {
  json props = json::array();
  for (const auto& p : r.properties) {
    props.push_back({{"name", p.name},
                     {"n", p.n},
                     {"tau", num(p.tau)},
                     {"samples", p.samples},
                     {"violations", p.violations},
                     {"worst", num(p.worst)},
                     {"pass", p.violations == 0}});
  }
  json d0 = json::array();
  for (double d : r.delta0) d0.push_back(num(d));
  return {{"seed", r.seed},
          {"samples_per_config", r.samples_per_config},
          {"tol", num(r.tol)},
          {"checks", props},
          {"delta0", d0},
          {"violations", r.violations},
          {"pass", r.pass}};
}

json solve_summary(const SolverState& s) {
  json hist = json::array();
  for (double h : s.history) hist.push_back(num(h));
  const Monitors m = monitors(s.u);
  return {{"t", num(s.t)},
          {"c", num(s.c)},
          {"status", to_string(s.status)},
          {"converged", s.converged},
          {"iterations", s.iterations},
          {"krylov_iterations", s.krylov_iterations},
          {"res_sup", num(sup_abs(s.residual))},
          {"history", hist},
          {"sup_u", num(m.sup_u)},
          {"sup_grad", num(m.sup_grad)},
          {"sup_hess", num(m.sup_hess)},
          {"hmw_ratio", num(m.hmw_ratio)},
          {"pass", s.converged}};
}

json path_summary(const HermitianField& chi, const ContinuityTrace& trace) {
  json table = json::array();
  std::vector<PhaseSample> samples;
  for (const auto& r : trace.rows) {
    table.push_back({{"t", num(r.t)}, {"hat_theta", num(r.hat_theta)}, {"target_theta", num(r.target_theta)},
                     {"c_solved", num(r.c_solved)}, {"converged", r.converged}});
    samples.push_back({r.t, {}, r.hat_theta, r.target_theta});
  }
  const BracketFit b = fit_bracket(samples);
  const HmwCheck h = hmw_trace_check(trace);
  json out = {{"completed", trace.completed},
              {"phase_table", table},
              {"bracket", to_json(b)},
              {"hmw", {{"max_ratio", num(h.max_ratio)}, {"bound", num(h.bound)}, {"pass", h.pass}}},
              {"trace", to_json(trace)}};
  if (trace.final_state) {
    out["critical"] = to_json(critical_residual(chi, trace.final_state->u));
    out["final"] = solve_summary(*trace.final_state);
  }
  out["pass"] = trace.completed && b.pass && h.pass;
  return out;
}

std::string dump_report(const json& j) { return j.dump(2) + "\n"; }

std::string render_report(const json& j) {
  std::ostringstream os;
  for (const char* group : {"preconditions", "path_checks", "necessity", "checks"}) {
    if (!j.contains(group)) continue;
    os << group << (all_pass(j[group]) ? "" : "  [failures]") << "\n";
    for (const auto& c : j[group]) {
      os << "  " << (c.value("pass", false) ? "PASS " : "FAIL ") << c.value("name", std::string("?"));
      if (c.contains("n")) os << " n=" << c["n"].dump();
      if (c.contains("tau") && c["tau"].is_number() && c["tau"].get<double>() != 0.0) os << " tau=" << fmt(c["tau"]);
      if (c.contains("value")) os << " value=" << fmt(c["value"]);
      if (c.contains("worst")) os << " worst=" << fmt(c["worst"]);
      os << "\n";
    }
  }
  if (j.contains("failures") && !j["failures"].empty()) {
    os << "failures\n";
    for (const auto& f : j["failures"]) os << "  " << f.get<std::string>() << "\n";
  }
  if (j.contains("pass")) os << "overall " << (j["pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace lyz
