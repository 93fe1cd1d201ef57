#include "lyz/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

#include "lyz/errors.hpp"
#include "lyz/hessian_suite.hpp"

namespace lyz {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw PreconditionError("config." + field + ": " + what);
}

void only_keys(const json& j, const std::string& field, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(field.empty() ? "<root>" : field, "expected an object");
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; }))
      fail(field.empty() ? k : field + "." + k, "unknown key");
  }
}

std::string join(const std::string& field, const char* key) { return field.empty() ? key : field + "." + key; }

template <class T>
void read(const json& j, const std::string& field, const char* key, T& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  const std::string name = join(field, key);
  if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) fail(name, "expected a string");
    out = v.get<std::string>();
  } else if constexpr (std::is_same_v<T, double>) {
    if (!v.is_number()) fail(name, "expected a number");
    out = v.get<double>();
  } else if constexpr (std::is_same_v<T, std::uint64_t>) {
    if (!v.is_number_unsigned()) fail(name, "expected a non-negative integer");
    out = v.get<std::uint64_t>();
  } else {
    if (!v.is_number_integer()) fail(name, "expected an integer");
    out = v.get<int>();
  }
}

json matrix_json(const SmallMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.dim(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

SmallMatrix matrix_from(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty() || j.size() > static_cast<std::size_t>(SmallMatrix::kMaxDim))
    fail(field, "expected a non-empty square array of [re, im] pairs");
  const int n = static_cast<int>(j.size());
  SmallMatrix m(n);
  for (int i = 0; i < n; ++i) {
    const json& row = j[i];
    if (!row.is_array() || row.size() != j.size()) fail(field, "matrix is not square");
    for (int k = 0; k < n; ++k) {
      const json& e = row[k];
      if (e.is_number()) {
        m(i, k) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(i, k) = cplx(e[0].get<double>(), e[1].get<double>());
      } else {
        fail(field, "entry (" + std::to_string(i) + "," + std::to_string(k) + ") must be a number or [re, im]");
      }
    }
  }
  return m;
}

}  // namespace

bool operator==(const RunConfig& a, const RunConfig& b) { return to_json(a) == to_json(b); }

RunConfig default_config(int n) {
  RunConfig c;
  c.n = n;
  c.chi.constant = SmallMatrix::identity(n);
  return c;
}

RunConfig suite_config(int dimension) {
  const SuiteOptions o = default_suite_options(dimension);
  RunConfig c = default_config(dimension);
  c.N = o.N;
  c.chi.example = dimension == 3 ? "3d" : "4d";
  c.chi.constant = SmallMatrix();
  c.schedule = o.schedule;
  c.solver = o.solver;
  c.seed = o.seed;
  c.perturbation = o.perturbation;
  c.t = o.schedule.t0;
  return c;
}

void validate(const RunConfig& c) {
  if (c.n < 1 || c.n > 4) fail("n", "must be in 1..4");
  if (c.N < 4 || c.N > 64 || c.N % 2 != 0) fail("N", "must be even and in 4..64");
  if (!c.chi.example.empty()) {
    if (c.chi.example != "3d" && c.chi.example != "4d") fail("chi.example", "must be \"3d\", \"4d\" or empty");
    if ((c.chi.example == "3d" ? 3 : 4) != c.n) fail("chi.example", "does not match n");
    if (c.chi.constant.dim() != 0 || !c.chi.modes.empty()) fail("chi", "example excludes constant and modes");
  } else {
    if (c.chi.constant.dim() != c.n) fail("chi.constant", "must be n x n");
    if (c.chi.constant.hermitian_defect() > 1e-12) fail("chi.constant", "must be Hermitian");
    for (std::size_t m = 0; m < c.chi.modes.size(); ++m) {
      const TrigMode& mode = c.chi.modes[m];
      const std::string f = "chi.modes[" + std::to_string(m) + "]";
      if (static_cast<int>(mode.k.size()) != 2 * c.n) fail(f + ".k", "needs 2n entries");
      for (int k : mode.k)
        if (2 * std::abs(k) >= c.N) fail(f + ".k", "wavenumber not resolved by the grid");
      if (!std::isfinite(mode.amplitude) || !std::isfinite(mode.phase)) fail(f, "non-finite value");
    }
  }
  if (!(c.perturbation >= 0.0 && c.perturbation < 1.0)) fail("perturbation", "must lie in [0, 1)");
  if (!(c.t > 0.0) || !std::isfinite(c.t)) fail("t", "must be positive");
  try {
    c.schedule.validate();
  } catch (const std::exception& e) {
    fail("schedule", e.what());
  }
  const SolverOptions& s = c.solver;
  if (!(s.tol > 0.0)) fail("solver.tol", "must be positive");
  if (s.max_iter < 1) fail("solver.max_iter", "must be positive");
  if (!(s.slack > 0.0)) fail("solver.slack", "must be positive");
  if (!(s.armijo > 0.0 && s.armijo < 1.0)) fail("solver.armijo", "must lie in (0, 1)");
  if (!(s.min_step > 0.0 && s.min_step < 1.0)) fail("solver.min_step", "must lie in (0, 1)");
  if (s.krylov_restart < 1) fail("solver.krylov_restart", "must be positive");
  if (s.krylov_max_iter < 1) fail("solver.krylov_max_iter", "must be positive");
  for (const auto* p : {&c.outputs.chi, &c.outputs.u, &c.outputs.trace, &c.outputs.report})
    if (p->empty()) fail("outputs", "paths must be non-empty");
}

json to_json(const RunConfig& c) {
  json chi = json::object();
  if (!c.chi.example.empty()) {
    chi["example"] = c.chi.example;
  } else {
    chi["constant"] = matrix_json(c.chi.constant);
    json modes = json::array();
    for (const TrigMode& m : c.chi.modes) modes.push_back({{"k", m.k}, {"amplitude", m.amplitude}, {"phase", m.phase}});
    chi["modes"] = modes;
  }
  return {
      {"n", c.n},
      {"N", c.N},
      {"chi", chi},
      {"schedule", {{"t0", c.schedule.t0}, {"ratio", c.schedule.ratio}, {"t_min", c.schedule.t_min}}},
      {"solver",
       {{"tol", c.solver.tol},
        {"max_iter", c.solver.max_iter},
        {"slack", c.solver.slack},
        {"armijo", c.solver.armijo},
        {"min_step", c.solver.min_step},
        {"krylov_restart", c.solver.krylov_restart},
        {"krylov_max_iter", c.solver.krylov_max_iter}}},
      {"seed", c.seed},
      {"perturbation", c.perturbation},
      {"t", c.t},
      {"outputs", {{"chi", c.outputs.chi}, {"u", c.outputs.u}, {"trace", c.outputs.trace}, {"report", c.outputs.report}}},
  };
}

RunConfig config_from_json(const json& j) {
  only_keys(j, "", {"n", "N", "chi", "schedule", "solver", "seed", "perturbation", "t", "outputs"});
  RunConfig c;
  read(j, "", "n", c.n);
  c = default_config(std::clamp(c.n, 1, SmallMatrix::kMaxDim));
  read(j, "", "n", c.n);
  read(j, "", "N", c.N);
  read(j, "", "seed", c.seed);
  read(j, "", "perturbation", c.perturbation);
  read(j, "", "t", c.t);
  if (j.contains("chi")) {
    const json& chi = j["chi"];
    only_keys(chi, "chi", {"example", "constant", "modes"});
    read(chi, "chi", "example", c.chi.example);
    if (!c.chi.example.empty()) c.chi.constant = SmallMatrix();
    if (chi.contains("constant")) c.chi.constant = matrix_from(chi["constant"], "chi.constant");
    if (chi.contains("modes")) {
      const json& modes = chi["modes"];
      if (!modes.is_array()) fail("chi.modes", "expected an array");
      for (std::size_t m = 0; m < modes.size(); ++m) {
        const std::string f = "chi.modes[" + std::to_string(m) + "]";
        only_keys(modes[m], f, {"k", "amplitude", "phase"});
        TrigMode mode;
        if (!modes[m].contains("k") || !modes[m]["k"].is_array()) fail(f + ".k", "expected an integer array");
        for (const json& k : modes[m]["k"]) {
          if (!k.is_number_integer()) fail(f + ".k", "expected an integer array");
          mode.k.push_back(k.get<int>());
        }
        read(modes[m], f, "amplitude", mode.amplitude);
        read(modes[m], f, "phase", mode.phase);
        c.chi.modes.push_back(mode);
      }
    }
  }
  if (j.contains("schedule")) {
    const json& s = j["schedule"];
    only_keys(s, "schedule", {"t0", "ratio", "t_min"});
    read(s, "schedule", "t0", c.schedule.t0);
    read(s, "schedule", "ratio", c.schedule.ratio);
    read(s, "schedule", "t_min", c.schedule.t_min);
  }
  if (j.contains("solver")) {
    const json& s = j["solver"];
    only_keys(s, "solver", {"tol", "max_iter", "slack", "armijo", "min_step", "krylov_restart", "krylov_max_iter"});
    read(s, "solver", "tol", c.solver.tol);
    read(s, "solver", "max_iter", c.solver.max_iter);
    read(s, "solver", "slack", c.solver.slack);
    read(s, "solver", "armijo", c.solver.armijo);
    read(s, "solver", "min_step", c.solver.min_step);
    read(s, "solver", "krylov_restart", c.solver.krylov_restart);
    read(s, "solver", "krylov_max_iter", c.solver.krylov_max_iter);
  }
  if (j.contains("outputs")) {
    const json& o = j["outputs"];
    only_keys(o, "outputs", {"chi", "u", "trace", "report"});
    read(o, "outputs", "chi", c.outputs.chi);
    read(o, "outputs", "u", c.outputs.u);
    read(o, "outputs", "trace", c.outputs.trace);
    read(o, "outputs", "report", c.outputs.report);
  }
  validate(c);
  return c;
}

RunConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw PreconditionError(std::string("config: ") + e.what());
  }
  return config_from_json(j);
}

std::string serialize_config(const RunConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

HermitianField build_chi(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.chi.example == "3d") return build_3d_example(cfg.N, cfg.seed, cfg.perturbation).chi;
  if (cfg.chi.example == "4d") return build_4d_example(cfg.N, cfg.seed, cfg.perturbation).chi;
  const TorusGrid g = make_grid(cfg.n, cfg.N);
  return build_chi(g, cfg.chi.constant, trig_field(g, cfg.chi.modes));
}

}  // namespace lyz
