// lyzlab: command-line front end. Exit codes: 0 ok, 1 precondition or config,
// 2 solver failure, 3 I/O, 4 internal.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "lyz/cone_suite.hpp"
#include "lyz/continuity_driver.hpp"
#include "lyz/dhym_solver.hpp"
#include "lyz/errors.hpp"
#include "lyz/field_io.hpp"
#include "lyz/hessian_suite.hpp"
#include "lyz/parallel.hpp"
#include "lyz/reports.hpp"
#include "lyz/run_config.hpp"
#include "lyz/weak_solutions.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lyz;

namespace {

struct Flags {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> grid;
  std::optional<double> tmin;
  unsigned threads = 0;
  std::optional<int> n;
  std::optional<long long> samples;
  std::string file;
};

RunConfig load_config(const Flags& f, int default_dim) {
  RunConfig cfg = f.config.empty() ? suite_config(default_dim) : parse_config(read_file(f.config));
  if (f.seed) cfg.seed = *f.seed;
  if (f.grid) cfg.N = *f.grid;
  if (f.tmin) cfg.schedule.t_min = *f.tmin;
  validate(cfg);
  return cfg;
}

fs::path out_path(const Flags& f, const std::string& name) {
  std::error_code ec;
  fs::create_directories(f.out, ec);
  if (ec) throw IoError("cannot create output directory " + f.out + ": " + ec.message());
  return fs::path(f.out) / name;
}

void write_report(const Flags& f, const std::string& name, const json& body) {
  const fs::path p = out_path(f, name);
  atomic_write(p, dump_report(body));
  std::cout << render_report(body.contains("result") ? body["result"] : body) << "wrote " << p.string() << "\n";
}

SuiteOptions suite_options(const RunConfig& cfg) {
  SuiteOptions o = default_suite_options(cfg.n);
  o.N = cfg.N;
  o.seed = cfg.seed;
  o.perturbation = cfg.perturbation;
  o.schedule = cfg.schedule;
  o.solver = cfg.solver;
  return o;
}

int cmd_gen(const Flags& f) {
  const RunConfig cfg = load_config(f, 3);
  const HermitianField chi = build_chi(cfg);
  write_field(out_path(f, cfg.outputs.chi), chi);
  atomic_write(out_path(f, "config.json"), serialize_config(cfg));
  std::cout << "wrote " << (fs::path(f.out) / cfg.outputs.chi).string() << "\n";
  return 0;
}

HermitianField load_chi(const Flags& f, const RunConfig& cfg) {
  const HermitianField chi = read_hermitian_field(fs::path(f.out) / cfg.outputs.chi);
  if (chi.n() != cfg.n || chi.grid().N() != cfg.N) throw PreconditionError("chi file does not match config n and N");
  return chi;
}

int cmd_solve(const Flags& f) {
  const RunConfig cfg = load_config(f, 3);
  const HermitianField chi = load_chi(f, cfg);
  const SolverState s = newton_solve(chi, cfg.t, ScalarField(chi.grid()), cfg.solver);
  if (!s.converged) throw SolverError("solve did not converge: " + to_string(s.status));
  write_field(out_path(f, cfg.outputs.u), s.u);
  write_report(f, "solve_" + cfg.outputs.report, {{"command", "solve"}, {"config", to_json(cfg)}, {"result", solve_summary(s)}});
  return 0;
}

int cmd_path(const Flags& f) {
  const RunConfig cfg = load_config(f, 3);
  const HermitianField chi = load_chi(f, cfg);
  const ContinuityTrace trace = run_path(chi, cfg.schedule, {cfg.solver, true});
  atomic_write(out_path(f, cfg.outputs.trace), trace_csv(trace));
  if (trace.final_state) write_field(out_path(f, cfg.outputs.u), trace.final_state->u);
  const json summary = path_summary(chi, trace);
  write_report(f, "path_" + cfg.outputs.report, {{"command", "path"}, {"config", to_json(cfg)}, {"result", summary}});
  return trace.completed ? 0 : 2;
}

int cmd_suite(const Flags& f, int dim) {
  RunConfig cfg = load_config(f, dim);
  if (cfg.n != dim) throw PreconditionError("config.n: suite" + std::to_string(dim) + "d needs n = " + std::to_string(dim));
  const SuiteOptions o = suite_options(cfg);
  const SuiteReport r = cfg.chi.example.empty() ? (dim == 3 ? verify_3d(build_chi(cfg), o) : verify_4d(build_chi(cfg), o))
                                                : run_suite(o);
  if (r.solved) atomic_write(out_path(f, "suite" + std::to_string(dim) + "d_" + cfg.outputs.trace), trace_csv(r.trace));
  const std::string cmd = "suite" + std::to_string(dim) + "d";
  write_report(f, cmd + "_" + cfg.outputs.report, {{"command", cmd}, {"config", to_json(cfg)}, {"result", to_json(r)}});
  return r.pass ? 0 : (r.solved ? 2 : 1);
}

int cmd_conecheck(const Flags& f) {
  ConeSuiteOptions o;
  if (f.seed) o.seed = *f.seed;
  if (f.samples) o.samples = *f.samples;
  if (f.n) o.dims = {*f.n};
  const ConeSuiteReport r = run_cone_suite(o);
  write_report(f, "conecheck_report.json",
               {{"command", "conecheck"},
                {"config", {{"seed", o.seed}, {"samples", o.samples}, {"dims", o.dims}, {"tol", o.tol}}},
                {"result", to_json(r)}});
  return r.pass ? 0 : 1;
}

int cmd_weaklab(const Flags& f) {
  const int n = f.n.value_or(3);
  const long long samples = f.samples.value_or(10000);
  const std::uint64_t seed = f.seed.value_or(1);
  if (samples < 1 || samples > 100000000) throw PreconditionError("--samples out of range");
  const WeakLabReport r = run_weaklab(n, static_cast<int>(samples), seed);
  write_report(f, "weaklab_n" + std::to_string(n) + "_report.json",
               {{"command", "weaklab"}, {"config", {{"n", n}, {"samples", samples}, {"seed", seed}}}, {"result", to_json(r)}});
  return r.pass ? 0 : 1;
}

int cmd_report(const Flags& f) {
  json j;
  try {
    j = json::parse(read_file(f.file));
  } catch (const json::parse_error& e) {
    throw PreconditionError(std::string("report: ") + e.what());
  }
  if (j.contains("command")) std::cout << "command " << j["command"].get<std::string>() << "\n";
  std::cout << render_report(j.contains("result") ? j["result"] : j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lyzlab: dHYM continuity experiments on flat tori"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", f.config, "JSON run configuration");
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--seed", f.seed, "seed override");
    sub->add_option("--grid", f.grid, "grid points per axis override");
    sub->add_option("--tmin", f.tmin, "final t override");
    sub->add_option("--threads", f.threads, "worker threads (0 = hardware)");
    return sub;
  };
  auto* gen = common(app.add_subcommand("gen", "build chi and write its field file"));
  auto* solve = common(app.add_subcommand("solve", "single Newton solve at config t"));
  auto* path = common(app.add_subcommand("path", "continuity path from t0 to t_min"));
  auto* s3 = common(app.add_subcommand("suite3d", "3D sigma_2 = 1 suite"));
  auto* s4 = common(app.add_subcommand("suite4d", "4D sigma_3 = sigma_1 suite"));
  auto* cone = common(app.add_subcommand("conecheck", "randomized cone property suite"));
  cone->add_option("--n", f.n, "single dimension")->check(CLI::Range(2, 7));
  cone->add_option("--samples", f.samples, "samples per configuration");
  auto* weak = common(app.add_subcommand("weaklab", "mollification and comparison checks"));
  weak->add_option("--n", f.n, "complex dimension")->check(CLI::Range(2, 4));
  weak->add_option("--samples", f.samples, "quadratic samples");
  auto* report = app.add_subcommand("report", "print a report file");
  report->add_option("file", f.file, "report JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (f.threads > 0) set_thread_count(f.threads);
    if (*gen) return cmd_gen(f);
    if (*solve) return cmd_solve(f);
    if (*path) return cmd_path(f);
    if (*s3) return cmd_suite(f, 3);
    if (*s4) return cmd_suite(f, 4);
    if (*cone) return cmd_conecheck(f);
    if (*weak) return cmd_weaklab(f);
    if (*report) return cmd_report(f);
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 4;
}
