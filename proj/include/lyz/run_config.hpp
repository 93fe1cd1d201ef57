#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "lyz/continuity_driver.hpp"
#include "lyz/hermitian.hpp"
#include "lyz/torus_field.hpp"

namespace lyz {

// chi = C + i ddbar rho with rho a trig polynomial, or one of the built
// examples ("3d", "4d") drawn from the run seed.
struct ChiSpec {
  std::string example;
  SmallMatrix constant;
  std::vector<TrigMode> modes;
};

struct OutputPaths {
  std::string chi = "chi.lyzf";
  std::string u = "u.lyzf";
  std::string trace = "trace.csv";
  std::string report = "report.json";
};

struct RunConfig {
  int n = 3;
  int N = 8;
  ChiSpec chi;
  Schedule schedule;
  SolverOptions solver;
  std::uint64_t seed = 1;
  double perturbation = 0.05;
  double t = 0.2;  // single solve
  OutputPaths outputs;

  friend bool operator==(const RunConfig& a, const RunConfig& b);
};

RunConfig default_config(int n = 3);
// Matches the suite builder for dimension 3 or 4.
RunConfig suite_config(int dimension);

// Field-level messages, e.g. "config.schedule.ratio: must lie in (0, 1)".
void validate(const RunConfig& cfg);

nlohmann::json to_json(const RunConfig& cfg);
// Missing keys keep their defaults; unknown keys and bad types throw PreconditionError.
RunConfig config_from_json(const nlohmann::json& j);

RunConfig parse_config(std::string_view text);
std::string serialize_config(const RunConfig& cfg);

HermitianField build_chi(const RunConfig& cfg);

}  // namespace lyz
