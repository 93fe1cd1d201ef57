#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lyz {

struct PropertyTally {
  std::string name;
  int n = 0;
  double tau = 0.0;  // 0 when the property has no phase parameter
  long long samples = 0;
  long long violations = 0;
  double worst = 0.0;  // smallest normalized margin seen; >= -tol when clean
};

struct ConeSuiteReport {
  std::uint64_t seed = 0;
  long long samples_per_config = 0;
  double tol = 1e-10;
  std::vector<PropertyTally> properties;
  std::vector<double> delta0;  // per n, from the dichotomy search
  long long violations = 0;
  bool pass = false;
};

struct ConeSuiteOptions {
  std::vector<int> dims{2, 3, 4, 5};
  long long samples = 100000;
  long long dichotomy_samples = 10000;
  std::uint64_t seed = 1;
  double tol = 1e-10;
};

// Randomized property suite over eigenvalue tuples. Each configuration draws
// fixed-size blocks from independent streams, so the report does not depend on
// the worker count.
ConeSuiteReport run_cone_suite(const ConeSuiteOptions& opts);

}  // namespace lyz
