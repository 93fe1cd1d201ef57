#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lyz/argument_calculus.hpp"
#include "lyz/continuity_driver.hpp"

namespace lyz {

struct NamedCheck {
  std::string name;
  double value = 0.0;
  bool pass = false;
};

struct SuiteOptions {
  int dimension = 3;
  int N = 8;
  std::uint64_t seed = 1;
  double perturbation = 0.05;
  Schedule schedule;
  SolverOptions solver;
  double sigma_tol = 5e-3;  // sup of the sigma-form residual at the final state
  double gauge_tol = 1e-3;  // |c_solved - target_theta| per row
  double d1_tol = 1e-6;     // normalized differentiate1 per converged row
};

SuiteOptions default_suite_options(int dimension);

struct BuiltExample {
  HermitianField chi;
  double scale = 1.0;  // s applied to the unscaled form
  std::vector<NamedCheck> conditions;
};

// chi = s (U diag(1,1,0) U^* + i ddbar rho) with s fixing 3 int chi^2 ^ omega = int omega^3.
// Throws PreconditionError naming the first failed condition.
BuiltExample build_3d_example(int N, std::uint64_t seed, double perturbation);

// chi = s (U (I + p diag(d)) U^* + i ddbar rho) with s fixing int chi^3 ^ omega = int chi ^ omega^3.
BuiltExample build_4d_example(int N, std::uint64_t seed, double perturbation);

// Scales an arbitrary 4D form to the cubic-linear equality. Throws on sign mismatch.
BuiltExample scale_4d(const HermitianField& chi);

std::vector<NamedCheck> conditions_3d(const HermitianField& chi);
std::vector<NamedCheck> conditions_4d(const HermitianField& chi);

// Wedge integral int chi^k ^ omega^{n-k} in units where int omega^n is the volume.
double wedge_integral(const HermitianField& chi, int k);

struct SuiteReport {
  int dimension = 0;
  int N = 0;
  std::uint64_t seed = 0;
  double perturbation = 0.0;
  double scale = 1.0;
  std::vector<NamedCheck> preconditions;
  bool solved = false;
  CriticalResidual critical;
  std::vector<NamedCheck> necessity;
  std::vector<NamedCheck> path_checks;
  BracketFit bracket;
  ContinuityTrace trace;
  bool pass = false;
};

// Runs the path when every precondition holds; otherwise returns the failed report unsolved.
SuiteReport verify_3d(const HermitianField& chi, const SuiteOptions& opts);
SuiteReport verify_4d(const HermitianField& chi, const SuiteOptions& opts);

SuiteReport run_suite(const SuiteOptions& opts);

struct NecessityPoint {
  double sigma2 = 0.0;
  double sigma2_omit_min = 0.0;
  double critical_re = 0.0;  // sigma4 - sigma2 + 1
};
NecessityPoint necessity_4d(std::span<const double> lambda);

}  // namespace lyz
