#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lyz/dhym_solver.hpp"

namespace lyz {

struct Schedule {
  double t0 = 0.2;
  double ratio = 0.5;
  double t_min = 1e-3;

  // t0 ratio^k while above t_min, then t_min itself; [t0] when t_min >= t0.
  std::vector<double> ladder() const;
  void validate() const;
};

struct TraceRow {
  double t = 0.0;
  double hat_theta = 0.0;
  double target_theta = 0.0;
  double c_solved = 0.0;
  int newton_iters = 0;
  double res_sup = 0.0;
  double sup_u = 0.0;
  double sup_grad = 0.0;
  double sup_hess = 0.0;
  double hmw_ratio = 0.0;
  double wall_time_s = 0.0;
  bool converged = false;
  bool inserted = false;  // geometric midpoint added after a stall
  double differentiate1 = 0.0;  // normalized, converged rows only
};

struct ContinuityTrace {
  std::vector<TraceRow> rows;
  bool completed = false;  // every scheduled t reached with a converged solve
  std::optional<SolverState> final_state;
};

struct PathOptions {
  SolverOptions solver;
  bool differentiate1 = true;
};

// Refuses to start (PreconditionError) unless u = 0 is a subsolution at t0 and
// hat_theta(0) = pi to 1e-6. A first solve that fails throws SolverError.
ContinuityTrace run_path(const HermitianField& chi, const Schedule& schedule, const PathOptions& opts = {});

inline constexpr const char* kTraceHeader =
    "t,hat_theta,target_theta,c_solved,newton_iters,res_sup,sup_u,sup_grad,sup_hess,hmw_ratio,wall_time_s";

std::string trace_csv(const ContinuityTrace& trace);

struct CriticalResidual {
  double theta_form = 0.0;  // sup |theta(lambda(chi_u)) - (n-2)pi/2|
  double sigma_form = 0.0;  // sup |Im prod(lambda_j + i)|
};

CriticalResidual critical_residual(const HermitianField& chi, const ScalarField& u);

struct HmwCheck {
  double max_ratio = 0.0;
  double bound = 0.0;
  bool pass = false;
};

// Default bound: 10x the first-row ratio, at least 1.
HmwCheck hmw_trace_check(const ContinuityTrace& trace, std::optional<double> bound = std::nullopt);

}  // namespace lyz
