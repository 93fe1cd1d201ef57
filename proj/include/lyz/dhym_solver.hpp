#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lyz/torus_field.hpp"

namespace lyz {

struct SolverOptions {
  double tol = 1e-9;        // sup-norm residual
  int max_iter = 50;
  double slack = 1e-3;      // branch safeguard, radians above (n-2)pi/2
  double armijo = 1e-4;
  double min_step = 1e-12;
  int krylov_restart = 30;
  int krylov_max_iter = 400;
};

enum class SolveStatus { Converged, Stalled, MaxIterations };
std::string to_string(SolveStatus s);

struct Monitors {
  double sup_u = 0.0;
  double sup_grad = 0.0;  // sup |du/dz| (Euclidean norm of the complex gradient)
  double sup_hess = 0.0;  // sup max |eigenvalue| of i ddbar u
  double hmw_ratio = 0.0;
};

struct SolverState {
  ScalarField u;  // mean zero
  double c = 0.0;
  double t = 0.0;
  HermitianField w;       // chi + t I + i ddbar u
  ScalarField residual;   // theta(lambda(w)) - target - c
  std::optional<ScalarField> target;  // variable-target mode only
  int iterations = 0;
  int krylov_iterations = 0;
  bool converged = false;
  SolveStatus status = SolveStatus::MaxIterations;
  std::vector<double> history;  // sup|residual| after each accepted iterate, starting with the initial one
};

HermitianField assemble_w(const HermitianField& chi, const ScalarField& u, double t);

// Pointwise theta(lambda(w)).
ScalarField phase_field(const HermitianField& w);

ScalarField residual(const HermitianField& chi, const ScalarField& u, double c, double t);

// F = (w^2 + I)^{-1} per point.
HermitianField linear_coefficients(const HermitianField& w);

// L(v) = tr(F i ddbar v).
ScalarField apply_linearized(const HermitianField& F, const ScalarField& v);

// Throws PreconditionError when u0 is not on the supercritical branch.
SolverState newton_solve(const HermitianField& chi, double t, const ScalarField& u0, const SolverOptions& opts = {});

// Solves theta(lambda(w)) = target + c for (u, c).
SolverState newton_solve_variable(const HermitianField& chi, double t, const ScalarField& u0, const ScalarField& target,
                                  const SolverOptions& opts = {});

struct Differentiate1 {
  double sup_raw = 0.0;  // sup_{x, p} |tr(F d_p w)|
  double sup_dw = 0.0;   // sup |d_p w| over entries
  double normalized = 0.0;  // sup_raw / (1 + sup_dw)
};

// Domain error unless state.converged.
Differentiate1 differentiate1_check(const SolverState& state);

Monitors monitors(const ScalarField& u);

}  // namespace lyz
