#pragma once

#include <complex>
#include <span>
#include <vector>

#include "lyz/torus_field.hpp"

namespace lyz {

struct PhaseSample {
  double t = 0.0;
  cplx Z;
  double hat_theta = 0.0;     // principal argument of Z, in (-pi, pi]
  double target_theta = 0.0;  // n pi/2 - hat_theta
};

struct BracketFit {
  bool pass = false;
  bool c_defined = false;  // false for an empty sample list
  double C_fit = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double t0 = 0.0;  // largest t below which every sample is bracketed for some grid C
};

inline constexpr double kVanishingChargeRel = 1e-12;

// Z(t) = int det(chi + (t + i) I) dV.
cplx central_charge(const HermitianField& chi, double t);

// Throws SolverError when |Z| <= 1e-12 (2pi)^{2n}.
PhaseSample hat_theta(const HermitianField& chi, double t);

double target_phase(int n, double hat_theta);

// Distance from a to b on the circle.
double angular_distance(double a, double b);

// Searches C over 200 log-spaced values in [1e-4, 1e4] for the strict
// bracket pi - 2Ct < hat_theta(t) < pi - Ct. Samples must have t > 0.
BracketFit fit_bracket(std::span<const PhaseSample> samples);

// Precondition: hat_theta(0) = pi to 1e-8 and t_samples positive, ascending.
BracketFit bracket_check(const HermitianField& chi, std::span<const double> t_samples);

struct SubsolutionCheck {
  bool pass = false;
  double worst_margin = 0.0;  // min over grid of A(lambda) - (theta_t - pi/2)
};

// lambda = eigenvalues of chi + i ddbar u_bar + t I.
SubsolutionCheck subsolution_verify(const HermitianField& chi, const ScalarField& u_bar, double t, double theta_t);

// int (chi + i omega)^{n-1} ^ omega against omega^n: (1/n) sum_j prod_{i != j} (lambda_i + i) integrated.
cplx intsub(const HermitianField& chi);

}  // namespace lyz
