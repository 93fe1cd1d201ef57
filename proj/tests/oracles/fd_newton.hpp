#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

// Second-order finite-difference discretization of
//   theta(lambda(chi + t I + i ddbar u)) = c,  mean(u) = 0
// for complex dimension 2 on an N^4 periodic grid, solved by Newton with a
// sparse LU factorization of the bordered Jacobian. Shares no code with the
// spectral solver.
struct FdProblem {
  int N = 8;
  double t = 0.0;
  // chi at each grid point as a 2x2 complex matrix, row-major entries.
  std::vector<std::array<std::complex<double>, 4>> chi;
};

struct FdSolution {
  std::vector<double> u;
  double c = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

// FD complex Hessian at every point of a periodic scalar on the N^4 grid.
std::vector<std::array<std::complex<double>, 4>> fd_complex_hessian(int N, const std::vector<double>& f);

FdSolution fd_newton(const FdProblem& p, double tol = 1e-12, int max_iter = 30);

}  // namespace oracle
