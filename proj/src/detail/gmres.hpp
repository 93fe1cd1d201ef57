#pragma once

#include <functional>
#include <vector>

namespace lyz::detail {

using Vec = std::vector<double>;
using LinearMap = std::function<void(const Vec&, Vec&)>;

struct KrylovResult {
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
};

// Restarted GMRES with right preconditioning; x holds the initial guess.
// All inner products use the reproducible reduction.
KrylovResult gmres(const LinearMap& a, const LinearMap& m_inv, const Vec& b, Vec& x, double rtol, int restart,
                   int max_iter);

}  // namespace lyz::detail
