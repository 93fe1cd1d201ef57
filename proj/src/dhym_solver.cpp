#include "lyz/dhym_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "detail/fft.hpp"
#include "detail/gmres.hpp"
#include "lyz/cone_algebra.hpp"
#include "lyz/errors.hpp"
#include "lyz/parallel.hpp"

namespace lyz {

using std::numbers::pi;

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::Stalled: return "stalled";
    case SolveStatus::MaxIterations: return "max_iterations";
  }
  return "unknown";
}

namespace {

// Off-diagonal storage slots count twice in tr(F H).
double slot_weight(int n, int c) { return c < n ? 1.0 : 2.0; }

void recentre(ScalarField& u) {
  const double m = mean(u);
  for (double& v : u.values) v -= m;
}

double min_of(const ScalarField& f) { return *std::min_element(f.values.begin(), f.values.end()); }

struct Evaluation {
  HermitianField w;
  ScalarField theta;
};

Evaluation evaluate(const HermitianField& chi, const ScalarField& u, double t) {
  Evaluation e{assemble_w(chi, u, t), {}};
  e.theta = phase_field(e.w);
  return e;
}

ScalarField residual_from(const ScalarField& theta, const ScalarField* target, double c) {
  ScalarField r = theta;
  for (std::size_t p = 0; p < r.values.size(); ++p) r.values[p] -= c + (target ? target->values[p] : 0.0);
  return r;
}

// Exact inverse of the bordered constant-coefficient operator built from mean(F).
class Preconditioner {
 public:
  explicit Preconditioner(const HermitianField& F) : grid_(F.grid()) {
    const int n = F.n();
    const auto st = static_cast<int>(F.stride());
    std::vector<double> fbar(st);
    for (int c = 0; c < st; ++c) fbar[c] = mean(F.component(c));
    SmallMatrix fm(n);
    for (int i = 0; i < n; ++i) fm(i, i) = fbar[i];
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const int c = HermitianField::offdiag_index(n, i, j);
        fm.set_hermitian(i, j, cplx(fbar[c], fbar[c + 1]));
      }
    const double fmin = std::max(hermitian_eigenvalues(fm).back(), 1e-300);
    const TorusGrid& g = grid_;
    inv_symbol_.assign(g.spectral_points(), 0.0);
    for (std::size_t s = 1; s < g.spectral_points(); ++s) {
      double sym = 0.0;
      double k2 = 0.0;
      for (int a = 0; a < n; ++a) {
        const double kx = g.k(s, 2 * a), ky = g.k(s, 2 * a + 1);
        sym += fbar[a] * (-0.25 * (kx * kx + ky * ky));
        k2 += kx * kx + ky * ky;
      }
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
          const double xa = g.k_odd(s, 2 * a), ya = g.k_odd(s, 2 * a + 1);
          const double xb = g.k_odd(s, 2 * b), yb = g.k_odd(s, 2 * b + 1);
          const int c = HermitianField::offdiag_index(n, a, b);
          sym += 2.0 * (fbar[c] * (-0.25 * (xa * xb + ya * yb)) + fbar[c + 1] * (-0.25 * (xa * yb - ya * xb)));
        }
      if (!(sym < -1e-12 * (1.0 + k2))) sym = -0.25 * fmin * k2;
      inv_symbol_[s] = 1.0 / sym;
    }
  }

  void apply(const detail::Vec& in, detail::Vec& out) const {
    const std::size_t P = grid_.points();
    const std::span<const double> r(in.data(), P);
    auto spec = detail::forward(grid_, r);
    spec[0] = 0.0;
    for (std::size_t s = 1; s < spec.size(); ++s) spec[s] *= inv_symbol_[s];
    out.resize(P + 1);
    detail::backward(grid_, spec, std::span<double>(out.data(), P));
    const double rmean = reproducible_sum(r) / static_cast<double>(P);
    for (std::size_t p = 0; p < P; ++p) out[p] += in[P];
    out[P] = -rmean;
  }

 private:
  TorusGrid grid_;
  std::vector<double> inv_symbol_;
};

SolverState solve_impl(const HermitianField& chi, double t, const ScalarField& u0, const ScalarField* target,
                       const SolverOptions& opts) {
  const TorusGrid& g = chi.grid();
  if (!(u0.grid == g)) throw std::invalid_argument("newton_solve: grid mismatch");
  if (target && !(target->grid == g)) throw std::invalid_argument("newton_solve: target grid mismatch");
  const int n = g.n();
  const double floor_angle = (n - 2) * pi / 2 + opts.slack;
  const std::size_t P = g.points();

  SolverState st;
  st.t = t;
  st.u = u0;
  recentre(st.u);
  if (target) st.target = *target;
  Evaluation ev = evaluate(chi, st.u, t);
  if (!(min_of(ev.theta) > floor_angle))
    throw PreconditionError("newton_solve: initial guess is not on the supercritical branch");
  {
    ScalarField d = residual_from(ev.theta, target, 0.0);
    st.c = mean(d);
  }
  st.residual = residual_from(ev.theta, target, st.c);
  st.w = std::move(ev.w);
  double rsup = sup_abs(st.residual);
  st.history.push_back(rsup);

  st.status = SolveStatus::MaxIterations;
  while (true) {
    if (rsup <= opts.tol) {
      st.status = SolveStatus::Converged;
      break;
    }
    if (st.iterations >= opts.max_iter) break;

    const HermitianField F = linear_coefficients(st.w);
    const Preconditioner pre(F);
    const detail::LinearMap a = [&](const detail::Vec& x, detail::Vec& y) {
      ScalarField v(g);
      std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(P), v.values.begin());
      const ScalarField lv = apply_linearized(F, v);
      y.resize(P + 1);
      for (std::size_t p = 0; p < P; ++p) y[p] = lv.values[p] - x[P];
      y[P] = mean(v);
    };
    const detail::LinearMap m_inv = [&](const detail::Vec& x, detail::Vec& y) { pre.apply(x, y); };
    detail::Vec rhs(P + 1, 0.0), sol(P + 1, 0.0);
    for (std::size_t p = 0; p < P; ++p) rhs[p] = -st.residual.values[p];
    const double forcing = std::min(1e-4, 0.1 * rsup);
    const auto kr = detail::gmres(a, m_inv, rhs, sol, forcing, opts.krylov_restart, opts.krylov_max_iter);
    st.krylov_iterations += kr.iterations;

    ScalarField du(g);
    std::copy(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(P), du.values.begin());
    const double dc = sol[P];

    double step = 1.0;
    bool accepted = false;
    while (step >= opts.min_step) {
      ScalarField trial = st.u;
      for (std::size_t p = 0; p < P; ++p) trial.values[p] += step * du.values[p];
      recentre(trial);
      Evaluation te = evaluate(chi, trial, t);
      if (min_of(te.theta) > floor_angle) {
        const double ct = st.c + step * dc;
        ScalarField tr = residual_from(te.theta, target, ct);
        const double tsup = sup_abs(tr);
        if (tsup <= (1.0 - opts.armijo * step) * rsup) {
          st.u = std::move(trial);
          st.c = ct;
          st.w = std::move(te.w);
          st.residual = std::move(tr);
          rsup = tsup;
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) {
      st.status = SolveStatus::Stalled;
      break;
    }
    ++st.iterations;
    st.history.push_back(rsup);
  }
  st.converged = st.status == SolveStatus::Converged;
  return st;
}

}  // namespace

HermitianField assemble_w(const HermitianField& chi, const ScalarField& u, double t) {
  HermitianField w = axpy(chi, 1.0, complex_hessian(u));
  add_identity(w, t);
  return w;
}

ScalarField phase_field(const HermitianField& w) {
  const EigenField e = pointwise_eigs(w);
  ScalarField th(w.grid());
  for (std::size_t p = 0; p < w.points(); ++p) th.values[p] = theta_angle(e.at(p));
  return th;
}

ScalarField residual(const HermitianField& chi, const ScalarField& u, double c, double t) {
  return residual_from(phase_field(assemble_w(chi, u, t)), nullptr, c);
}

HermitianField linear_coefficients(const HermitianField& w) {
  HermitianField F(w.grid());
  parallel_for(w.points(), [&](std::size_t b, std::size_t e) {
    for (std::size_t p = b; p < e; ++p) {
      const SmallMatrix m = w.at(p);
      SmallMatrix a = m * m;
      for (int i = 0; i < m.dim(); ++i) a(i, i) += 1.0;
      F.set(p, hpd_inverse(a));
    }
  });
  return F;
}

ScalarField apply_linearized(const HermitianField& F, const ScalarField& v) {
  if (!(F.grid() == v.grid)) throw std::invalid_argument("apply_linearized: grid mismatch");
  const HermitianField h = complex_hessian(v);
  const int n = F.n();
  const std::size_t st = F.stride();
  ScalarField out(v.grid);
  const auto fr = F.raw();
  const auto hr = h.raw();
  parallel_for(v.values.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t p = b; p < e; ++p) {
      double s = 0.0;
      for (std::size_t c = 0; c < st; ++c) s += slot_weight(n, static_cast<int>(c)) * fr[p * st + c] * hr[p * st + c];
      out.values[p] = s;
    }
  });
  return out;
}

SolverState newton_solve(const HermitianField& chi, double t, const ScalarField& u0, const SolverOptions& opts) {
  return solve_impl(chi, t, u0, nullptr, opts);
}

SolverState newton_solve_variable(const HermitianField& chi, double t, const ScalarField& u0, const ScalarField& target,
                                  const SolverOptions& opts) {
  return solve_impl(chi, t, u0, &target, opts);
}

Differentiate1 differentiate1_check(const SolverState& state) {
  if (!state.converged) throw std::domain_error("differentiate1_check: state is not converged");
  const HermitianField& w = state.w;
  const TorusGrid& g = w.grid();
  const int n = g.n();
  const auto st = static_cast<int>(w.stride());
  const HermitianField F = linear_coefficients(w);
  std::vector<std::vector<cplx>> spectra;
  spectra.reserve(st);
  for (int c = 0; c < st; ++c) spectra.push_back(detail::forward(g, w.component(c).values));

  Differentiate1 d;
  ScalarField acc(g), dwc(g);
  for (int axis = 0; axis < g.axes(); ++axis) {
    std::fill(acc.values.begin(), acc.values.end(), 0.0);
    for (int c = 0; c < st; ++c) {
      std::vector<cplx> s = spectra[c];
      for (std::size_t i = 0; i < s.size(); ++i) s[i] *= cplx(0.0, g.k_odd(i, axis));
      detail::backward(g, s, dwc.values);
      const double wgt = slot_weight(n, c);
      const auto fr = F.raw();
      for (std::size_t p = 0; p < g.points(); ++p) {
        acc.values[p] += wgt * fr[p * st + c] * dwc.values[p];
        d.sup_dw = std::max(d.sup_dw, std::abs(dwc.values[p]));
      }
    }
    d.sup_raw = std::max(d.sup_raw, sup_abs(acc));
  }
  d.normalized = d.sup_raw / (1.0 + d.sup_dw);
  return d;
}

Monitors monitors(const ScalarField& u) {
  Monitors m;
  const int n = u.grid.n();
  m.sup_u = sup_abs(u);
  const GradientField gr = complex_gradient(u);
  for (std::size_t p = 0; p < u.grid.points(); ++p) {
    double s = 0.0;
    for (int a = 0; a < n; ++a) s += std::norm(gr.values[p * n + a]);
    m.sup_grad = std::max(m.sup_grad, std::sqrt(s));
  }
  const EigenField e = pointwise_eigs(complex_hessian(u));
  for (double v : e.values) m.sup_hess = std::max(m.sup_hess, std::abs(v));
  m.hmw_ratio = m.sup_hess / (1.0 + m.sup_grad * m.sup_grad);
  return m;
}

}  // namespace lyz
