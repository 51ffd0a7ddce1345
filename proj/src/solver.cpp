#include "taxis/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "taxis/error.hpp"

namespace taxis {

void validate(const SolverConfig& cfg) {
  std::vector<std::string> problems;
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) problems.push_back("solver.dt must be positive");
  if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end)) problems.push_back("solver.t_end must be nonnegative");
  if (!(cfg.cg_tol > 0.0 && cfg.cg_tol <= 1e-4)) problems.push_back("solver.cg_tol must lie in (0, 1e-4]");
  if (cfg.cg_max_iter <= 0) problems.push_back("solver.cg_max_iter must be positive");
  if (!(cfg.cfl_safety > 0.0 && cfg.cfl_safety <= 1.0)) problems.push_back("solver.cfl_safety must lie in (0, 1]");
  if (!problems.empty()) {
    std::string msg = "invalid solver configuration";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ValidationError(msg, problems);
  }
}

CgResult conjugate_gradient(const DiffusionOperator& A, std::span<const double> b, std::span<double> x, double tol,
                            int max_iter, Preconditioner preconditioner) {
  const GridSpec& g = A.grid;
  const std::size_t n = b.size();
  CgResult result;

  const double b_norm = std::sqrt(dot(g, b, b));
  if (b_norm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    result.converged = true;
    return result;
  }

  std::vector<double> r(n), z(n), p(n), ap(n), inv_diag;
  if (preconditioner == Preconditioner::jacobi) {
    inv_diag.resize(n);
    A.diagonal(inv_diag);
    for (double& d : inv_diag) d = 1.0 / d;
  }
  const auto precondition = [&](const std::vector<double>& in, std::vector<double>& out) {
    if (inv_diag.empty()) {
      std::copy(in.begin(), in.end(), out.begin());
      return;
    }
#pragma omp parallel for schedule(static)
    for (std::size_t k = 0; k < n; ++k) out[k] = inv_diag[k] * in[k];
  };

  A.apply(x, r);
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - r[k];

  double r_norm = std::sqrt(dot(g, r, r));
  precondition(r, z);
  std::copy(z.begin(), z.end(), p.begin());
  double rz = dot(g, r, z);

  int it = 0;
  while (r_norm > tol * b_norm && it < max_iter) {
    A.apply(p, ap);
    const double pap = dot(g, p, ap);
    if (!(pap > 0.0)) break;
    const double alpha = rz / pap;
#pragma omp parallel for schedule(static)
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * ap[k];
    }
    ++it;
    r_norm = std::sqrt(dot(g, r, r));
    precondition(r, z);
    const double rz_next = dot(g, r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
#pragma omp parallel for schedule(static)
    for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
  }

  // True residual of the returned iterate.
  A.apply(x, ap);
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < n; ++k) ap[k] = b[k] - ap[k];
  result.iterations = it;
  result.residual = std::sqrt(dot(g, ap, ap)) / b_norm;
  result.converged = r_norm <= tol * b_norm;
  return result;
}

Field implicit_solve(const DiffusionOperator& A, const Field& rhs, const SolverConfig& cfg, CgResult* result) {
  Field x = rhs;
  if (A.mass != nullptr) {
    const Field& m = *A.mass;
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = rhs[k] / m[k];
  }
  CgResult res;
  if (A.diffusivity != 0.0 && A.dt != 0.0) {
    res = conjugate_gradient(A, rhs.values(), x.values(), cfg.cg_tol, cfg.cg_max_iter, cfg.preconditioner);
    if (!res.converged) {
      std::ostringstream msg;
      msg << "conjugate gradient did not converge in " << res.iterations << " iterations (relative residual "
          << res.residual << ", tolerance " << cfg.cg_tol << ")";
      throw NumericalError(msg.str());
    }
  } else {
    res.converged = true;
  }
  if (!x.all_finite()) {
    throw NumericalError("implicit solve produced non-finite values");
  }
  if (result != nullptr) *result = res;
  return x;
}

Field implicit_diffusion_solve(const Field& rhs, double diffusivity, double dt, const SolverConfig& cfg,
                               CgResult* result) {
  if (diffusivity < 0.0) throw ValidationError("implicit_diffusion_solve: diffusivity must be nonnegative");
  if (!rhs.all_finite()) throw NumericalError("implicit_diffusion_solve: right-hand side is not finite");
  const DiffusionOperator A{rhs.grid(), diffusivity, dt, nullptr, nullptr};
  return implicit_solve(A, rhs, cfg, result);
}

int StepReport::max_iterations() const noexcept {
  return *std::max_element(cg_iterations.begin(), cg_iterations.end());
}

double StepReport::max_residual() const noexcept {
  return *std::max_element(cg_residuals.begin(), cg_residuals.end());
}

}  // namespace taxis
