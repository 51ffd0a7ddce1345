#pragma once

#include <array>
#include <span>

#include "taxis/grid.hpp"
#include "taxis/operators.hpp"

namespace taxis {

enum class Preconditioner { none, jacobi };

/// Treatment of the VEGF loss term (-mu_vz v z, or -mu_z z in the direct-taxis model).
enum class UptakeScheme { explicit_euler, semi_implicit };

struct SolverConfig {
  double dt = 0.01;
  double t_end = 50.0;
  double cg_tol = 1e-10;
  int cg_max_iter = 1000;
  double cfl_safety = 0.9;
  Preconditioner preconditioner = Preconditioner::none;
  UptakeScheme uptake = UptakeScheme::explicit_euler;
};

/// Throws ValidationError unless dt > 0, t_end >= 0, 0 < cg_tol <= 1e-4, cg_max_iter > 0 and
/// 0 < cfl_safety <= 1.
void validate(const SolverConfig& cfg);

struct CgResult {
  int iterations = 0;
  double residual = 0.0;  // ||b - A x|| / ||b||, recomputed from the final iterate
  bool converged = false;
};

/// Conjugate gradients on the SPD operator A, starting from the contents of x.
/// Stops when the recursive relative residual drops to tol.
CgResult conjugate_gradient(const DiffusionOperator& A, std::span<const double> b, std::span<double> x, double tol,
                            int max_iter, Preconditioner preconditioner = Preconditioner::none);

/// Solves (I - dt D Laplacian) f = rhs. Throws NumericalError when CG does not reach cfg.cg_tol.
Field implicit_diffusion_solve(const Field& rhs, double diffusivity, double dt, const SolverConfig& cfg,
                               CgResult* result = nullptr);

/// Solves A f = rhs for a general diffusion operator; the initial guess is rhs / mass.
Field implicit_solve(const DiffusionOperator& A, const Field& rhs, const SolverConfig& cfg,
                     CgResult* result = nullptr);

/// Per-step record. Index 0, 1, 2 of the solver arrays refer to the u (or a), v and z solves.
struct StepReport {
  double dt = 0.0;
  std::array<int, 3> cg_iterations{};
  std::array<double, 3> cg_residuals{};
  double cfl_number = 0.0;  // dt times the largest per-cell explicit loss rate
  double wall_seconds = 0.0;

  int max_iterations() const noexcept;
  double max_residual() const noexcept;
};

}  // namespace taxis
