#pragma once

#include <utility>

#include "taxis/models.hpp"
#include "taxis/solver.hpp"

namespace taxis {

/// Largest per-cell rate at which the explicit part of a step can remove density:
/// upwind outflow plus the negative parts of the reaction rates. A forward-Euler
/// substep with dt * rate <= 1 keeps every field nonnegative.
double explicit_loss_rate(const State& state, const ModelParams& params, const CoefficientSet& coeffs,
                          const SolverConfig& cfg);

/// cfl_safety / explicit_loss_rate (infinite when nothing is lost).
double stability_bound(const State& state, const ModelParams& params, const SolverConfig& cfg);

/// min(cfg.dt, stability_bound, cfg.t_end - state.t).
double admissible_dt(const State& state, const ModelParams& params, const SolverConfig& cfg);

/// One IMEX step with step size cfg.dt: explicit taxis and reactions, explicit pointwise w
/// update, then backward-Euler diffusion solves for u, v and z.
/// Throws CflError when cfg.dt exceeds the stability bound.
std::pair<State, StepReport> imex_step(const State& state, const ModelParams& params, const SolverConfig& cfg);
std::pair<State, StepReport> imex_step(const State& state, const ModelParams& params, const CoefficientSet& coeffs,
                                       const SolverConfig& cfg);

}  // namespace taxis
