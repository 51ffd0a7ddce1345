#include "taxis/integrator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "taxis/error.hpp"
#include "taxis/operators.hpp"

namespace taxis {

double explicit_loss_rate(const State& s, const ModelParams& params, const CoefficientSet& coeffs,
                          const SolverConfig& cfg) {
  const GridSpec& g = s.grid();
  const bool direct = params.variant == ModelVariant::direct_taxis;
  const bool growth = params.variant == ModelVariant::cascade_with_growth;

  // Upwind outflow of u: both taxis terms are upwinded separately, so their outflows add.
  Field u_out(g), v_out(g, 0.0);
  if (direct) {
    const Field a = taxis_outflow_rate(evaluate_sensitivity(coeffs.chi, s.z, s.w), s.z);
    const Field b = taxis_outflow_rate(evaluate_sensitivity(coeffs.xi, s.z, s.w), s.w);
    for (std::size_t k = 0; k < g.size(); ++k) u_out[k] = a[k] + b[k];
  } else {
    const Field a = taxis_outflow_rate(evaluate_sensitivity(coeffs.chi, s.v, s.w), s.v);
    const Field b = taxis_outflow_rate(evaluate_sensitivity(coeffs.xi, s.v, s.w), s.w);
    for (std::size_t k = 0; k < g.size(); ++k) u_out[k] = a[k] + b[k];
    v_out = taxis_outflow_rate(Field(g, 1.0), s.z);
  }

  const double mu_z = params.reaction.mu_z;
  const double mu_vz = params.reaction.mu_vz;
  const bool explicit_uptake = cfg.uptake == UptakeScheme::explicit_euler;
  const GrowthParams& gp = params.growth;
  const std::size_t n = g.size();
  double rate = 0.0;
#pragma omp parallel for schedule(static) reduction(max : rate)
  for (std::size_t k = 0; k < n; ++k) {
    const double u = s.u[k];
    const double v = s.v[k];
    const double w = s.w[k];
    double ru = u_out[k];
    double rv = v_out[k];
    if (growth) {
      ru += std::max(0.0, -mu_c(u, v, w, gp));
      rv += std::max(0.0, -mu_e(u, v, s.z[k], gp));
    }
    // w - dt psi(u w) >= 0  <=>  dt psi(u w) / w <= 1. For psi(s) = beta s / (1 + s) the rate
    // is beta u / (1 + u w) <= beta u.
    const double psi_uw = coeffs.psi(u * w);
    const double rw = w > 0.0 ? psi_uw / w : (psi_uw > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    double rz = 0.0;
    if (explicit_uptake) rz = direct ? mu_z : mu_vz * std::max(0.0, v);
    rate = std::max({rate, ru, rv, rw, rz});
  }
  return rate;
}

double stability_bound(const State& state, const ModelParams& params, const SolverConfig& cfg) {
  const double rate = explicit_loss_rate(state, params, params.coefficients(), cfg);
  return rate > 0.0 ? cfg.cfl_safety / rate : std::numeric_limits<double>::infinity();
}

double admissible_dt(const State& state, const ModelParams& params, const SolverConfig& cfg) {
  return std::max(0.0, std::min({cfg.dt, stability_bound(state, params, cfg), cfg.t_end - state.t}));
}

std::pair<State, StepReport> imex_step(const State& state, const ModelParams& params, const SolverConfig& cfg) {
  return imex_step(state, params, params.coefficients(), cfg);
}

std::pair<State, StepReport> imex_step(const State& s, const ModelParams& params, const CoefficientSet& coeffs,
                                       const SolverConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const GridSpec& g = s.grid();
  const double dt = cfg.dt;

  StepReport report;
  report.dt = dt;
  const double rate = explicit_loss_rate(s, params, coeffs, cfg);
  report.cfl_number = dt * rate;
  if (rate > 0.0 && dt * rate > cfg.cfl_safety * (1.0 + 1e-12)) {
    const double admissible = cfg.cfl_safety / rate;
    std::ostringstream msg;
    msg << "time step " << dt << " exceeds the stability bound; admissible dt = " << admissible;
    throw CflError(msg.str(), admissible);
  }

  const Tendencies t = explicit_rhs(s, params, coeffs);
  const bool direct = params.variant == ModelVariant::direct_taxis;
  const bool explicit_uptake = cfg.uptake == UptakeScheme::explicit_euler;
  const double mu_z = params.reaction.mu_z;
  const double mu_vz = params.reaction.mu_vz;

  State next{Field(g), Field(g), Field(g), Field(g), s.t + dt};
  Field rhs_u(g), rhs_v(g), rhs_z(g);
  const std::size_t n = g.size();
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < n; ++k) {
    rhs_u[k] = s.u[k] + dt * t.u[k];
    rhs_v[k] = s.v[k] + dt * t.v[k];
    next.w[k] = s.w[k] + dt * t.w[k];
    if (explicit_uptake) {
      rhs_z[k] = s.z[k] + dt * t.z[k];
    } else {
      // Loss term taken at the new level: (z' - z) / dt = phi(u) - c z' with c = mu_vz v or mu_z.
      const double loss = direct ? mu_z : mu_vz * s.v[k];
      rhs_z[k] = (s.z[k] + dt * coeffs.phi(s.u[k])) / (1.0 + dt * loss);
    }
  }

  CgResult ru, rv, rz;
  next.u = implicit_diffusion_solve(rhs_u, params.D_u, dt, cfg, &ru);
  next.v = direct ? s.v : implicit_diffusion_solve(rhs_v, params.D_v, dt, cfg, &rv);
  next.z = implicit_diffusion_solve(rhs_z, params.reaction.D_z, dt, cfg, &rz);

  report.cg_iterations = {ru.iterations, rv.iterations, rz.iterations};
  report.cg_residuals = {ru.residual, rv.residual, rz.residual};
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(next), report};
}

}  // namespace taxis
