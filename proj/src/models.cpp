#include "taxis/models.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "taxis/error.hpp"
#include "taxis/integrator.hpp"
#include "taxis/operators.hpp"

namespace taxis {

std::string to_string(ModelVariant variant) {
  switch (variant) {
    case ModelVariant::cascade_no_source: return "cascade";
    case ModelVariant::cascade_with_growth: return "growth";
    case ModelVariant::direct_taxis: break;
  }
  return "direct";
}

ModelVariant parse_variant(const std::string& text) {
  if (text == "cascade" || text == "CascadeNoSource") return ModelVariant::cascade_no_source;
  if (text == "growth" || text == "CascadeWithGrowth") return ModelVariant::cascade_with_growth;
  if (text == "direct" || text == "DirectTaxis") return ModelVariant::direct_taxis;
  throw ValidationError("unknown model variant '" + text + "' (expected cascade, growth or direct)");
}

CoefficientSet ModelParams::coefficients() const {
  return CoefficientSet{
      SensitivityFunction::parse(chi_family, taxis.kappa1, binding),
      SensitivityFunction::parse(xi_family, taxis.kappa2, binding),
      RateFunction::parse(psi_family, reaction.beta),
      RateFunction::parse(phi_family, 1.0),
  };
}

namespace {

void require_positive(std::vector<Violation>& out, const char* tag, const char* name, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream msg;
    msg << name << " must be positive and finite (got " << x << ")";
    out.push_back({tag, msg.str()});
  }
}

}  // namespace

std::vector<Violation> check_parameters(const ModelParams& p) {
  std::vector<Violation> out;
  require_positive(out, "B(v,w)", "k1_plus", p.binding.k1_plus);
  require_positive(out, "B(v,w)", "k2_plus", p.binding.k2_plus);
  require_positive(out, "B(v,w)", "k_minus", p.binding.k_minus);
  require_positive(out, "B(v,w)", "v_ref", p.binding.v_ref);
  require_positive(out, "B(v,w)", "w_ref", p.binding.w_ref);
  require_positive(out, "(chi)", "kappa1", p.taxis.kappa1);
  require_positive(out, "(xi)", "kappa2", p.taxis.kappa2);
  require_positive(out, "(psi)", "beta (psi positivity)", p.reaction.beta);
  require_positive(out, "z-equation", "D_z", p.reaction.D_z);
  require_positive(out, "z-equation", "mu_vz", p.reaction.mu_vz);
  require_positive(out, "z-equation", "mu_z", p.reaction.mu_z);
  require_positive(out, "diffusion", "D_u", p.D_u);
  require_positive(out, "diffusion", "D_v", p.D_v);
  require_positive(out, "growth", "mu_u", p.growth.mu_u);
  require_positive(out, "growth", "mu_v", p.growth.mu_v);
  require_positive(out, "growth", "K_u", p.growth.K_u);
  require_positive(out, "growth", "K_v", p.growth.K_v);
  require_positive(out, "growth", "K_w", p.growth.K_w);
  require_positive(out, "growth", "K_z", p.growth.K_z);
  require_positive(out, "kinetic", "speed_c", p.kinetic.speed_c);
  require_positive(out, "kinetic", "speed_e", p.kinetic.speed_e);
  require_positive(out, "kinetic", "lambda0", p.kinetic.lambda0);
  require_positive(out, "kinetic", "lambda1", p.kinetic.lambda1);
  require_positive(out, "kinetic", "eta0", p.kinetic.eta0);
  if (p.kinetic.lambda1 >= p.kinetic.lambda0) {
    out.push_back({"kinetic", "lambda1 must be smaller than lambda0"});
  }
  if (p.kinetic.dim != 2) out.push_back({"kinetic", "dim must be 2"});
  require_positive(out, "sampling", "v_max", p.caps.v_max);
  require_positive(out, "sampling", "w_max", p.caps.w_max);
  require_positive(out, "sampling", "u_max", p.caps.u_max);
  if (p.declared_bounds) {
    require_positive(out, "(chi)", "C_chi", p.declared_bounds->C_chi);
    require_positive(out, "(xi)", "C_xi", p.declared_bounds->C_xi);
    require_positive(out, "(psi)", "C_psi", p.declared_bounds->C_psi);
    require_positive(out, "(phi)", "C_phi", p.declared_bounds->C_phi);
  }
  return out;
}

AssumptionReport validate_model(const ModelParams& params) {
  auto violations = check_parameters(params);
  std::vector<std::string> lines;
  for (const auto& v : violations) lines.push_back(v.hypothesis + ": " + v.message);
  if (violations.empty()) {
    const AssumptionReport report = validate_assumptions(params.coefficients(), params.caps, params.declared_bounds);
    if (report.ok()) return report;
    for (const auto& v : report.violations) lines.push_back(v.hypothesis + ": " + v.message);
  }
  std::string msg = "model parameters violate " + std::to_string(lines.size()) + " constraint(s)";
  for (const auto& l : lines) msg += "\n  " + l;
  throw ValidationError(msg, lines);
}

Field evaluate_sensitivity(const SensitivityFunction& fn, const Field& a, const Field& b) {
  Field out(a.grid());
  const std::size_t n = a.size();
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < n; ++k) out[k] = fn(a[k], b[k]);
  return out;
}

Tendencies explicit_rhs_cascade(const State& s, const ModelParams& params, const CoefficientSet& coeffs) {
  const GridSpec& g = s.grid();
  StencilWorkspace ws(g);
  const Field chi_f = evaluate_sensitivity(coeffs.chi, s.v, s.w);
  const Field xi_f = evaluate_sensitivity(coeffs.xi, s.v, s.w);
  const Field toward_v = taxis_divergence(s.u, chi_f, s.v, &ws);
  const Field toward_w = taxis_divergence(s.u, xi_f, s.w, &ws);
  const Field ones(g, 1.0);
  const Field v_toward_z = taxis_divergence(s.v, ones, s.z, &ws);

  Tendencies t{Field(g), Field(g), Field(g), Field(g)};
  const bool growth = params.variant == ModelVariant::cascade_with_growth;
  const GrowthParams& gp = params.growth;
  const double mu_vz = params.reaction.mu_vz;
  const std::size_t n = g.size();
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < n; ++k) {
    const double u = s.u[k];
    const double v = s.v[k];
    const double w = s.w[k];
    const double z = s.z[k];
    t.u[k] = -toward_v[k] - toward_w[k];
    t.v[k] = -v_toward_z[k];
    if (growth) {
      t.u[k] += mu_c(u, v, w, gp) * u;
      t.v[k] += mu_e(u, v, z, gp) * v;
    }
    t.w[k] = -coeffs.psi(u * w);
    t.z[k] = -mu_vz * v * z + coeffs.phi(u);
  }
  return t;
}

Tendencies explicit_rhs_cascade(const State& state, const ModelParams& params) {
  return explicit_rhs_cascade(state, params, params.coefficients());
}

Tendencies explicit_rhs_direct(const State& s, const ModelParams& params, const CoefficientSet& coeffs) {
  const GridSpec& g = s.grid();
  StencilWorkspace ws(g);
  // Sensitivities depend on (z, w): B(z, w) with z in place of v.
  const Field chi_f = evaluate_sensitivity(coeffs.chi, s.z, s.w);
  const Field xi_f = evaluate_sensitivity(coeffs.xi, s.z, s.w);
  const Field toward_z = taxis_divergence(s.u, chi_f, s.z, &ws);
  const Field toward_w = taxis_divergence(s.u, xi_f, s.w, &ws);

  Tendencies t{Field(g), Field(g), Field(g), Field(g)};
  const double mu_z = params.reaction.mu_z;
  const std::size_t n = g.size();
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < n; ++k) {
    const double u = s.u[k];
    t.u[k] = -toward_z[k] - toward_w[k];
    t.w[k] = -coeffs.psi(u * s.w[k]);
    t.z[k] = -mu_z * s.z[k] + coeffs.phi(u);
  }
  return t;
}

Tendencies explicit_rhs_direct(const State& state, const ModelParams& params) {
  return explicit_rhs_direct(state, params, params.coefficients());
}

Tendencies explicit_rhs(const State& state, const ModelParams& params, const CoefficientSet& coeffs) {
  if (params.variant == ModelVariant::direct_taxis) return explicit_rhs_direct(state, params, coeffs);
  return explicit_rhs_cascade(state, params, coeffs);
}

// --- transformed system -------------------------------------------------------

namespace {

Field big_xi_field(const Field& v, const Field& w, const SensitivityFunction& xi_fn) {
  Field out(v.grid());
  const std::size_t n = v.size();
#pragma omp parallel for schedule(dynamic, 64)
  for (std::size_t k = 0; k < n; ++k) out[k] = big_xi(v[k], w[k], xi_fn);
  return out;
}

Field big_xi_dv_field(const Field& v, const Field& w, const SensitivityFunction& xi_fn) {
  Field out(v.grid());
  const std::size_t n = v.size();
#pragma omp parallel for schedule(dynamic, 64)
  for (std::size_t k = 0; k < n; ++k) out[k] = big_xi_dv(v[k], w[k], xi_fn);
  return out;
}

void require_a_system_params(const ModelParams& params) {
  if (params.variant != ModelVariant::cascade_no_source) {
    throw ValidationError("transformed system: only the no-source cascade variant is supported");
  }
  if (params.D_u != 1.0) {
    throw ValidationError("transformed system: requires D_u = 1");
  }
}

// Coefficient fields shared by the step and its stability bound.
struct AFields {
  Field weight;     // exp(Xi(v, w))
  Field xi_v;       // dXi/dv
  Field drift;      // chi - dXi/dv
  Field xi;         // xi(v, w)
  Field u;          // a exp(Xi)
  Field v_rate;     // D_v Lap v - div(v grad z)
  Field v_taxis;    // div(v grad z)
};

AFields a_fields(const ASystemState& s, const ModelParams& params, const CoefficientSet& coeffs) {
  const GridSpec& g = s.a.grid();
  AFields f{big_xi_field(s.v, s.w, coeffs.xi), big_xi_dv_field(s.v, s.w, coeffs.xi), Field(g), Field(g),
            Field(g), Field(g), Field(g)};
  const std::size_t n = g.size();
  const Field chi_f = evaluate_sensitivity(coeffs.chi, s.v, s.w);
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < n; ++k) {
    f.weight[k] = std::exp(f.weight[k]);
    f.drift[k] = chi_f[k] - f.xi_v[k];
    f.xi[k] = coeffs.xi(s.v[k], s.w[k]);
    f.u[k] = s.a[k] * f.weight[k];
  }
  const Field ones(g, 1.0);
  f.v_taxis = taxis_divergence(s.v, ones, s.z);
  const Field lap_v = laplacian(s.v);
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < n; ++k) f.v_rate[k] = params.D_v * lap_v[k] - f.v_taxis[k];
  return f;
}

double a_loss_rate(const ASystemState& s, const AFields& f, const ModelParams& params, const CoefficientSet& coeffs,
                   const SolverConfig& cfg) {
  const Field drift_out = taxis_outflow_rate(f.drift, s.v);
  const Field ones(s.v.grid(), 1.0);
  const Field v_out = taxis_outflow_rate(ones, s.z);
  const double mu_vz = params.reaction.mu_vz;
  const bool explicit_uptake = cfg.uptake == UptakeScheme::explicit_euler;
  const std::size_t n = s.a.size();
  double rate = 0.0;
#pragma omp parallel for schedule(static) reduction(max : rate)
  for (std::size_t k = 0; k < n; ++k) {
    const double w = s.w[k];
    const double psi_uw = coeffs.psi(f.u[k] * w);
    double ra = drift_out[k] + std::max(0.0, f.xi_v[k] * f.v_rate[k]) + std::max(0.0, -f.xi[k] * psi_uw);
    double rw = w > 0.0 ? psi_uw / w : (psi_uw > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    double rz = explicit_uptake ? mu_vz * std::max(0.0, s.v[k]) : 0.0;
    rate = std::max({rate, ra, v_out[k], rw, rz});
  }
  return rate;
}

}  // namespace

Field transform_to_a(const State& state, const ModelParams& params) {
  const CoefficientSet coeffs = params.coefficients();
  Field a = big_xi_field(state.v, state.w, coeffs.xi);
  const std::size_t n = a.size();
  for (std::size_t k = 0; k < n; ++k) a[k] = state.u[k] * std::exp(-a[k]);
  return a;
}

Field transform_from_a(const Field& a, const Field& v, const Field& w, const ModelParams& params) {
  const CoefficientSet coeffs = params.coefficients();
  Field u = big_xi_field(v, w, coeffs.xi);
  const std::size_t n = u.size();
  for (std::size_t k = 0; k < n; ++k) u[k] = a[k] * std::exp(u[k]);
  return u;
}

ASystemState to_a_system(const State& state, const ModelParams& params) {
  return ASystemState{transform_to_a(state, params), state.v, state.w, state.z, state.t};
}

State from_a_system(const ASystemState& s, const ModelParams& params) {
  return State{transform_from_a(s.a, s.v, s.w, params), s.v, s.w, s.z, s.t};
}

double admissible_dt_a(const ASystemState& state, const ModelParams& params, const SolverConfig& cfg) {
  require_a_system_params(params);
  const CoefficientSet coeffs = params.coefficients();
  const AFields f = a_fields(state, params, coeffs);
  const double rate = a_loss_rate(state, f, params, coeffs, cfg);
  const double bound = rate > 0.0 ? cfg.cfl_safety / rate : std::numeric_limits<double>::infinity();
  return std::max(0.0, std::min({cfg.dt, bound, cfg.t_end - state.t}));
}

std::pair<ASystemState, StepReport> step_a_system(const ASystemState& s, const ModelParams& params,
                                                  const SolverConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  require_a_system_params(params);
  const CoefficientSet coeffs = params.coefficients();
  const GridSpec& g = s.a.grid();
  const double dt = cfg.dt;
  const AFields f = a_fields(s, params, coeffs);

  StepReport report;
  report.dt = dt;
  const double rate = a_loss_rate(s, f, params, coeffs, cfg);
  report.cfl_number = dt * rate;
  if (rate > 0.0 && dt * rate > cfg.cfl_safety * (1.0 + 1e-12)) {
    const double admissible = cfg.cfl_safety / rate;
    std::ostringstream msg;
    msg << "time step " << dt << " exceeds the stability bound; admissible dt = " << admissible;
    throw CflError(msg.str(), admissible);
  }

  const Field drift_div = taxis_divergence(f.u, f.drift, s.v);
  const bool explicit_uptake = cfg.uptake == UptakeScheme::explicit_euler;
  const double mu_vz = params.reaction.mu_vz;
  Field rhs_a(g), rhs_v(g), rhs_z(g);
  ASystemState next{Field(g), Field(g), Field(g), Field(g), s.t + dt};
  const std::size_t n = g.size();
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < n; ++k) {
    const double a = s.a[k];
    const double e = f.weight[k];
    const double u = f.u[k];
    const double w = s.w[k];
    const double psi_uw = coeffs.psi(u * w);
    // Multiplied through by exp(Xi) so that the implicit operator is symmetric.
    const double tendency = -drift_div[k] - e * a * f.xi_v[k] * f.v_rate[k] + e * a * f.xi[k] * psi_uw;
    rhs_a[k] = e * a + dt * tendency;
    rhs_v[k] = s.v[k] + dt * (-f.v_taxis[k]);
    next.w[k] = w + dt * (-psi_uw);
    if (explicit_uptake) {
      rhs_z[k] = s.z[k] + dt * (-mu_vz * s.v[k] * s.z[k] + coeffs.phi(u));
    } else {
      rhs_z[k] = (s.z[k] + dt * coeffs.phi(u)) / (1.0 + dt * mu_vz * s.v[k]);
    }
  }

  CgResult ra, rv, rz;
  const DiffusionOperator a_op{g, 1.0, dt, &f.weight, &f.weight};
  next.a = implicit_solve(a_op, rhs_a, cfg, &ra);
  next.v = implicit_diffusion_solve(rhs_v, params.D_v, dt, cfg, &rv);
  next.z = implicit_diffusion_solve(rhs_z, params.reaction.D_z, dt, cfg, &rz);
  report.cg_iterations = {ra.iterations, rv.iterations, rz.iterations};
  report.cg_residuals = {ra.residual, rv.residual, rz.residual};
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(next), report};
}

}  // namespace taxis
