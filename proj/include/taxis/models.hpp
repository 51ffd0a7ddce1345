#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "taxis/coefficients.hpp"
#include "taxis/grid.hpp"
#include "taxis/solver.hpp"

namespace taxis {

enum class ModelVariant {
  cascade_no_source,    // taxis cascade without cell proliferation
  cascade_with_growth,  // taxis cascade with logistic-type proliferation of u and v
  direct_taxis,         // tumor cells follow VEGF directly; v is carried frozen
};

std::string to_string(ModelVariant variant);
/// Accepts "cascade", "growth", "direct" and the long names returned by to_string.
ModelVariant parse_variant(const std::string& text);

struct ModelParams {
  BindingParams binding;
  TaxisParams taxis;
  KineticParams kinetic;
  ReactionParams reaction;
  GrowthParams growth;
  double D_u = 1.0;
  double D_v = 1.0;

  std::string chi_family = "binding";
  std::string xi_family = "binding";
  std::string psi_family = "saturating";
  std::string phi_family = "saturating";

  SamplingCaps caps;
  std::optional<AssumptionBounds> declared_bounds;

  ModelVariant variant = ModelVariant::cascade_no_source;

  /// Resolves the coefficient families; throws ValidationError on unknown names.
  CoefficientSet coefficients() const;
};

/// Positivity and range checks on every scalar, tagged with the hypothesis they protect.
std::vector<Violation> check_parameters(const ModelParams& params);

/// Runs check_parameters and validate_assumptions; throws ValidationError listing every
/// violation. Returns the certification report on success.
AssumptionReport validate_model(const ModelParams& params);

/// Explicit right-hand sides of one time level (diffusion excluded).
struct Tendencies {
  Field u;
  Field v;
  Field w;
  Field z;
};

/// Per-cell sensitivity field f(a, b).
Field evaluate_sensitivity(const SensitivityFunction& fn, const Field& a, const Field& b);

Tendencies explicit_rhs_cascade(const State& state, const ModelParams& params, const CoefficientSet& coeffs);
Tendencies explicit_rhs_cascade(const State& state, const ModelParams& params);

Tendencies explicit_rhs_direct(const State& state, const ModelParams& params, const CoefficientSet& coeffs);
Tendencies explicit_rhs_direct(const State& state, const ModelParams& params);

Tendencies explicit_rhs(const State& state, const ModelParams& params, const CoefficientSet& coeffs);

/// a = u exp(-Xi(v, w)).
Field transform_to_a(const State& state, const ModelParams& params);
/// u = a exp(Xi(v, w)).
Field transform_from_a(const Field& a, const Field& v, const Field& w, const ModelParams& params);

/// State of the transformed system, where the haptotactic flux is absorbed into the
/// weighted diffusion of a.
struct ASystemState {
  Field a;
  Field v;
  Field w;
  Field z;
  double t = 0.0;
};

ASystemState to_a_system(const State& state, const ModelParams& params);
State from_a_system(const ASystemState& state, const ModelParams& params);

/// Largest stable step of the transformed system (same contract as admissible_dt).
double admissible_dt_a(const ASystemState& state, const ModelParams& params, const SolverConfig& cfg);

/// One IMEX step of the transformed no-source system with step cfg.dt.
std::pair<ASystemState, StepReport> step_a_system(const ASystemState& state, const ModelParams& params,
                                                  const SolverConfig& cfg);

}  // namespace taxis
