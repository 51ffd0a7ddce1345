#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace taxis {

/// Attachment/detachment rates and reference densities that enter B(v, w).
struct BindingParams {
  double k1_plus = 1.0;  // attachment to ECs
  double k2_plus = 1.0;  // attachment to tissue
  double k_minus = 1.0;  // detachment
  double v_ref = 1.0;
  double w_ref = 1.0;
};

struct TaxisParams {
  double kappa1 = 1.0;  // chemotaxis toward v
  double kappa2 = 1.0;  // haptotaxis toward w
};

/// Velocity-jump parameters; only used to report the macroscopic diffusivities.
struct KineticParams {
  double speed_c = 1.0;
  double speed_e = 1.0;
  double lambda0 = 0.5;
  double lambda1 = 0.25;
  double eta0 = 0.5;
  int dim = 2;
};

struct ReactionParams {
  double D_z = 10.0;
  double mu_vz = 1.0;  // uptake of VEGF by ECs, -mu_vz v z (cascade)
  double mu_z = 0.1;   // natural decay of VEGF, -mu_z z (direct taxis)
  double beta = 1.0;
};

struct GrowthParams {
  double mu_u = 0.1;
  double mu_v = 0.1;
  double K_u = 1.0;
  double K_v = 1.0;
  double K_w = 1.0;
  double K_z = 1.0;
};

/// Constants C_chi, C_xi, C_psi, C_phi of the structural hypotheses on chi, xi, psi, phi.
struct AssumptionBounds {
  double C_chi = 0.0;
  double C_xi = 0.0;
  double C_psi = 0.0;
  double C_phi = 0.0;
};

// B(v, w) = k1+ v / v_M + k2+ w / w_M + k-. Throws on negative densities.
double binding_B(double v, double w, const BindingParams& bp);
double chi(double v, double w, const BindingParams& bp, const TaxisParams& tp);
double xi(double v, double w, const BindingParams& bp, const TaxisParams& tp);

/// psi(s) = beta s / (1 + s).
double psi(double s, const ReactionParams& rp);
/// phi(u) = u / (1 + u).
double phi(double u);

double mu_c(double u, double v, double w, const GrowthParams& gp);
double mu_e(double u, double v, double z, const GrowthParams& gp);

struct Diffusivities {
  double tumor = 0.0;
  double endothelial = 0.0;
};

/// Isotropic D_T = s^2 / (N lambda0), D_E = sigma^2 / (N eta0).
Diffusivities diffusion_constants(const KineticParams& kp);

/// g(v, w) = lambda1 k- / (B^2 (lambda0 + B)).
double tactic_sensitivity_g(double v, double w, const BindingParams& bp, const KineticParams& kp);

/// A tactic sensitivity f(v, w) drawn from a small registry of closed forms.
///
///   binding      kappa / (B^2 (1 + B))
///   constant(c)  c
///   expdecay(r)  kappa exp(-r (v + w))
///
/// Evaluation does not validate its arguments; it is used inside stencil loops.
class SensitivityFunction {
 public:
  enum class Family { binding, constant, exp_decay };

  SensitivityFunction() = default;
  static SensitivityFunction binding(double kappa, const BindingParams& bp);
  static SensitivityFunction constant(double c);
  static SensitivityFunction exp_decay(double kappa, double rate);

  /// Parses "binding", "constant(c)" or "expdecay(r)"; kappa and bp fill in the family scale.
  static SensitivityFunction parse(const std::string& text, double kappa, const BindingParams& bp);

  double operator()(double v, double w) const noexcept;
  double d_dv(double v, double w) const noexcept;

  Family family() const noexcept { return family_; }
  std::string to_string() const;

 private:
  Family family_ = Family::binding;
  double kappa_ = 1.0;
  double rate_ = 0.0;
  BindingParams bp_{};
};

/// A scalar rate r(s) used for tissue degradation psi and VEGF production phi.
///
///   saturating   scale s / (1 + s)
///   power(p)     scale s^p
///   expsat       scale (1 - exp(-s))
///   constant(c)  c
class RateFunction {
 public:
  enum class Family { saturating, power, exp_saturating, constant };

  RateFunction() = default;
  static RateFunction saturating(double scale);
  static RateFunction power(double scale, double exponent);
  static RateFunction exp_saturating(double scale);
  static RateFunction constant(double c);

  static RateFunction parse(const std::string& text, double scale);

  double operator()(double s) const noexcept;
  double derivative(double s) const noexcept;

  Family family() const noexcept { return family_; }
  std::string to_string() const;

 private:
  Family family_ = Family::saturating;
  double scale_ = 1.0;
  double exponent_ = 1.0;
};

struct CoefficientSet {
  SensitivityFunction chi;
  SensitivityFunction xi;
  RateFunction psi;
  RateFunction phi;
};

/// The closed forms used in the numerical experiments.
CoefficientSet default_coefficients(const BindingParams& bp, const TaxisParams& tp, const ReactionParams& rp);

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double tol);

/// Xi(v, w) = integral of xi(v, s) over s in [0, w].
double big_xi(double v, double w, const SensitivityFunction& xi_fn);
/// d Xi / dv = integral of d xi / dv (v, s) over s in [0, w].
double big_xi_dv(double v, double w, const SensitivityFunction& xi_fn);

inline constexpr double kQuadratureTolerance = 1e-12;

struct Violation {
  std::string hypothesis;  // "(chi)", "(xi)", "(psi)", "(phi)" or a parameter name
  std::string message;
};

struct SamplingCaps {
  double v_max = 10.0;
  double w_max = 10.0;
  double u_max = 10.0;
};

struct AssumptionReport {
  AssumptionBounds certified;  // observed suprema; C_xi = max(sup|xi|, sup|xi_v|)
  double xi_sup = 0.0;
  double xi_v_sup = 0.0;
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
};

/// Samples chi (v+1), |xi|, |xi_v|, s psi'(s) and u |phi'(u)| on dense grids over the caps plus a
/// logarithmic tail reaching 1e6 times each cap. A quantity that still grows by more than 1% over
/// the last sampled decade is reported as unbounded. Declared bounds, when given, must not be exceeded.
AssumptionReport validate_assumptions(const CoefficientSet& coeffs, const SamplingCaps& caps,
                                      const std::optional<AssumptionBounds>& declared = std::nullopt);

// ---------------------------------------------------------------------------

template <class F>
double integrate_adaptive(F&& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  struct Rec {
    static double run(F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                      int depth) {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m);
      const double rm = 0.5 * (m + b);
      const double flm = f(lm);
      const double frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const double delta = left + right - whole;
      if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
      }
      return run(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
             run(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
  };
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return Rec::run(f, a, b, fa, fm, fb, whole, tol, 50);
}

}  // namespace taxis
