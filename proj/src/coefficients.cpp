#include "taxis/coefficients.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "taxis/error.hpp"

namespace taxis {

namespace {

void require_nonnegative(double x, const char* what) {
  if (!(x >= 0.0)) {
    throw ValidationError(std::string(what) + " must be nonnegative");
  }
}

double binding_unchecked(double v, double w, const BindingParams& bp) noexcept {
  return bp.k1_plus * v / bp.v_ref + bp.k2_plus * w / bp.w_ref + bp.k_minus;
}

double sensitivity_shape(double b) noexcept { return 1.0 / (b * b * (1.0 + b)); }

// d/dB [1 / (B^2 (1 + B))]
double sensitivity_shape_slope(double b) noexcept {
  const double bp1 = 1.0 + b;
  return -(2.0 + 3.0 * b) / (b * b * b * bp1 * bp1);
}

std::string format_real(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Splits "name(arg)" into name and optional numeric argument.
std::pair<std::string, std::optional<double>> split_family(const std::string& raw) {
  std::string text;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
  }
  const auto open = text.find('(');
  if (open == std::string::npos) {
    return {text, std::nullopt};
  }
  if (text.back() != ')') {
    throw ValidationError("coefficient '" + raw + "': missing closing parenthesis");
  }
  const std::string arg = text.substr(open + 1, text.size() - open - 2);
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(arg, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != arg.size()) {
    throw ValidationError("coefficient '" + raw + "': cannot parse argument '" + arg + "'");
  }
  return {text.substr(0, open), x};
}

}  // namespace

double binding_B(double v, double w, const BindingParams& bp) {
  require_nonnegative(v, "binding_B: v");
  require_nonnegative(w, "binding_B: w");
  return binding_unchecked(v, w, bp);
}

double chi(double v, double w, const BindingParams& bp, const TaxisParams& tp) {
  return tp.kappa1 * sensitivity_shape(binding_B(v, w, bp));
}

double xi(double v, double w, const BindingParams& bp, const TaxisParams& tp) {
  return tp.kappa2 * sensitivity_shape(binding_B(v, w, bp));
}

double psi(double s, const ReactionParams& rp) {
  require_nonnegative(s, "psi: argument");
  return rp.beta * s / (1.0 + s);
}

double phi(double u) {
  require_nonnegative(u, "phi: argument");
  return u / (1.0 + u);
}

double mu_c(double u, double v, double w, const GrowthParams& gp) {
  return gp.mu_u / gp.K_u * (1.0 - u / gp.K_u - v / gp.K_v - w / gp.K_w);
}

double mu_e(double u, double v, double z, const GrowthParams& gp) {
  return gp.mu_v * (z / gp.K_z) * (1.0 - v / gp.K_v - u / gp.K_u);
}

Diffusivities diffusion_constants(const KineticParams& kp) {
  const double n = static_cast<double>(kp.dim);
  return {kp.speed_c * kp.speed_c / (n * kp.lambda0), kp.speed_e * kp.speed_e / (n * kp.eta0)};
}

double tactic_sensitivity_g(double v, double w, const BindingParams& bp, const KineticParams& kp) {
  const double b = binding_B(v, w, bp);
  return kp.lambda1 * bp.k_minus / (b * b * (kp.lambda0 + b));
}

// --- SensitivityFunction ----------------------------------------------------

SensitivityFunction SensitivityFunction::binding(double kappa, const BindingParams& bp) {
  SensitivityFunction f;
  f.family_ = Family::binding;
  f.kappa_ = kappa;
  f.bp_ = bp;
  return f;
}

SensitivityFunction SensitivityFunction::constant(double c) {
  SensitivityFunction f;
  f.family_ = Family::constant;
  f.kappa_ = c;
  return f;
}

SensitivityFunction SensitivityFunction::exp_decay(double kappa, double rate) {
  SensitivityFunction f;
  f.family_ = Family::exp_decay;
  f.kappa_ = kappa;
  f.rate_ = rate;
  return f;
}

SensitivityFunction SensitivityFunction::parse(const std::string& text, double kappa, const BindingParams& bp) {
  const auto [name, arg] = split_family(text);
  if (name == "binding" && !arg) return binding(kappa, bp);
  if (name == "constant" && arg) return constant(*arg);
  if (name == "expdecay" && arg) {
    if (*arg < 0.0) throw ValidationError("coefficient '" + text + "': decay rate must be nonnegative");
    return exp_decay(kappa, *arg);
  }
  throw ValidationError("unknown sensitivity '" + text + "' (expected binding, constant(c) or expdecay(r))");
}

double SensitivityFunction::operator()(double v, double w) const noexcept {
  switch (family_) {
    case Family::binding: return kappa_ * sensitivity_shape(binding_unchecked(v, w, bp_));
    case Family::constant: return kappa_;
    case Family::exp_decay: break;
  }
  return kappa_ * std::exp(-rate_ * (v + w));
}

double SensitivityFunction::d_dv(double v, double w) const noexcept {
  switch (family_) {
    case Family::binding:
      return kappa_ * sensitivity_shape_slope(binding_unchecked(v, w, bp_)) * bp_.k1_plus / bp_.v_ref;
    case Family::constant: return 0.0;
    case Family::exp_decay: break;
  }
  return -rate_ * kappa_ * std::exp(-rate_ * (v + w));
}

std::string SensitivityFunction::to_string() const {
  switch (family_) {
    case Family::binding: return "binding";
    case Family::constant: return "constant(" + format_real(kappa_) + ")";
    case Family::exp_decay: break;
  }
  return "expdecay(" + format_real(rate_) + ")";
}

// --- RateFunction -----------------------------------------------------------

RateFunction RateFunction::saturating(double scale) {
  RateFunction f;
  f.family_ = Family::saturating;
  f.scale_ = scale;
  return f;
}

RateFunction RateFunction::power(double scale, double exponent) {
  RateFunction f;
  f.family_ = Family::power;
  f.scale_ = scale;
  f.exponent_ = exponent;
  return f;
}

RateFunction RateFunction::exp_saturating(double scale) {
  RateFunction f;
  f.family_ = Family::exp_saturating;
  f.scale_ = scale;
  return f;
}

RateFunction RateFunction::constant(double c) {
  RateFunction f;
  f.family_ = Family::constant;
  f.scale_ = c;
  return f;
}

RateFunction RateFunction::parse(const std::string& text, double scale) {
  const auto [name, arg] = split_family(text);
  if (name == "saturating" && !arg) return saturating(scale);
  if (name == "expsat" && !arg) return exp_saturating(scale);
  if (name == "power" && arg) {
    if (*arg <= 0.0) throw ValidationError("coefficient '" + text + "': exponent must be positive");
    return power(scale, *arg);
  }
  if (name == "constant" && arg) return constant(*arg);
  throw ValidationError("unknown rate function '" + text +
                        "' (expected saturating, expsat, power(p) or constant(c))");
}

double RateFunction::operator()(double s) const noexcept {
  switch (family_) {
    case Family::saturating: return scale_ * s / (1.0 + s);
    case Family::power: return scale_ * std::pow(s, exponent_);
    case Family::exp_saturating: return -scale_ * std::expm1(-s);
    case Family::constant: break;
  }
  return scale_;
}

double RateFunction::derivative(double s) const noexcept {
  switch (family_) {
    case Family::saturating: return scale_ / ((1.0 + s) * (1.0 + s));
    case Family::power:
      if (exponent_ == 1.0) return scale_;
      return scale_ * exponent_ * std::pow(s, exponent_ - 1.0);
    case Family::exp_saturating: return scale_ * std::exp(-s);
    case Family::constant: break;
  }
  return 0.0;
}

std::string RateFunction::to_string() const {
  switch (family_) {
    case Family::saturating: return "saturating";
    case Family::power: return "power(" + format_real(exponent_) + ")";
    case Family::exp_saturating: return "expsat";
    case Family::constant: break;
  }
  return "constant(" + format_real(scale_) + ")";
}

CoefficientSet default_coefficients(const BindingParams& bp, const TaxisParams& tp, const ReactionParams& rp) {
  return CoefficientSet{
      SensitivityFunction::binding(tp.kappa1, bp),
      SensitivityFunction::binding(tp.kappa2, bp),
      RateFunction::saturating(rp.beta),
      RateFunction::saturating(1.0),
  };
}

double big_xi(double v, double w, const SensitivityFunction& xi_fn) {
  if (w == 0.0) return 0.0;
  if (xi_fn.family() == SensitivityFunction::Family::constant) return xi_fn(v, 0.0) * w;
  return integrate_adaptive([&](double s) { return xi_fn(v, s); }, 0.0, w, kQuadratureTolerance);
}

double big_xi_dv(double v, double w, const SensitivityFunction& xi_fn) {
  if (w == 0.0 || xi_fn.family() == SensitivityFunction::Family::constant) return 0.0;
  return integrate_adaptive([&](double s) { return xi_fn.d_dv(v, s); }, 0.0, w, kQuadratureTolerance);
}

// --- Assumption validation --------------------------------------------------

namespace {

constexpr int kDenseIntervals = 1000;
constexpr int kTailPointsPerDecade = 10;
constexpr int kTailDecades = 6;

// Dense linear samples on [0, cap] followed by a logarithmic tail up to 1e6 * cap.
std::vector<double> sample_axis(double cap, int dense_intervals) {
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(dense_intervals + kTailPointsPerDecade * kTailDecades + 1));
  for (int k = 0; k <= dense_intervals; ++k) {
    xs.push_back(cap * k / dense_intervals);
  }
  for (int k = 1; k <= kTailPointsPerDecade * kTailDecades; ++k) {
    xs.push_back(cap * std::pow(10.0, static_cast<double>(k) / kTailPointsPerDecade));
  }
  return xs;
}

// The tail occupies the last kTailPointsPerDecade * kTailDecades entries.
bool grows_over_last_decade(const std::vector<double>& profile) {
  const std::size_t n = profile.size();
  const double last = profile[n - 1];
  const double decade_before = profile[n - 1 - kTailPointsPerDecade];
  if (!std::isfinite(last)) return true;
  return last > 1.01 * decade_before && last > 0.0;
}

double sup_of(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, x);
  return m;
}

void check_declared(std::vector<Violation>& out, const char* tag, double observed, double declared) {
  if (observed > declared * (1.0 + 1e-12)) {
    out.push_back({tag, "observed supremum " + format_real(observed) + " exceeds declared bound " +
                            format_real(declared)});
  }
}

}  // namespace

AssumptionReport validate_assumptions(const CoefficientSet& coeffs, const SamplingCaps& caps,
                                      const std::optional<AssumptionBounds>& declared) {
  if (!(caps.v_max > 0.0) || !(caps.w_max > 0.0) || !(caps.u_max > 0.0)) {
    throw ValidationError("validate_assumptions: sampling caps must be positive");
  }
  AssumptionReport report;
  constexpr double inf = std::numeric_limits<double>::infinity();

  const auto vs = sample_axis(caps.v_max, 400);
  const auto ws = sample_axis(caps.w_max, 200);

  // Profiles along v (sup over w) and along w (sup over v) for tail-growth detection.
  std::vector<double> chi_v(vs.size(), 0.0), chi_w(ws.size(), 0.0);
  std::vector<double> xi_v(vs.size(), 0.0), xi_w(ws.size(), 0.0);
  std::vector<double> xiv_v(vs.size(), 0.0), xiv_w(ws.size(), 0.0);
  for (std::size_t a = 0; a < vs.size(); ++a) {
    for (std::size_t b = 0; b < ws.size(); ++b) {
      const double v = vs[a];
      const double w = ws[b];
      const double c = std::abs(coeffs.chi(v, w)) * (v + 1.0);
      const double x = std::abs(coeffs.xi(v, w));
      const double xv = std::abs(coeffs.xi.d_dv(v, w));
      chi_v[a] = std::max(chi_v[a], c);
      chi_w[b] = std::max(chi_w[b], c);
      xi_v[a] = std::max(xi_v[a], x);
      xi_w[b] = std::max(xi_w[b], x);
      xiv_v[a] = std::max(xiv_v[a], xv);
      xiv_w[b] = std::max(xiv_w[b], xv);
    }
  }

  report.certified.C_chi = sup_of(chi_v);
  if (grows_over_last_decade(chi_v) || grows_over_last_decade(chi_w) || !std::isfinite(report.certified.C_chi)) {
    report.certified.C_chi = inf;
    report.violations.push_back({"(chi)", "|chi(v,w)| (v+1) is unbounded on the sampled range"});
  }
  report.xi_sup = sup_of(xi_v);
  report.xi_v_sup = sup_of(xiv_v);
  if (grows_over_last_decade(xi_v) || grows_over_last_decade(xi_w)) {
    report.xi_sup = inf;
    report.violations.push_back({"(xi)", "|xi(v,w)| is unbounded on the sampled range"});
  }
  if (grows_over_last_decade(xiv_v) || grows_over_last_decade(xiv_w)) {
    report.xi_v_sup = inf;
    report.violations.push_back({"(xi)", "|d xi / dv| is unbounded on the sampled range"});
  }
  report.certified.C_xi = std::max(report.xi_sup, report.xi_v_sup);

  // (psi): 0 <= s psi'(s) <= C_psi. The argument of psi is u w.
  {
    const auto ss = sample_axis(caps.u_max * caps.w_max, kDenseIntervals);
    std::vector<double> profile(ss.size());
    bool decreasing = false;
    for (std::size_t k = 0; k < ss.size(); ++k) {
      const double g = ss[k] * coeffs.psi.derivative(ss[k]);
      if (g < 0.0) decreasing = true;
      profile[k] = std::isnan(g) ? inf : g;
    }
    report.certified.C_psi = sup_of(profile);
    if (decreasing) {
      report.violations.push_back({"(psi)", "s psi'(s) is negative somewhere: psi must be nondecreasing"});
    }
    if (grows_over_last_decade(profile) || !std::isfinite(report.certified.C_psi)) {
      report.certified.C_psi = inf;
      report.violations.push_back({"(psi)", "s psi'(s) is unbounded on the sampled range"});
    }
  }

  // (phi): phi(u) >= 0 and u |phi'(u)| <= C_phi.
  {
    const auto us = sample_axis(caps.u_max, kDenseIntervals);
    std::vector<double> profile(us.size());
    bool negative = false;
    for (std::size_t k = 0; k < us.size(); ++k) {
      if (coeffs.phi(us[k]) < 0.0) negative = true;
      const double g = us[k] * std::abs(coeffs.phi.derivative(us[k]));
      profile[k] = std::isnan(g) ? inf : g;
    }
    report.certified.C_phi = sup_of(profile);
    if (negative) {
      report.violations.push_back({"(phi)", "phi(u) is negative somewhere"});
    }
    if (grows_over_last_decade(profile) || !std::isfinite(report.certified.C_phi)) {
      report.certified.C_phi = inf;
      report.violations.push_back({"(phi)", "u |phi'(u)| is unbounded on the sampled range"});
    }
  }

  if (declared) {
    check_declared(report.violations, "(chi)", report.certified.C_chi, declared->C_chi);
    check_declared(report.violations, "(xi)", report.certified.C_xi, declared->C_xi);
    check_declared(report.violations, "(psi)", report.certified.C_psi, declared->C_psi);
    check_declared(report.violations, "(phi)", report.certified.C_phi, declared->C_phi);
  }
  return report;
}

}  // namespace taxis
