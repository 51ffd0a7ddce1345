#include "taxis/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>

#include "taxis/driver.hpp"
#include "taxis/error.hpp"
#include "taxis/snapshot.hpp"

namespace taxis {

namespace {

int report_error(const Error& e, std::ostream& err) {
  nlohmann::json j;
  switch (e.code()) {
    case ExitCode::validation: j["error"] = "validation"; break;
    case ExitCode::numerical: j["error"] = "numerical"; break;
    case ExitCode::io: j["error"] = "io"; break;
    case ExitCode::ok: j["error"] = "unknown"; break;
  }
  j["message"] = e.what();
  if (const auto* v = dynamic_cast<const ValidationError*>(&e); v != nullptr && !v->violations().empty()) {
    j["violations"] = v->violations();
  }
  if (const auto* c = dynamic_cast<const CflError*>(&e); c != nullptr) {
    j["error"] = "cfl";
    j["admissible_dt"] = c->admissible_dt();
  }
  err << j.dump() << std::endl;
  return static_cast<int>(e.code());
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    return report_error(e, err);
  } catch (const std::filesystem::filesystem_error& e) {
    return report_error(IoError(e.what()), err);
  }
}

std::filesystem::path series_dir(const RunConfig& cfg, const std::string& suffix = "") {
  return std::filesystem::path(cfg.output.dir) / (cfg.output.series + suffix);
}

}  // namespace

int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(cfg);
    RunOptions options;
    options.output_dir = series_dir(cfg);
    options.keep_snapshots = false;
    const RunResult r = simulate(cfg, options);
    const DiagnosticsRecord& first = r.records.front();
    const DiagnosticsRecord& last = r.records.back();
    out << std::setprecision(10);
    out << "variant " << to_string(cfg.model.variant) << ": " << r.steps << " steps to t = " << r.final_state.t
        << " in " << r.wall_seconds << " s\n"
        << "initial admissible dt = " << r.initial_admissible_dt << '\n'
        << "mass_u drift = " << std::abs(last.mass_u - first.mass_u) / first.mass_u
        << ", mass_v drift = " << std::abs(last.mass_v - first.mass_v) / first.mass_v << '\n'
        << "output: " << options.output_dir->string() << '\n';
    return 0;
  });
}

int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig cfg_a = cfg;
    RunConfig cfg_b = cfg;
    cfg_a.model.variant = cfg.compare.variant_a;
    cfg_b.model.variant = cfg.compare.variant_b;
    cfg_a.output.series = cfg.output.series + "_" + to_string(cfg.compare.variant_a);
    cfg_b.output.series = cfg.output.series + "_" + to_string(cfg.compare.variant_b);
    if (cfg.compare.variant_a == cfg.compare.variant_b) {
      cfg_b.output.series += "_b";
      err << "warning: both compared variants are '" << to_string(cfg.compare.variant_a)
          << "'; differences will vanish\n";
    }
    validate(cfg_a);
    validate(cfg_b);

    RunOptions options_a;
    options_a.output_dir = series_dir(cfg_a);
    RunOptions options_b;
    options_b.output_dir = series_dir(cfg_b);
    const RunResult a = simulate(cfg_a, options_a);
    const RunResult b = simulate(cfg_b, options_b);
    const DifferenceSeries diff = compare_runs(a.snapshots, b.snapshots);

    const auto diff_dir = series_dir(cfg, "_diff");
    std::filesystem::create_directories(diff_dir);
    std::ofstream norms(diff_dir / "norms.csv");
    if (!norms) throw IoError("cannot write '" + (diff_dir / "norms.csv").string() + "'");
    norms << kNormsHeader << '\n' << std::setprecision(17);
    for (std::size_t s = 0; s < diff.norms.size(); ++s) {
      write_snapshot(diff.differences[s], diff_dir / snapshot_name(s));
      const DifferenceNorms& n = diff.norms[s];
      norms << n.t;
      for (double x : n.l1) norms << ',' << x;
      for (double x : n.linf) norms << ',' << x;
      for (auto c : n.positive) norms << ',' << c;
      for (auto c : n.negative) norms << ',' << c;
      norms << '\n';
    }

    const DifferenceNorms& final_norms = diff.norms.back();
    out << std::setprecision(6);
    out << "A = " << to_string(cfg_a.model.variant) << ", B = " << to_string(cfg_b.model.variant)
        << "; differences A - B at t = " << final_norms.t << '\n';
    for (int f = 0; f < 4; ++f) {
      out << "  " << species_names[f] << ": L1 = " << final_norms.l1[f] << ", Linf = " << final_norms.linf[f]
          << ", cells A>B = " << final_norms.positive[f] << ", cells A<B = " << final_norms.negative[f] << '\n';
    }
    // Sign of the u difference where VEGF peaks in run B.
    const Field& zb = b.final_state.z;
    const auto peak = static_cast<std::size_t>(
        std::max_element(zb.values().begin(), zb.values().end()) - zb.values().begin());
    out << "  u(A) - u(B) at the VEGF maximum of B: " << diff.differences.back().u[peak] << '\n';
    out << "output: " << diff_dir.string() << '\n';
    return 0;
  });
}

int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto violations = check_parameters(cfg.model);
    if (!violations.empty()) {
      std::vector<std::string> lines;
      for (const auto& v : violations) lines.push_back(v.hypothesis + ": " + v.message);
      std::string msg = "model parameters violate " + std::to_string(lines.size()) + " constraint(s)";
      for (const auto& l : lines) msg += "\n  " + l;
      throw ValidationError(msg, lines);
    }
    const CoefficientSet coeffs = cfg.model.coefficients();
    const AssumptionReport report = validate_assumptions(coeffs, cfg.model.caps, cfg.model.declared_bounds);
    out << std::setprecision(8);
    out << "coefficients: chi = " << coeffs.chi.to_string() << ", xi = " << coeffs.xi.to_string()
        << ", psi = " << coeffs.psi.to_string() << ", phi = " << coeffs.phi.to_string() << '\n';
    out << "sampled on v in [0, " << cfg.model.caps.v_max << "], w in [0, " << cfg.model.caps.w_max
        << "], u in [0, " << cfg.model.caps.u_max << "] plus tails to 1e6 x cap\n";
    out << "hypothesis  quantity                 certified bound\n";
    out << "(chi)       sup |chi| (v+1)          " << report.certified.C_chi << '\n';
    out << "(xi)        sup |xi|                 " << report.xi_sup << '\n';
    out << "(xi)        sup |xi_v|               " << report.xi_v_sup << '\n';
    out << "(xi)        C_xi                     " << report.certified.C_xi << '\n';
    out << "(psi)       sup s psi'(s)            " << report.certified.C_psi << '\n';
    out << "(phi)       sup u |phi'(u)|          " << report.certified.C_phi << '\n';
    if (report.ok()) {
      out << "all hypotheses hold\n";
      return 0;
    }
    std::vector<std::string> lines;
    for (const auto& v : report.violations) lines.push_back(v.hypothesis + ": " + v.message);
    std::string msg = "hypotheses violated";
    for (const auto& l : lines) msg += "\n  " + l;
    throw ValidationError(msg, lines);
  });
}

}  // namespace taxis
