#include "taxis/driver.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include "taxis/error.hpp"
#include "taxis/integrator.hpp"
#include "taxis/snapshot.hpp"
#include "taxis/version.hpp"

namespace taxis {

namespace {

// Index of the last multiple of `interval` that does not pass t_end.
long long last_multiple(double interval, double t_end) {
  return static_cast<long long>(std::floor(t_end / interval * (1.0 + 1e-12)));
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

std::string run_metadata(const RunConfig& cfg, double initial_admissible_dt, const AssumptionReport& report) {
  std::ostringstream os;
  os.precision(17);
  os << to_text(cfg) << "\n[run]\n"
     << "code_version = " << kVersion << '\n'
     << "started = " << utc_timestamp() << '\n'
     << "initial_admissible_dt = " << initial_admissible_dt << '\n'
     << "certified_C_chi = " << report.certified.C_chi << '\n'
     << "certified_C_xi = " << report.certified.C_xi << '\n'
     << "certified_C_psi = " << report.certified.C_psi << '\n'
     << "certified_C_phi = " << report.certified.C_phi << '\n';
  return os.str();
}

RunResult simulate(const RunConfig& cfg, const RunOptions& options) {
  validate(cfg);
  return simulate(cfg, build_initial_state(cfg.grid(), cfg.initial), options);
}

RunResult simulate(const RunConfig& cfg, const State& initial, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  validate(cfg.solver);
  const AssumptionReport report = validate_model(cfg.model);
  const ModelParams& params = cfg.model;
  const CoefficientSet coeffs = params.coefficients();
  const double t_end = cfg.solver.t_end;
  const double record_every = cfg.output.record_every;
  const double snapshot_every = cfg.output.snapshot_every;

  RunResult result;
  result.final_state = initial;
  State& state = result.final_state;
  result.initial_admissible_dt = admissible_dt(state, params, cfg.solver);

  std::ofstream csv;
  std::optional<std::filesystem::path> dir = options.output_dir;
  if (dir) {
    std::error_code ec;
    std::filesystem::create_directories(*dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir->string() + "': " + ec.message());
    std::ofstream meta(*dir / "metadata.ini");
    if (!meta) throw IoError("cannot write '" + (*dir / "metadata.ini").string() + "'");
    meta << run_metadata(cfg, result.initial_admissible_dt, report);
    csv.open(*dir / "diagnostics.csv");
    if (!csv) throw IoError("cannot write '" + (*dir / "diagnostics.csv").string() + "'");
    csv << kDiagnosticsHeader << '\n';
  }

  DiagnosticsTracker tracker(state);
  std::size_t snapshot_index = 0;
  const auto take_record = [&] {
    const DiagnosticsRecord r = tracker.record(state);
    if (csv.is_open()) csv << diagnostics_row(r) << '\n';
  };
  const auto take_snapshot = [&] {
    if (dir) write_snapshot(state, *dir / snapshot_name(snapshot_index));
    if (options.keep_snapshots) result.snapshots.snapshots.push_back(state);
    ++snapshot_index;
  };

  const long long last_record = last_multiple(record_every, t_end);
  const long long last_snapshot = last_multiple(snapshot_every, t_end);
  long long next_record = 1;
  long long next_snapshot = 1;
  take_record();
  take_snapshot();

  SolverConfig step_cfg = cfg.solver;
  bool stopped = false;
  while (state.t < t_end && !stopped) {
    const double record_t = next_record <= last_record ? next_record * record_every : t_end;
    const double snapshot_t = next_snapshot <= last_snapshot ? next_snapshot * snapshot_every : t_end;
    const double event_t = std::min({record_t, snapshot_t, t_end});

    double dt = std::min(cfg.solver.dt, stability_bound(state, params, cfg.solver));
    if (!(dt > 0.0)) {
      throw NumericalError("stability bound collapsed to zero at t = " + std::to_string(state.t));
    }
    bool lands = false;
    if (state.t + dt >= event_t - 1e-9 * dt) {
      dt = event_t - state.t;
      lands = true;
    }
    step_cfg.dt = dt;
    auto [next, step_report] = imex_step(state, params, coeffs, step_cfg);
    if (lands) next.t = event_t;
    state = std::move(next);
    ++result.steps;
    tracker.note_step(step_report);
    if (options.on_step) options.on_step(state, step_report);

    if (!lands) continue;
    if (next_record <= last_record && event_t == record_t) {
      take_record();
      ++next_record;
      if (options.stop_when_steady && !result.steady_time &&
          steady_state_reached(tracker.history(), options.steady_window, options.steady_tol)) {
        result.steady_time = state.t;
        stopped = true;
      }
    }
    const bool at_snapshot = next_snapshot <= last_snapshot && event_t == snapshot_t;
    if (at_snapshot) ++next_snapshot;
    if (at_snapshot || state.t >= t_end || stopped) take_snapshot();
  }

  result.records = tracker.history();
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace taxis
