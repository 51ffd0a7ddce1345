#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "taxis/config.hpp"
#include "taxis/diagnostics.hpp"
#include "taxis/grid.hpp"
#include "taxis/solver.hpp"

namespace taxis {

struct RunOptions {
  /// When set, writes metadata.ini, diagnostics.csv and snap_*.txcs into this directory.
  std::optional<std::filesystem::path> output_dir;
  bool keep_snapshots = true;
  /// Stop as soon as steady_state_reached(history, steady_window, steady_tol) holds.
  bool stop_when_steady = false;
  std::size_t steady_window = 100;
  double steady_tol = 1e-6;
  /// Called after every step with the new state.
  std::function<void(const State&, const StepReport&)> on_step;
};

struct RunResult {
  State final_state;
  std::vector<DiagnosticsRecord> records;
  SnapshotSeries snapshots;
  std::size_t steps = 0;
  double initial_admissible_dt = 0.0;
  std::optional<double> steady_time;  // time at which the steady-state test first passed
  double wall_seconds = 0.0;
};

/// Integrates from t = 0 to cfg.solver.t_end. Steps are min(dt, stability bound) and are
/// shortened to land exactly on record times (multiples of record_every), snapshot times
/// (multiples of snapshot_every) and t_end. A final snapshot is taken at t_end.
RunResult simulate(const RunConfig& cfg, const RunOptions& options = {});

/// Same, from an explicit initial state.
RunResult simulate(const RunConfig& cfg, const State& initial, const RunOptions& options);

/// Contents of metadata.ini: the resolved configuration plus a [run] section.
std::string run_metadata(const RunConfig& cfg, double initial_admissible_dt, const AssumptionReport& report);

}  // namespace taxis
