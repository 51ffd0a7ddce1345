#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "taxis/grid.hpp"
#include "taxis/solver.hpp"

namespace taxis {

enum class Summation { pairwise, compensated };

/// Integral of a field: sum of values times dx dy.
double mass(const Field& f, Summation summation = Summation::pairwise);

/// z below this floor makes the 1/z weight of the functional undefined.
inline constexpr double kZFloor = 1e-30;

/// F = int v ln v + 1/2 int |grad z|^2 / z, with 0 ln 0 = 0. Gradients are one-sided
/// differences across interior faces with z averaged onto the face. Returns nullopt when
/// min z <= kZFloor or v has negative entries.
std::optional<double> functional_F(const Field& v, const Field& z);

struct DiagnosticsRecord {
  double t = 0.0;
  double mass_u = 0.0;
  double mass_v = 0.0;
  double total_w = 0.0;
  std::array<double, 4> min{};  // u, v, w, z
  std::array<double, 4> max{};
  std::optional<double> functional_F;
  double negativity_excess = 0.0;  // integral of the negative parts of all four fields
  int cg_iters_max = 0;
  double cg_residual_max = 0.0;
  /// max over fields of ||f(t) - f(t_prev)||_1 / ((t - t_prev) ||f(0)||_1); nullopt for the first record.
  std::optional<double> change_rate;
};

/// Builds records along a run. Change rates are normalized by each field's initial L1 norm,
/// which for u and v is the conserved mass.
class DiagnosticsTracker {
 public:
  explicit DiagnosticsTracker(const State& initial);

  /// Accumulates solver statistics of a step for the next record.
  void note_step(const StepReport& report);

  DiagnosticsRecord record(const State& state);
  const std::vector<DiagnosticsRecord>& history() const noexcept { return history_; }

 private:
  std::array<double, 4> reference_norm_{};
  std::optional<State> previous_;
  int pending_iters_ = 0;
  double pending_residual_ = 0.0;
  std::vector<DiagnosticsRecord> history_;
};

/// Diagnostics of a single state without change rate or solver statistics.
DiagnosticsRecord compute_diagnostics(const State& state);

/// True iff the last `window` records all have a change rate below tol.
bool steady_state_reached(std::span<const DiagnosticsRecord> history, std::size_t window = 100, double tol = 1e-6);

/// Ordered snapshots of one run, all on one grid.
struct SnapshotSeries {
  std::vector<State> snapshots;
};

struct DifferenceNorms {
  double t = 0.0;
  std::array<double, 4> l1{};    // integral of |A - B|
  std::array<double, 4> linf{};  // max |A - B|
  std::array<std::size_t, 4> positive{};  // cells with A > B
  std::array<std::size_t, 4> negative{};  // cells with A < B
};

struct DifferenceSeries {
  std::vector<State> differences;  // A - B per snapshot
  std::vector<DifferenceNorms> norms;
};

/// Per-snapshot differences A - B. Throws ValidationError when grids, counts or times differ.
DifferenceSeries compare_runs(const SnapshotSeries& a, const SnapshotSeries& b);

}  // namespace taxis
