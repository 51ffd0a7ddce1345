#include "taxis/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "taxis/error.hpp"

namespace taxis {

namespace {

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 64) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += x[k];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

double compensated_sum(const double* x, std::size_t n) {
  // Neumaier's variant of Kahan summation.
  double s = 0.0;
  double c = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = s + x[k];
    if (std::abs(s) >= std::abs(x[k])) {
      c += (s - t) + x[k];
    } else {
      c += (x[k] - t) + s;
    }
    s = t;
  }
  return s + c;
}

double l1_norm(const Field& f) {
  std::vector<double> a(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) a[k] = std::abs(f[k]);
  return pairwise_sum(a.data(), a.size()) * f.grid().cell_area();
}

double l1_distance(const Field& a, const Field& b) {
  std::vector<double> d(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) d[k] = std::abs(a[k] - b[k]);
  return pairwise_sum(d.data(), d.size()) * a.grid().cell_area();
}

}  // namespace

double mass(const Field& f, Summation summation) {
  const double sum = summation == Summation::compensated ? compensated_sum(f.data(), f.size())
                                                         : pairwise_sum(f.data(), f.size());
  return sum * f.grid().cell_area();
}

std::optional<double> functional_F(const Field& v, const Field& z) {
  const GridSpec& g = v.grid();
  const auto [zmin, zmax] = std::minmax_element(z.values().begin(), z.values().end());
  (void)zmax;
  if (!(*zmin > kZFloor)) return std::nullopt;
  if (std::any_of(v.values().begin(), v.values().end(), [](double x) { return x < 0.0; })) return std::nullopt;

  std::vector<double> entropy(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) entropy[k] = v[k] > 0.0 ? v[k] * std::log(v[k]) : 0.0;

  std::vector<double> grad;
  grad.reserve(static_cast<std::size_t>(2) * g.size());
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i + 1 < g.nx; ++i) {
      const double d = (z(i + 1, j) - z(i, j)) / g.dx;
      grad.push_back(d * d / (0.5 * (z(i + 1, j) + z(i, j))));
    }
  }
  for (int j = 0; j + 1 < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double d = (z(i, j + 1) - z(i, j)) / g.dy;
      grad.push_back(d * d / (0.5 * (z(i, j + 1) + z(i, j))));
    }
  }
  const double area = g.cell_area();
  return pairwise_sum(entropy.data(), entropy.size()) * area +
         0.5 * pairwise_sum(grad.data(), grad.size()) * area;
}

DiagnosticsRecord compute_diagnostics(const State& s) {
  DiagnosticsRecord r;
  r.t = s.t;
  r.mass_u = mass(s.u);
  r.mass_v = mass(s.v);
  r.total_w = mass(s.w);
  double negative = 0.0;
  for (int f = 0; f < 4; ++f) {
    const Field& field = s[static_cast<Species>(f)];
    const auto [lo, hi] = std::minmax_element(field.values().begin(), field.values().end());
    r.min[f] = *lo;
    r.max[f] = *hi;
    for (double x : field.values()) negative += std::max(0.0, -x);
  }
  r.negativity_excess = negative * s.grid().cell_area();
  r.functional_F = functional_F(s.v, s.z);
  return r;
}

DiagnosticsTracker::DiagnosticsTracker(const State& initial) {
  for (int f = 0; f < 4; ++f) reference_norm_[f] = l1_norm(initial[static_cast<Species>(f)]);
}

void DiagnosticsTracker::note_step(const StepReport& report) {
  pending_iters_ = std::max(pending_iters_, report.max_iterations());
  pending_residual_ = std::max(pending_residual_, report.max_residual());
}

DiagnosticsRecord DiagnosticsTracker::record(const State& state) {
  DiagnosticsRecord r = compute_diagnostics(state);
  r.cg_iters_max = pending_iters_;
  r.cg_residual_max = pending_residual_;
  pending_iters_ = 0;
  pending_residual_ = 0.0;
  if (previous_ && state.t > previous_->t) {
    const double elapsed = state.t - previous_->t;
    double rate = 0.0;
    for (int f = 0; f < 4; ++f) {
      if (reference_norm_[f] == 0.0) continue;
      const Species sp = static_cast<Species>(f);
      rate = std::max(rate, l1_distance(state[sp], (*previous_)[sp]) / (elapsed * reference_norm_[f]));
    }
    r.change_rate = rate;
  }
  previous_ = state;
  history_.push_back(r);
  return r;
}

bool steady_state_reached(std::span<const DiagnosticsRecord> history, std::size_t window, double tol) {
  if (window == 0 || history.size() < window) return false;
  return std::all_of(history.end() - static_cast<std::ptrdiff_t>(window), history.end(),
                     [tol](const DiagnosticsRecord& r) { return r.change_rate && *r.change_rate < tol; });
}

DifferenceSeries compare_runs(const SnapshotSeries& a, const SnapshotSeries& b) {
  if (a.snapshots.size() != b.snapshots.size()) {
    throw ValidationError("compare_runs: series have " + std::to_string(a.snapshots.size()) + " and " +
                          std::to_string(b.snapshots.size()) + " snapshots");
  }
  DifferenceSeries out;
  for (std::size_t s = 0; s < a.snapshots.size(); ++s) {
    const State& sa = a.snapshots[s];
    const State& sb = b.snapshots[s];
    if (!(sa.grid() == sb.grid())) throw ValidationError("compare_runs: snapshot grids differ");
    if (std::abs(sa.t - sb.t) > 1e-9 * std::max(1.0, std::abs(sa.t))) {
      throw ValidationError("compare_runs: snapshot times differ (" + std::to_string(sa.t) + " vs " +
                            std::to_string(sb.t) + ")");
    }
    const GridSpec& g = sa.grid();
    State diff{Field(g), Field(g), Field(g), Field(g), sa.t};
    DifferenceNorms norms;
    norms.t = sa.t;
    for (int f = 0; f < 4; ++f) {
      const Species sp = static_cast<Species>(f);
      Field& d = diff[sp];
      double linf = 0.0;
      for (std::size_t k = 0; k < g.size(); ++k) {
        d[k] = sa[sp][k] - sb[sp][k];
        linf = std::max(linf, std::abs(d[k]));
        if (d[k] > 0.0) ++norms.positive[f];
        if (d[k] < 0.0) ++norms.negative[f];
      }
      norms.l1[f] = l1_norm(d);
      norms.linf[f] = linf;
    }
    out.differences.push_back(std::move(diff));
    out.norms.push_back(norms);
  }
  return out;
}

}  // namespace taxis
