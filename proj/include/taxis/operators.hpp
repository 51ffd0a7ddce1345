#pragma once

#include <span>
#include <vector>

#include "taxis/grid.hpp"

// Spatial operators in flux (divergence) form on the cell-centered grid. Walls carry zero
// flux, so every operator here sums to zero over the grid up to rounding.
//
// The functions in namespace taxis are OpenMP row-parallel. Each cell's value is computed
// by the same arithmetic regardless of how rows are split across threads, and reductions
// are summed row by row in a fixed order, so results do not depend on the thread count.
// Namespace taxis::reference holds plain serial versions written independently against
// ghost_value; the tests check the parallel kernels against them.

namespace taxis {

/// Face-flux scratch space: (nx + 1) * ny x-faces and nx * (ny + 1) y-faces.
struct StencilWorkspace {
  StencilWorkspace() = default;
  explicit StencilWorkspace(const GridSpec& grid);
  bool matches(const GridSpec& grid) const noexcept;

  int nx = 0;
  int ny = 0;
  std::vector<double> flux_x;
  std::vector<double> flux_y;
};

/// Five-point Neumann Laplacian.
Field laplacian(const Field& f);

/// div(omega grad f), with omega on faces the arithmetic mean of the adjacent cell weights.
Field weighted_laplacian(const Field& f, const Field& weight);

/// div(density * coeff * grad signal), first-order upwind in the density.
///
/// The face velocity is q = mean(coeff) * (signal difference) / h; the flux takes the
/// density from the cell q points away from. Zero q carries zero flux.
Field taxis_divergence(const Field& density, const Field& coeff, const Field& signal,
                       StencilWorkspace* workspace = nullptr);

/// Sum over the faces of a cell of the outward face velocity (positive part) divided by h.
/// One forward-Euler upwind step keeps the density nonnegative iff dt * rate <= 1 in every cell.
Field taxis_outflow_rate(const Field& coeff, const Field& signal);

/// Largest |q| over all interior faces.
double max_face_velocity(const Field& coeff, const Field& signal);

/// (I - dt D Laplacian) f.
Field nonneg_diffusion_matvec(const Field& f, double diffusivity, double dt);

/// A f = mass .* f - dt D div(weight grad f). Symmetric positive definite when mass > 0,
/// weight > 0, D dt >= 0. Null mass or weight means all ones.
struct DiffusionOperator {
  GridSpec grid;
  double diffusivity = 0.0;
  double dt = 0.0;
  const Field* mass = nullptr;
  const Field* weight = nullptr;

  void apply(std::span<const double> in, std::span<double> out) const;
  void diagonal(std::span<double> out) const;
};

/// Dot product with row-wise partial sums added in row order.
double dot(const GridSpec& grid, std::span<const double> a, std::span<const double> b);

namespace reference {

Field laplacian(const Field& f);
Field weighted_laplacian(const Field& f, const Field& weight);
Field taxis_divergence(const Field& density, const Field& coeff, const Field& signal);
Field taxis_outflow_rate(const Field& coeff, const Field& signal);
Field nonneg_diffusion_matvec(const Field& f, double diffusivity, double dt);
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace reference

}  // namespace taxis
