#include "taxis/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "taxis/error.hpp"

namespace taxis {

namespace {

void require_same_grid(const Field& a, const Field& b, const char* op) {
  if (!(a.grid() == b.grid()) || a.size() != b.size()) {
    throw ValidationError(std::string(op) + ": fields live on different grids");
  }
}

// Upwind flux for face velocity q between an "upstream-if-positive" cell and its neighbour.
inline double upwind_flux(double q, double left, double right) noexcept {
  if (q > 0.0) return q * left;
  if (q < 0.0) return q * right;
  return 0.0;
}

}  // namespace

StencilWorkspace::StencilWorkspace(const GridSpec& grid)
    : nx(grid.nx),
      ny(grid.ny),
      flux_x(static_cast<std::size_t>(grid.nx + 1) * grid.ny, 0.0),
      flux_y(static_cast<std::size_t>(grid.nx) * (grid.ny + 1), 0.0) {}

bool StencilWorkspace::matches(const GridSpec& grid) const noexcept { return nx == grid.nx && ny == grid.ny; }

Field laplacian(const Field& f) {
  const GridSpec& g = f.grid();
  Field out(g);
  const double* in = f.data();
  double* res = out.data();
  const int nx = g.nx;
  const int ny = g.ny;
  const double idx2 = 1.0 / (g.dx * g.dx);
  const double idy2 = 1.0 / (g.dy * g.dy);

#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    const double* row = in + static_cast<std::size_t>(j) * nx;
    const double* south = j > 0 ? row - nx : nullptr;
    const double* north = j + 1 < ny ? row + nx : nullptr;
    double* orow = res + static_cast<std::size_t>(j) * nx;
    for (int i = 0; i < nx; ++i) {
      const double c = row[i];
      const double east = i + 1 < nx ? row[i + 1] - c : 0.0;
      const double west = i > 0 ? c - row[i - 1] : 0.0;
      const double n = north ? north[i] - c : 0.0;
      const double s = south ? c - south[i] : 0.0;
      orow[i] = (east - west) * idx2 + (n - s) * idy2;
    }
  }
  return out;
}

Field weighted_laplacian(const Field& f, const Field& weight) {
  require_same_grid(f, weight, "weighted_laplacian");
  const GridSpec& g = f.grid();
  Field out(g);
  const double* in = f.data();
  const double* wt = weight.data();
  double* res = out.data();
  const int nx = g.nx;
  const int ny = g.ny;
  const double idx2 = 1.0 / (g.dx * g.dx);
  const double idy2 = 1.0 / (g.dy * g.dy);

#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * nx + i;
      const double c = in[k];
      const double east = i + 1 < nx ? 0.5 * (wt[k] + wt[k + 1]) * (in[k + 1] - c) : 0.0;
      const double west = i > 0 ? 0.5 * (wt[k] + wt[k - 1]) * (c - in[k - 1]) : 0.0;
      const double north = j + 1 < ny ? 0.5 * (wt[k] + wt[k + nx]) * (in[k + nx] - c) : 0.0;
      const double south = j > 0 ? 0.5 * (wt[k] + wt[k - nx]) * (c - in[k - nx]) : 0.0;
      res[k] = (east - west) * idx2 + (north - south) * idy2;
    }
  }
  return out;
}

Field taxis_divergence(const Field& density, const Field& coeff, const Field& signal, StencilWorkspace* workspace) {
  require_same_grid(density, coeff, "taxis_divergence");
  require_same_grid(density, signal, "taxis_divergence");
  const GridSpec& g = density.grid();
  StencilWorkspace local;
  if (workspace == nullptr || !workspace->matches(g)) {
    local = StencilWorkspace(g);
    if (workspace != nullptr) *workspace = local;
  }
  StencilWorkspace& ws = workspace != nullptr ? *workspace : local;

  const int nx = g.nx;
  const int ny = g.ny;
  const double* rho = density.data();
  const double* c = coeff.data();
  const double* s = signal.data();
  double* fx = ws.flux_x.data();
  double* fy = ws.flux_y.data();
  const double idx = 1.0 / g.dx;
  const double idy = 1.0 / g.dy;

  // x-faces: face k of row j sits between cells k-1 and k; faces 0 and nx are walls.
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    const std::size_t row = static_cast<std::size_t>(j) * nx;
    double* frow = fx + static_cast<std::size_t>(j) * (nx + 1);
    frow[0] = 0.0;
    frow[nx] = 0.0;
    for (int k = 1; k < nx; ++k) {
      const std::size_t l = row + k - 1;
      const std::size_t r = row + k;
      const double q = 0.5 * (c[l] + c[r]) * (s[r] - s[l]) * idx;
      frow[k] = upwind_flux(q, rho[l], rho[r]);
    }
  }

  // y-faces: face row k sits between cell rows k-1 and k; rows 0 and ny are walls.
#pragma omp parallel for schedule(static)
  for (int k = 0; k <= ny; ++k) {
    double* frow = fy + static_cast<std::size_t>(k) * nx;
    if (k == 0 || k == ny) {
      std::fill(frow, frow + nx, 0.0);
      continue;
    }
    const std::size_t below = static_cast<std::size_t>(k - 1) * nx;
    const std::size_t above = static_cast<std::size_t>(k) * nx;
    for (int i = 0; i < nx; ++i) {
      const double q = 0.5 * (c[below + i] + c[above + i]) * (s[above + i] - s[below + i]) * idy;
      frow[i] = upwind_flux(q, rho[below + i], rho[above + i]);
    }
  }

  Field out(g);
  double* res = out.data();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    const double* fxr = fx + static_cast<std::size_t>(j) * (nx + 1);
    const double* fys = fy + static_cast<std::size_t>(j) * nx;
    const double* fyn = fys + nx;
    double* orow = res + static_cast<std::size_t>(j) * nx;
    for (int i = 0; i < nx; ++i) {
      orow[i] = (fxr[i + 1] - fxr[i]) * idx + (fyn[i] - fys[i]) * idy;
    }
  }
  return out;
}

Field taxis_outflow_rate(const Field& coeff, const Field& signal) {
  require_same_grid(coeff, signal, "taxis_outflow_rate");
  const GridSpec& g = coeff.grid();
  const int nx = g.nx;
  const int ny = g.ny;
  const double* c = coeff.data();
  const double* s = signal.data();
  const double idx = 1.0 / g.dx;
  const double idy = 1.0 / g.dy;
  Field out(g);
  double* res = out.data();

#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * nx + i;
      double rate = 0.0;
      if (i + 1 < nx) rate += std::max(0.0, 0.5 * (c[k] + c[k + 1]) * (s[k + 1] - s[k]) * idx) * idx;
      if (i > 0) rate += std::max(0.0, 0.5 * (c[k] + c[k - 1]) * (s[k - 1] - s[k]) * idx) * idx;
      if (j + 1 < ny) rate += std::max(0.0, 0.5 * (c[k] + c[k + nx]) * (s[k + nx] - s[k]) * idy) * idy;
      if (j > 0) rate += std::max(0.0, 0.5 * (c[k] + c[k - nx]) * (s[k - nx] - s[k]) * idy) * idy;
      res[k] = rate;
    }
  }
  return out;
}

double max_face_velocity(const Field& coeff, const Field& signal) {
  require_same_grid(coeff, signal, "max_face_velocity");
  const GridSpec& g = coeff.grid();
  const int nx = g.nx;
  const int ny = g.ny;
  const double* c = coeff.data();
  const double* s = signal.data();
  double vmax = 0.0;
#pragma omp parallel for schedule(static) reduction(max : vmax)
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * nx + i;
      if (i + 1 < nx) vmax = std::max(vmax, std::abs(0.5 * (c[k] + c[k + 1]) * (s[k + 1] - s[k]) / g.dx));
      if (j + 1 < ny) vmax = std::max(vmax, std::abs(0.5 * (c[k] + c[k + nx]) * (s[k + nx] - s[k]) / g.dy));
    }
  }
  return vmax;
}

Field nonneg_diffusion_matvec(const Field& f, double diffusivity, double dt) {
  if (diffusivity < 0.0 || dt < 0.0) {
    throw ValidationError("nonneg_diffusion_matvec: diffusivity and dt must be nonnegative");
  }
  DiffusionOperator op{f.grid(), diffusivity, dt, nullptr, nullptr};
  Field out(f.grid());
  op.apply(f.values(), out.values());
  return out;
}

void DiffusionOperator::apply(std::span<const double> in, std::span<double> out) const {
  const int nx = grid.nx;
  const int ny = grid.ny;
  const double ax = dt * diffusivity / (grid.dx * grid.dx);
  const double ay = dt * diffusivity / (grid.dy * grid.dy);
  const double* m = mass ? mass->data() : nullptr;
  const double* wt = weight ? weight->data() : nullptr;
  const double* f = in.data();
  double* res = out.data();

#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * nx + i;
      const double c = f[k];
      double east = i + 1 < nx ? f[k + 1] - c : 0.0;
      double west = i > 0 ? c - f[k - 1] : 0.0;
      double north = j + 1 < ny ? f[k + nx] - c : 0.0;
      double south = j > 0 ? c - f[k - nx] : 0.0;
      if (wt) {
        if (i + 1 < nx) east *= 0.5 * (wt[k] + wt[k + 1]);
        if (i > 0) west *= 0.5 * (wt[k] + wt[k - 1]);
        if (j + 1 < ny) north *= 0.5 * (wt[k] + wt[k + nx]);
        if (j > 0) south *= 0.5 * (wt[k] + wt[k - nx]);
      }
      const double mc = m ? m[k] * c : c;
      res[k] = mc - (ax * (east - west) + ay * (north - south));
    }
  }
}

void DiffusionOperator::diagonal(std::span<double> out) const {
  const int nx = grid.nx;
  const int ny = grid.ny;
  const double ax = dt * diffusivity / (grid.dx * grid.dx);
  const double ay = dt * diffusivity / (grid.dy * grid.dy);
  const double* m = mass ? mass->data() : nullptr;
  const double* wt = weight ? weight->data() : nullptr;

#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * nx + i;
      const auto face = [&](std::size_t other) { return wt ? 0.5 * (wt[k] + wt[other]) : 1.0; };
      double d = m ? m[k] : 1.0;
      if (i + 1 < nx) d += ax * face(k + 1);
      if (i > 0) d += ax * face(k - 1);
      if (j + 1 < ny) d += ay * face(k + nx);
      if (j > 0) d += ay * face(k - nx);
      out[k] = d;
    }
  }
}

double dot(const GridSpec& grid, std::span<const double> a, std::span<const double> b) {
  const int nx = grid.nx;
  const int ny = grid.ny;
  std::vector<double> partial(static_cast<std::size_t>(ny), 0.0);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    const std::size_t row = static_cast<std::size_t>(j) * nx;
    double s = 0.0;
    for (int i = 0; i < nx; ++i) s += a[row + i] * b[row + i];
    partial[j] = s;
  }
  return std::accumulate(partial.begin(), partial.end(), 0.0);
}

}  // namespace taxis
