// Serial reference versions of the stencil kernels. They go through ghost_value for
// every neighbour instead of special-casing walls, so they share no code path with the
// parallel kernels they are compared against.

#include <algorithm>

#include "taxis/error.hpp"
#include "taxis/operators.hpp"

namespace taxis::reference {

Field laplacian(const Field& f) {
  const GridSpec& g = f.grid();
  Field out(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double c = f(i, j);
      out(i, j) = (ghost_value(f, i + 1, j) - 2.0 * c + ghost_value(f, i - 1, j)) / (g.dx * g.dx) +
                  (ghost_value(f, i, j + 1) - 2.0 * c + ghost_value(f, i, j - 1)) / (g.dy * g.dy);
    }
  }
  return out;
}

Field weighted_laplacian(const Field& f, const Field& weight) {
  const GridSpec& g = f.grid();
  Field out(g);
  const auto face_weight = [&](int i, int j, int di, int dj) {
    return 0.5 * (weight(i, j) + ghost_value(weight, i + di, j + dj));
  };
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double c = f(i, j);
      const double fe = face_weight(i, j, 1, 0) * (ghost_value(f, i + 1, j) - c);
      const double fw = face_weight(i, j, -1, 0) * (c - ghost_value(f, i - 1, j));
      const double fn = face_weight(i, j, 0, 1) * (ghost_value(f, i, j + 1) - c);
      const double fs = face_weight(i, j, 0, -1) * (c - ghost_value(f, i, j - 1));
      out(i, j) = (fe - fw) / (g.dx * g.dx) + (fn - fs) / (g.dy * g.dy);
    }
  }
  return out;
}

namespace {

// Flux through the face between (i, j) and (i + di, j + dj), oriented from the first cell
// to the second. Ghost cells mirror the interior, so wall faces see no signal gradient.
double face_flux(const Field& rho, const Field& coeff, const Field& signal, int i, int j, int di, int dj) {
  const GridSpec& g = rho.grid();
  const double h = di != 0 ? g.dx : g.dy;
  const double q = 0.5 * (coeff(i, j) + ghost_value(coeff, i + di, j + dj)) *
                   (ghost_value(signal, i + di, j + dj) - signal(i, j)) / h;
  if (q > 0.0) return q * rho(i, j);
  if (q < 0.0) return q * ghost_value(rho, i + di, j + dj);
  return 0.0;
}

}  // namespace

Field taxis_divergence(const Field& density, const Field& coeff, const Field& signal) {
  const GridSpec& g = density.grid();
  Field out(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double east = face_flux(density, coeff, signal, i, j, 1, 0);
      const double west = -face_flux(density, coeff, signal, i, j, -1, 0);
      const double north = face_flux(density, coeff, signal, i, j, 0, 1);
      const double south = -face_flux(density, coeff, signal, i, j, 0, -1);
      out(i, j) = (east - west) / g.dx + (north - south) / g.dy;
    }
  }
  return out;
}

Field taxis_outflow_rate(const Field& coeff, const Field& signal) {
  const GridSpec& g = coeff.grid();
  Field out(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      double rate = 0.0;
      const int offsets[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      for (const auto& o : offsets) {
        const double h = o[0] != 0 ? g.dx : g.dy;
        const double q_out = 0.5 * (coeff(i, j) + ghost_value(coeff, i + o[0], j + o[1])) *
                             (ghost_value(signal, i + o[0], j + o[1]) - signal(i, j)) / h;
        rate += std::max(0.0, q_out) / h;
      }
      out(i, j) = rate;
    }
  }
  return out;
}

Field nonneg_diffusion_matvec(const Field& f, double diffusivity, double dt) {
  if (diffusivity < 0.0 || dt < 0.0) throw ValidationError("nonneg_diffusion_matvec: negative diffusivity or dt");
  const Field lap = reference::laplacian(f);
  Field out(f.grid());
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = f[k] - dt * diffusivity * lap[k];
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

}  // namespace taxis::reference
