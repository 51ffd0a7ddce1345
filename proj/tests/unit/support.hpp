#pragma once

#include <cmath>
#include <random>

#include "taxis/grid.hpp"

namespace taxis::testing {

inline Field random_field(const GridSpec& g, std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Field f(g);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = dist(rng);
  return f;
}

inline State random_state(const GridSpec& g, std::mt19937_64& rng) {
  State s;
  s.u = random_field(g, rng, 0.1, 1.0);
  s.v = random_field(g, rng, 0.1, 1.0);
  s.w = random_field(g, rng, 0.1, 1.0);
  s.z = random_field(g, rng, 0.1, 1.0);
  return s;
}

template <class F>
Field sample(const GridSpec& g, F&& f) {
  Field out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out(i, j) = f(g.x_center(i), g.y_center(j));
  return out;
}

inline double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

inline double plain_sum(const Field& f) {
  long double s = 0.0L;
  for (std::size_t k = 0; k < f.size(); ++k) s += f[k];
  return static_cast<double>(s);
}

}  // namespace taxis::testing
