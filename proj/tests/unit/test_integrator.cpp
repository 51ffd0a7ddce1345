#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "taxis/error.hpp"
#include "taxis/integrator.hpp"

using namespace taxis;
using taxis::testing::plain_sum;
using taxis::testing::random_field;
using taxis::testing::random_state;

namespace {

double min_of(const Field& f) {
  double m = f[0];
  for (std::size_t k = 0; k < f.size(); ++k) m = std::min(m, f[k]);
  return m;
}

double max_of(const Field& f) {
  double m = f[0];
  for (std::size_t k = 0; k < f.size(); ++k) m = std::max(m, f[k]);
  return m;
}

}  // namespace

TEST_SUITE("integrator") {
  TEST_CASE("doubling the sensitivity halves the stability bound") {
    // Steep random v on a fine grid so taxis outflow dominates every reaction rate.
    std::mt19937_64 rng(41);
    const GridSpec g = make_grid(20, 20, 0.2, 0.2);
    State s = random_state(g, rng);
    s.v = random_field(g, rng, 0.0, 10.0);
    ModelParams p;
    p.xi_family = "constant(0)";
    p.reaction.mu_vz = 1e-6;
    p.reaction.beta = 1e-6;
    const SolverConfig cfg;
    p.chi_family = "constant(1)";
    const double b1 = stability_bound(s, p, cfg);
    p.chi_family = "constant(2)";
    const double b2 = stability_bound(s, p, cfg);
    CHECK(std::isfinite(b1));
    CHECK(b2 == doctest::Approx(b1 / 2.0).epsilon(1e-12));
  }

  TEST_CASE("stability bound is infinite when nothing can be lost") {
    const GridSpec g = make_grid(8, 8, 1.0, 1.0);
    State s{Field(g, 1.0), Field(g, 1.0), Field(g, 1.0), Field(g, 1.0), 0.0};
    ModelParams p;
    p.reaction.mu_vz = 0.0;
    p.reaction.mu_z = 0.0;
    p.psi_family = "constant(0)";
    CHECK(std::isinf(stability_bound(s, p, SolverConfig{})));
    SolverConfig cfg;
    cfg.t_end = 0.5;
    s.t = 0.45;
    CHECK(admissible_dt(s, p, cfg) == doctest::Approx(0.01));
    s.t = 0.495;
    CHECK(admissible_dt(s, p, cfg) == doctest::Approx(0.005));
    s.t = 0.6;
    CHECK(admissible_dt(s, p, cfg) == 0.0);
  }

  TEST_CASE("a step above the bound raises a CFL error carrying the admissible step") {
    std::mt19937_64 rng(43);
    const GridSpec g = make_grid(16, 16, 0.16, 0.16);
    State s = random_state(g, rng);
    s.v = random_field(g, rng, 0.0, 5.0);
    const ModelParams p;
    SolverConfig cfg;
    const double bound = stability_bound(s, p, cfg);
    cfg.dt = 2.0 * bound;
    try {
      (void)imex_step(s, p, cfg);
      FAIL("expected CflError");
    } catch (const CflError& e) {
      CHECK(e.admissible_dt() == doctest::Approx(bound));
      CHECK(e.code() == ExitCode::numerical);
    }
    cfg.dt = bound;
    CHECK_NOTHROW(imex_step(s, p, cfg));
  }

  TEST_CASE("random states: mass of u and v conserved, fields stay nonnegative, w does not grow") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 8; ++trial) {
      const int n = 8 + 4 * trial;
      const GridSpec g = make_grid(n, n + 3, 1.0 + trial, 2.0);
      State s = random_state(g, rng);
      ModelParams p;
      p.variant = trial % 2 == 0 ? ModelVariant::cascade_no_source : ModelVariant::direct_taxis;
      SolverConfig cfg;
      cfg.uptake = trial % 3 == 0 ? UptakeScheme::semi_implicit : UptakeScheme::explicit_euler;
      const double mu0 = plain_sum(s.u);
      const double mv0 = plain_sum(s.v);
      for (int step = 0; step < 5; ++step) {
        cfg.dt = std::min(0.05, stability_bound(s, p, cfg));
        auto [next, report] = imex_step(s, p, cfg);
        CHECK(report.cfl_number <= cfg.cfl_safety * (1 + 1e-12));
        for (std::size_t k = 0; k < s.w.size(); ++k) CHECK(next.w[k] <= s.w[k]);
        s = std::move(next);
      }
      CHECK(std::abs(plain_sum(s.u) - mu0) <= 1e-12 * mu0);
      CHECK(std::abs(plain_sum(s.v) - mv0) <= 1e-12 * mv0);
      for (Species sp : {Species::u, Species::v, Species::w, Species::z}) CHECK(min_of(s[sp]) >= -1e-12);
    }
  }

  TEST_CASE("direct taxis keeps v frozen") {
    std::mt19937_64 rng(53);
    const GridSpec g = make_grid(12, 12, 1.0, 1.0);
    const State s = random_state(g, rng);
    ModelParams p;
    p.variant = ModelVariant::direct_taxis;
    SolverConfig cfg;
    cfg.dt = std::min(0.01, stability_bound(s, p, cfg));
    const auto [next, report] = imex_step(s, p, cfg);
    CHECK(next.v == s.v);
    CHECK(report.cg_iterations[1] == 0);
    CHECK(next.t == doctest::Approx(cfg.dt));
  }

  TEST_CASE("growth variant changes the masses by the integrated source") {
    std::mt19937_64 rng(59);
    const GridSpec g = make_grid(10, 10, 1.0, 1.0);
    const State s = random_state(g, rng);
    ModelParams p;
    p.variant = ModelVariant::cascade_with_growth;
    SolverConfig cfg;
    cfg.dt = std::min(0.01, stability_bound(s, p, cfg));
    const auto [next, report] = imex_step(s, p, cfg);
    double src_u = 0.0, src_v = 0.0;
    for (std::size_t k = 0; k < s.u.size(); ++k) {
      src_u += mu_c(s.u[k], s.v[k], s.w[k], p.growth) * s.u[k];
      src_v += mu_e(s.u[k], s.v[k], s.z[k], p.growth) * s.v[k];
    }
    CHECK(plain_sum(next.u) - plain_sum(s.u) == doctest::Approx(cfg.dt * src_u).epsilon(1e-9));
    CHECK(plain_sum(next.v) - plain_sum(s.v) == doctest::Approx(cfg.dt * src_v).epsilon(1e-9));
  }

  TEST_CASE("tissue update is the explicit degradation step") {
    std::mt19937_64 rng(61);
    const GridSpec g = make_grid(6, 6, 1.0, 1.0);
    const State s = random_state(g, rng);
    const ModelParams p;
    SolverConfig cfg;
    cfg.dt = 0.01;
    const auto [next, report] = imex_step(s, p, cfg);
    for (std::size_t k = 0; k < s.w.size(); ++k) {
      const double uw = s.u[k] * s.w[k];
      CHECK(next.w[k] == doctest::Approx(s.w[k] - cfg.dt * uw / (1 + uw)).epsilon(1e-15));
    }
    CHECK(max_of(next.w) <= max_of(s.w));
  }

  TEST_CASE("semi-implicit uptake stays positive for any step") {
    const GridSpec g = make_grid(8, 8, 1.0, 1.0);
    std::mt19937_64 rng(67);
    State s = random_state(g, rng);
    ModelParams p;
    p.reaction.mu_vz = 1000.0;
    SolverConfig cfg;
    cfg.uptake = UptakeScheme::semi_implicit;
    cfg.dt = std::min(0.01, stability_bound(s, p, cfg));
    const double explicit_bound = [&] {
      SolverConfig e = cfg;
      e.uptake = UptakeScheme::explicit_euler;
      return stability_bound(s, p, e);
    }();
    CHECK(explicit_bound < cfg.dt);
    const auto [next, report] = imex_step(s, p, cfg);
    CHECK(min_of(next.z) >= 0.0);
  }
}

TEST_SUITE("integrator") {
  TEST_CASE("flat fields admit the configured step") {
    const GridSpec g = make_grid(10, 10, 10.0, 10.0);
    const State s{Field(g, 1.0), Field(g, 1.0), Field(g, 1.0), Field(g, 1.0), 0.0};
    const SolverConfig cfg;
    CHECK(admissible_dt(s, ModelParams{}, cfg) == cfg.dt);
  }

  TEST_CASE("default initial data admits a finite positive step") {
    const GridSpec g = make_grid(100, 100, 100.0, 100.0);
    const State s = build_initial_state(g, default_initial_condition(g));
    const double dt = admissible_dt(s, ModelParams{}, SolverConfig{});
    CHECK(std::isfinite(dt));
    CHECK(dt > 0.0);
  }

  TEST_CASE("doubling a signal gradient halves the bound under constant sensitivities") {
    const GridSpec g = make_grid(16, 16, 1.0, 1.0);
    State s{Field(g, 1.0), Field(g), Field(g, 0.0), Field(g, 0.0), 0.0};
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) s.v(i, j) = 0.1 * i;
    ModelParams p;
    p.chi_family = "constant(1)";
    p.xi_family = "constant(0)";
    const SolverConfig cfg;
    const double b1 = stability_bound(s, p, cfg);
    for (std::size_t k = 0; k < g.size(); ++k) s.v[k] *= 2.0;
    CHECK(stability_bound(s, p, cfg) == doctest::Approx(b1 / 2.0));
  }

  TEST_CASE("no tumor cells leave the tissue unchanged") {
    std::mt19937_64 rng(149);
    const GridSpec g = make_grid(10, 8, 1.0, 1.0);
    State s = random_state(g, rng);
    s.u = Field(g, 0.0);
    SolverConfig cfg;
    cfg.dt = admissible_dt(s, ModelParams{}, cfg);
    const auto [next, report] = imex_step(s, ModelParams{}, cfg);
    CHECK(next.w == s.w);
  }
}
