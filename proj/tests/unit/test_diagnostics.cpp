#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "taxis/diagnostics.hpp"
#include "taxis/error.hpp"

using namespace taxis;
using taxis::testing::random_state;
using taxis::testing::sample;

TEST_SUITE("diagnostics") {
  TEST_CASE("mass is the sum times the cell area") {
    const GridSpec g = make_grid(10, 20, 2.0, 4.0);
    CHECK(mass(Field(g, 3.0)) == doctest::Approx(3.0 * 8.0).epsilon(1e-15));
    CHECK(mass(Field(g, 3.0), Summation::compensated) == doctest::Approx(24.0).epsilon(1e-15));
  }

  TEST_CASE("compensated summation recovers cancelled small terms") {
    const GridSpec g = make_grid(4, 4, 4.0, 4.0);
    Field f(g, 1e-16);
    f[0] = 1.0;
    f[1] = -1.0;
    // Neumaier keeps every 1e-16 that plain left-to-right summation after 1.0 drops.
    CHECK(mass(f, Summation::compensated) == doctest::Approx(14e-16).epsilon(1e-12));
  }

  TEST_CASE("functional F on a uniform state is the entropy term alone") {
    const GridSpec g = make_grid(8, 8, 2.0, 2.0);
    const auto F = functional_F(Field(g, 2.0), Field(g, 0.3));
    REQUIRE(F.has_value());
    CHECK(*F == doctest::Approx(4.0 * 2.0 * std::log(2.0)));
    CHECK(functional_F(Field(g, 0.0), Field(g, 0.3)).value() == 0.0);
  }

  TEST_CASE("functional F gradient term against a hand-computed pair of cells") {
    const GridSpec g = make_grid(4, 4, 4.0, 4.0);
    Field z(g, 1.0);
    for (int j = 0; j < 4; ++j) z(3, j) = 3.0;
    // Four x-faces with difference 2 and face mean 2: 0.5 * 4 * (4 / 2) = 4.
    const auto F = functional_F(Field(g, 1.0), z);
    REQUIRE(F.has_value());
    CHECK(*F == doctest::Approx(4.0));
  }

  TEST_CASE("functional F is undefined at vanishing z or negative v") {
    const GridSpec g = make_grid(4, 4, 1.0, 1.0);
    Field z(g, 1.0);
    z[5] = 0.0;
    CHECK_FALSE(functional_F(Field(g, 1.0), z).has_value());
    Field v(g, 1.0);
    v[2] = -1e-3;
    CHECK_FALSE(functional_F(v, Field(g, 1.0)).has_value());
  }

  TEST_CASE("single-state diagnostics") {
    const GridSpec g = make_grid(4, 4, 1.0, 1.0);
    State s{Field(g, 1.0), Field(g, 2.0), Field(g, 3.0), Field(g, 4.0), 1.5};
    s.u[3] = -0.5;
    const DiagnosticsRecord r = compute_diagnostics(s);
    CHECK(r.t == 1.5);
    CHECK(r.mass_u == doctest::Approx((15 * 1.0 - 0.5) / 16.0));
    CHECK(r.mass_v == doctest::Approx(2.0));
    CHECK(r.total_w == doctest::Approx(3.0));
    CHECK(r.min[0] == -0.5);
    CHECK(r.max[3] == 4.0);
    CHECK(r.negativity_excess == doctest::Approx(0.5 / 16.0));
    CHECK_FALSE(r.change_rate.has_value());
  }

  TEST_CASE("tracker change rate is normalized by the initial norms") {
    const GridSpec g = make_grid(4, 4, 1.0, 1.0);
    State s{Field(g, 1.0), Field(g, 2.0), Field(g, 4.0), Field(g, 1.0), 0.0};
    DiagnosticsTracker tracker(s);
    tracker.record(s);
    s.t = 0.5;
    for (std::size_t k = 0; k < s.w.size(); ++k) s.w[k] = 3.0;
    StepReport rep;
    rep.cg_iterations = {4, 7, 2};
    rep.cg_residuals = {1e-12, 1e-11, 3e-12};
    tracker.note_step(rep);
    const DiagnosticsRecord r = tracker.record(s);
    // |dw|_1 = 1, initial |w|_1 = 4, elapsed 0.5.
    REQUIRE(r.change_rate.has_value());
    CHECK(*r.change_rate == doctest::Approx(0.5));
    CHECK(r.cg_iters_max == 7);
    CHECK(r.cg_residual_max == 1e-11);
    s.t = 1.0;
    const DiagnosticsRecord r2 = tracker.record(s);
    CHECK(*r2.change_rate == 0.0);
    CHECK(r2.cg_iters_max == 0);
    CHECK(tracker.history().size() == 3);
  }

  TEST_CASE("steady state needs a full window below tolerance") {
    std::vector<DiagnosticsRecord> h(5);
    for (auto& r : h) r.change_rate = 1e-8;
    h[0].change_rate.reset();
    CHECK(steady_state_reached(h, 4, 1e-6));
    CHECK_FALSE(steady_state_reached(h, 5, 1e-6));
    CHECK_FALSE(steady_state_reached(h, 6, 1e-6));
    h[3].change_rate = 1e-3;
    CHECK_FALSE(steady_state_reached(h, 4, 1e-6));
    CHECK(steady_state_reached(h, 1, 1e-6));
    CHECK_FALSE(steady_state_reached(h, 0, 1e-6));
  }

  TEST_CASE("comparing a run with itself gives zero differences") {
    std::mt19937_64 rng(103);
    const GridSpec g = make_grid(6, 6, 1.0, 1.0);
    SnapshotSeries a;
    for (int k = 0; k < 3; ++k) {
      State s = random_state(g, rng);
      s.t = k;
      a.snapshots.push_back(s);
    }
    const DifferenceSeries d = compare_runs(a, a);
    REQUIRE(d.norms.size() == 3);
    for (const auto& n : d.norms) {
      for (int f = 0; f < 4; ++f) {
        CHECK(n.l1[f] == 0.0);
        CHECK(n.linf[f] == 0.0);
        CHECK(n.positive[f] == 0);
        CHECK(n.negative[f] == 0);
      }
    }
  }

  TEST_CASE("difference norms and sign counts") {
    const GridSpec g = make_grid(4, 4, 2.0, 2.0);
    State a{Field(g, 1.0), Field(g, 1.0), Field(g, 1.0), Field(g, 1.0), 0.0};
    State b = a;
    b.w[0] = 3.0;
    b.w[1] = 0.5;
    const DifferenceSeries d = compare_runs(SnapshotSeries{{a}}, SnapshotSeries{{b}});
    CHECK(d.differences[0].w[0] == -2.0);
    CHECK(d.norms[0].linf[2] == 2.0);
    CHECK(d.norms[0].l1[2] == doctest::Approx(2.5 * 0.25));
    CHECK(d.norms[0].positive[2] == 1);
    CHECK(d.norms[0].negative[2] == 1);
  }

  TEST_CASE("mismatched series are rejected") {
    const GridSpec g = make_grid(4, 4, 1.0, 1.0);
    const State a{Field(g, 1.0), Field(g, 1.0), Field(g, 1.0), Field(g, 1.0), 0.0};
    State late = a;
    late.t = 1.0;
    const GridSpec g2 = make_grid(5, 4, 1.0, 1.0);
    const State other{Field(g2, 1.0), Field(g2, 1.0), Field(g2, 1.0), Field(g2, 1.0), 0.0};
    CHECK_THROWS_AS(compare_runs(SnapshotSeries{{a, a}}, SnapshotSeries{{a}}), ValidationError);
    CHECK_THROWS_AS(compare_runs(SnapshotSeries{{a}}, SnapshotSeries{{late}}), ValidationError);
    CHECK_THROWS_AS(compare_runs(SnapshotSeries{{a}}, SnapshotSeries{{other}}), ValidationError);
  }
}

TEST_SUITE("diagnostics") {
  TEST_CASE("mass examples") {
    const GridSpec g = make_grid(100, 100, 100.0, 100.0);
    CHECK(mass(Field(g, 1.0)) == doctest::Approx(10000.0).epsilon(1e-14));
    CHECK(mass(Field(g, 0.0)) == 0.0);
    std::mt19937_64 rng(151);
    const Field f = testing::random_field(g, rng);
    const Field h = testing::random_field(g, rng);
    Field lin(g);
    for (std::size_t k = 0; k < g.size(); ++k) lin[k] = 2.0 * f[k] - 3.0 * h[k];
    CHECK(mass(lin) == doctest::Approx(2.0 * mass(f) - 3.0 * mass(h)).epsilon(1e-12));
  }

  TEST_CASE("F of v = e on flat z is the domain area times e") {
    const GridSpec g = make_grid(20, 10, 4.0, 2.0);
    const auto F = functional_F(Field(g, std::exp(1.0)), Field(g, 0.5));
    REQUIRE(F);
    CHECK(*F == doctest::Approx(8.0 * std::exp(1.0)).epsilon(1e-13));
  }

  TEST_CASE("entropy of a bump against a refined quadrature") {
    const auto bump = [](double x, double y) {
      const double r2 = (x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5);
      return 2.0 * std::exp(-r2 / (2.0 * 0.1 * 0.1));
    };
    const GridSpec g = make_grid(48, 48, 1.0, 1.0);
    const auto F = functional_F(sample(g, bump), Field(g, 1.0));
    REQUIRE(F);
    const int n = 1200;
    const double h = 1.0 / n;
    double fine = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double v = bump((i + 0.5) * h, (j + 0.5) * h);
        if (v > 0.0) fine += v * std::log(v) * h * h;
      }
    CHECK(std::abs(*F - fine) <= 0.01 * std::abs(fine));
  }

  TEST_CASE("comparing against an all-zero run returns the first run") {
    std::mt19937_64 rng(157);
    const GridSpec g = make_grid(5, 5, 1.0, 1.0);
    const State a = random_state(g, rng);
    const State zero{Field(g), Field(g), Field(g), Field(g), a.t};
    const DifferenceSeries d = compare_runs(SnapshotSeries{{a}}, SnapshotSeries{{zero}});
    CHECK(d.differences[0].u == a.u);
    CHECK(d.differences[0].z == a.z);
  }

  TEST_CASE("steady detection on constant and growing histories") {
    const GridSpec g = make_grid(4, 4, 1.0, 1.0);
    const auto state_at = [&](double t, double slope) {
      return State{Field(g, 1.0 + slope * t), Field(g, 1.0), Field(g, 1.0), Field(g, 1.0), t};
    };
    for (double slope : {0.0, 0.1}) {
      DiagnosticsTracker tracker(state_at(0.0, slope));
      for (int k = 0; k <= 20; ++k) tracker.record(state_at(0.1 * k, slope));
      CHECK(steady_state_reached(tracker.history(), 10, 1e-6) == (slope == 0.0));
    }
  }
}
