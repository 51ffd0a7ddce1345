#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "support.hpp"
#include "taxis/error.hpp"
#include "taxis/grid.hpp"

using namespace taxis;

TEST_SUITE("grid") {
  TEST_CASE("geometry of a cell-centered grid") {
    const GridSpec g = make_grid(8, 4, 2.0, 1.0);
    CHECK(g.dx == 0.25);
    CHECK(g.dy == 0.25);
    CHECK(g.size() == 32);
    CHECK(g.index(3, 2) == 19);
    CHECK(g.x_center(0) == 0.125);
    CHECK(g.y_center(3) == 0.875);
    CHECK(g.cell_area() == 0.0625);
  }

  TEST_CASE("degenerate grids are rejected") {
    CHECK_THROWS_AS(make_grid(3, 10, 1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(make_grid(10, 2, 1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(make_grid(10, 10, 0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(make_grid(10, 10, 1.0, -1.0), ValidationError);
    CHECK_THROWS_AS(make_grid_from_spacing(10, 10, 0.0, 1.0), ValidationError);
  }

  TEST_CASE("uniform field has constant values and equal grids compare equal") {
    const GridSpec g = make_grid(5, 6, 1.0, 1.0);
    const Field f(g, 2.5);
    for (std::size_t k = 0; k < f.size(); ++k) CHECK(f[k] == 2.5);
    CHECK(f.grid() == make_grid(5, 6, 1.0, 1.0));
    CHECK_FALSE(f.grid() == make_grid(6, 5, 1.0, 1.0));
    CHECK_THROWS_AS(Field(g, std::vector<double>(29)), ValidationError);
  }

  TEST_CASE("mirror ghosts at the walls") {
    const GridSpec g = make_grid(4, 4, 1.0, 1.0);
    Field f(g);
    for (int j = 0; j < 4; ++j)
      for (int i = 0; i < 4; ++i) f(i, j) = 10 * i + j;
    CHECK(ghost_value(f, -1, 2) == f(0, 2));
    CHECK(ghost_value(f, 4, 1) == f(3, 1));
    CHECK(ghost_value(f, 2, -1) == f(2, 0));
    CHECK(ghost_value(f, 2, 4) == f(2, 3));
    CHECK(ghost_value(f, 1, 1) == f(1, 1));
    CHECK_THROWS_AS(ghost_value(f, -2, 0), ValidationError);
    CHECK_THROWS_AS(ghost_value(f, 0, 5), ValidationError);
  }

  TEST_CASE("all_finite detects NaN") {
    const GridSpec g = make_grid(4, 4, 1.0, 1.0);
    Field f(g, 1.0);
    CHECK(f.all_finite());
    f(2, 2) = std::nan("");
    CHECK_FALSE(f.all_finite());
  }

  TEST_CASE("field initializers parse and round-trip") {
    const FieldInit u = parse_field_init("uniform(0.5)");
    CHECK(u.kind == FieldInit::Kind::uniform);
    CHECK(u.level == 0.5);
    const FieldInit gs = parse_field_init(" gaussian( 1, 2 ,3, 4 ) ");
    CHECK(gs.kind == FieldInit::Kind::gaussian);
    CHECK(gs.center_x == 1.0);
    CHECK(gs.center_y == 2.0);
    CHECK(gs.amplitude == 3.0);
    CHECK(gs.width == 4.0);
    const FieldInit fl = parse_field_init("file(data/u.txt)");
    CHECK(fl.kind == FieldInit::Kind::file);
    CHECK(fl.path == "data/u.txt");
    for (const FieldInit& f : {u, gs, fl, FieldInit::gaussian(0.1, 1.0 / 3.0, 0.7, 2.0)}) {
      const FieldInit back = parse_field_init(f.to_string());
      CHECK(back.to_string() == f.to_string());
    }
    CHECK_THROWS_AS(parse_field_init("uniform"), ValidationError);
    CHECK_THROWS_AS(parse_field_init("uniform(x)"), ValidationError);
    CHECK_THROWS_AS(parse_field_init("gaussian(1,2,3)"), ValidationError);
    CHECK_THROWS_AS(parse_field_init("ramp(1)"), ValidationError);
  }

  TEST_CASE("gaussian initializer samples amp exp(-r^2 / (2 w^2)) at cell centers") {
    const GridSpec g = make_grid(10, 10, 10.0, 10.0);
    const Field f = build_field(g, FieldInit::gaussian(5.0, 5.0, 2.0, 1.5));
    const double x = g.x_center(7);
    const double y = g.y_center(3);
    const double r2 = (x - 5.0) * (x - 5.0) + (y - 5.0) * (y - 5.0);
    CHECK(f(7, 3) == doctest::Approx(2.0 * std::exp(-r2 / (2.0 * 1.5 * 1.5))).epsilon(1e-15));
    CHECK_THROWS_AS(build_field(g, FieldInit::uniform(-1.0)), ValidationError);
    CHECK_THROWS_AS(build_field(g, FieldInit::gaussian(5, 5, 1, 0)), ValidationError);
  }

  TEST_CASE("file initializer reads whitespace-separated values") {
    const GridSpec g = make_grid(4, 4, 1.0, 1.0);
    const auto path = std::filesystem::temp_directory_path() / "taxis_field_init.txt";
    {
      std::ofstream out(path);
      for (int k = 0; k < 16; ++k) out << k * 0.5 << (k % 4 == 3 ? '\n' : ' ');
    }
    const Field f = build_field(g, FieldInit::from_file(path.string()));
    CHECK(f(3, 1) == 3.5);
    {
      std::ofstream out(path);
      out << "1 2 3";
    }
    CHECK_THROWS_AS(build_field(g, FieldInit::from_file(path.string())), ValidationError);
    {
      std::ofstream out(path);
      for (int k = 0; k < 16; ++k) out << (k == 5 ? -1 : 1) << ' ';
    }
    CHECK_THROWS_AS(build_field(g, FieldInit::from_file(path.string())), ValidationError);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(build_field(g, FieldInit::from_file(path.string())), IoError);
  }

  TEST_CASE("default initial condition") {
    const GridSpec g = make_grid(100, 100, 100.0, 100.0);
    const State s = build_initial_state(g, default_initial_condition(g));
    CHECK(s.t == 0.0);
    CHECK(s.v(0, 0) == 0.5);
    CHECK(s.w(99, 99) == 1.0);
    CHECK(s.u(74, 74) == doctest::Approx(std::exp(-0.5 / 200.0)));
    CHECK(s.z(75, 75) == doctest::Approx(0.5 * std::exp(-0.5 / 200.0)));
    CHECK(s[Species::z](3, 4) == s.z(3, 4));
  }

  TEST_CASE("vanishing u, v or z is rejected") {
    const GridSpec g = make_grid(8, 8, 1.0, 1.0);
    InitialCondition ic = default_initial_condition(g);
    ic.u = FieldInit::uniform(0.0);
    CHECK_THROWS_AS(build_initial_state(g, ic), ValidationError);
    ic = default_initial_condition(g);
    ic.z = FieldInit::uniform(0.0);
    CHECK_THROWS_AS(build_initial_state(g, ic), ValidationError);
    ic = default_initial_condition(g);
    ic.w = FieldInit::uniform(0.0);
    CHECK_NOTHROW(build_initial_state(g, ic));
  }
}

TEST_SUITE("grid") {
  TEST_CASE("worked examples") {
    CHECK(make_grid(100, 100, 100.0, 100.0).dx == 1.0);
    CHECK(make_grid(4, 4, 1.0, 1.0).dy == 0.25);
    const GridSpec g = make_grid(4, 4, 1.0, 1.0);
    Field row(g);
    for (int i = 0; i < 4; ++i) row(i, 0) = i;
    CHECK(ghost_value(row, -1, 0) == 0.0);
    CHECK(ghost_value(row, 4, 0) == 3.0);
    const Field c(g, 0.7);
    for (int k = 0; k < 4; ++k) {
      CHECK(ghost_value(c, -1, k) == 0.7);
      CHECK(ghost_value(c, k, 4) == 0.7);
    }
    const Field w = build_field(make_grid(13, 7, 3.0, 2.0), FieldInit::uniform(1.0));
    for (double x : w.values()) CHECK(x == 1.0);
    InitialCondition ic = default_initial_condition(g);
    ic.u = FieldInit::gaussian(0.5, 0.5, 0.0, 0.2);
    CHECK_THROWS_AS(build_initial_state(g, ic), ValidationError);
  }
}
