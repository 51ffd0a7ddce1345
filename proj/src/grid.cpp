#include "taxis/grid.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "taxis/error.hpp"

namespace taxis {

bool operator==(const GridSpec& a, const GridSpec& b) noexcept {
  return a.nx == b.nx && a.ny == b.ny && a.dx == b.dx && a.dy == b.dy;
}

GridSpec make_grid(int nx, int ny, double length_x, double length_y) {
  if (nx < 4 || ny < 4) {
    throw ValidationError("grid: nx and ny must be at least 4 (got " + std::to_string(nx) + " x " +
                          std::to_string(ny) + ")");
  }
  if (!(length_x > 0.0) || !(length_y > 0.0) || !std::isfinite(length_x) || !std::isfinite(length_y)) {
    throw ValidationError("grid: domain lengths must be positive and finite");
  }
  return GridSpec{nx, ny, length_x, length_y, length_x / nx, length_y / ny};
}

GridSpec make_grid_from_spacing(int nx, int ny, double dx, double dy) {
  if (nx < 4 || ny < 4) {
    throw ValidationError("grid: nx and ny must be at least 4");
  }
  if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy)) {
    throw ValidationError("grid: spacings must be positive and finite");
  }
  return GridSpec{nx, ny, dx * nx, dy * ny, dx, dy};
}

Field::Field(const GridSpec& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

Field::Field(const GridSpec& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw ValidationError("field: expected " + std::to_string(grid_.size()) + " values, got " +
                          std::to_string(values_.size()));
  }
}

bool Field::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

double ghost_value(const Field& field, int i, int j) {
  const GridSpec& g = field.grid();
  if (i < -1 || i > g.nx || j < -1 || j > g.ny) {
    throw ValidationError("ghost_value: index (" + std::to_string(i) + ", " + std::to_string(j) +
                          ") is more than one cell outside the grid");
  }
  // Mirror reflection across the wall: ghost(-1) = value(0), ghost(n) = value(n-1).
  const int ii = std::clamp(i, 0, g.nx - 1);
  const int jj = std::clamp(j, 0, g.ny - 1);
  return field(ii, jj);
}

Field& State::operator[](Species s) noexcept {
  switch (s) {
    case Species::u: return u;
    case Species::v: return v;
    case Species::w: return w;
    case Species::z: break;
  }
  return z;
}

const Field& State::operator[](Species s) const noexcept {
  switch (s) {
    case Species::u: return u;
    case Species::v: return v;
    case Species::w: return w;
    case Species::z: break;
  }
  return z;
}

FieldInit FieldInit::uniform(double level) {
  FieldInit f;
  f.kind = Kind::uniform;
  f.level = level;
  return f;
}

FieldInit FieldInit::gaussian(double cx, double cy, double amplitude, double width) {
  FieldInit f;
  f.kind = Kind::gaussian;
  f.center_x = cx;
  f.center_y = cy;
  f.amplitude = amplitude;
  f.width = width;
  return f;
}

FieldInit FieldInit::from_file(std::string path) {
  FieldInit f;
  f.kind = Kind::file;
  f.path = std::move(path);
  return f;
}

namespace {

std::string format_real(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<double> parse_real_list(const std::string& args, const std::string& context) {
  std::vector<double> out;
  std::stringstream ss(args);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw ValidationError(context + ": cannot parse number '" + item + "'");
    }
    out.push_back(x);
  }
  return out;
}

}  // namespace

std::string FieldInit::to_string() const {
  switch (kind) {
    case Kind::uniform: return "uniform(" + format_real(level) + ")";
    case Kind::gaussian:
      return "gaussian(" + format_real(center_x) + ", " + format_real(center_y) + ", " + format_real(amplitude) +
             ", " + format_real(width) + ")";
    case Kind::file: break;
  }
  return "file(" + path + ")";
}

FieldInit parse_field_init(const std::string& raw) {
  const std::string text = trim(raw);
  const auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')') {
    throw ValidationError("initial condition '" + text + "': expected name(arguments)");
  }
  const std::string name = trim(text.substr(0, open));
  const std::string args = text.substr(open + 1, text.size() - open - 2);
  if (name == "file") {
    return FieldInit::from_file(trim(args));
  }
  const auto numbers = parse_real_list(args, "initial condition '" + text + "'");
  if (name == "uniform" && numbers.size() == 1) {
    return FieldInit::uniform(numbers[0]);
  }
  if (name == "gaussian" && numbers.size() == 4) {
    return FieldInit::gaussian(numbers[0], numbers[1], numbers[2], numbers[3]);
  }
  throw ValidationError("initial condition '" + text +
                        "': expected uniform(level), gaussian(cx, cy, amplitude, width) or file(path)");
}

InitialCondition default_initial_condition(const GridSpec& grid) {
  const double cx = 0.75 * grid.length_x;
  const double cy = 0.75 * grid.length_y;
  return InitialCondition{
      FieldInit::gaussian(cx, cy, 1.0, 10.0),
      FieldInit::uniform(0.5),
      FieldInit::uniform(1.0),
      FieldInit::gaussian(cx, cy, 0.5, 10.0),
  };
}

Field build_field(const GridSpec& grid, const FieldInit& init) {
  switch (init.kind) {
    case FieldInit::Kind::uniform:
      if (!(init.level >= 0.0) || !std::isfinite(init.level)) {
        throw ValidationError("initial condition: uniform level must be finite and nonnegative");
      }
      return Field(grid, init.level);

    case FieldInit::Kind::gaussian: {
      if (!(init.amplitude >= 0.0) || !std::isfinite(init.amplitude)) {
        throw ValidationError("initial condition: gaussian amplitude must be finite and nonnegative");
      }
      if (!(init.width > 0.0)) {
        throw ValidationError("initial condition: gaussian width must be positive");
      }
      Field f(grid);
      const double inv_two_var = 1.0 / (2.0 * init.width * init.width);
      for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
          const double rx = grid.x_center(i) - init.center_x;
          const double ry = grid.y_center(j) - init.center_y;
          f(i, j) = init.amplitude * std::exp(-(rx * rx + ry * ry) * inv_two_var);
        }
      }
      return f;
    }

    case FieldInit::Kind::file: break;
  }

  std::ifstream in(init.path);
  if (!in) {
    throw IoError("initial condition: cannot open '" + init.path + "'");
  }
  std::vector<double> values;
  values.reserve(grid.size());
  double x = 0.0;
  while (in >> x) {
    values.push_back(x);
  }
  if (!in.eof()) {
    throw ValidationError("initial condition: non-numeric content in '" + init.path + "'");
  }
  if (values.size() != grid.size()) {
    throw ValidationError("initial condition: '" + init.path + "' holds " + std::to_string(values.size()) +
                          " values, grid needs " + std::to_string(grid.size()));
  }
  for (double value : values) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
      throw ValidationError("initial condition: '" + init.path + "' contains a negative or non-finite value");
    }
  }
  return Field(grid, std::move(values));
}

State build_initial_state(const GridSpec& grid, const InitialCondition& ic) {
  State s{build_field(grid, ic.u), build_field(grid, ic.v), build_field(grid, ic.w), build_field(grid, ic.z), 0.0};
  const auto nonzero = [](const Field& f) {
    return std::any_of(f.values().begin(), f.values().end(), [](double x) { return x > 0.0; });
  };
  if (!nonzero(s.u)) throw ValidationError("initial condition: u must not vanish identically");
  if (!nonzero(s.v)) throw ValidationError("initial condition: v must not vanish identically");
  if (!nonzero(s.z)) throw ValidationError("initial condition: z must not vanish identically");
  return s;
}

}  // namespace taxis
