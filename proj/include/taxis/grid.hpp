#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace taxis {

/// Cell-centered rectangular grid on [0, length_x] x [0, length_y].
/// Cell (i, j) has its center at ((i + 1/2) dx, (j + 1/2) dy).
struct GridSpec {
  int nx = 0;
  int ny = 0;
  double length_x = 0.0;
  double length_y = 0.0;
  double dx = 0.0;
  double dy = 0.0;

  std::size_t size() const noexcept { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
  }
  double x_center(int i) const noexcept { return (i + 0.5) * dx; }
  double y_center(int j) const noexcept { return (j + 0.5) * dy; }
  double cell_area() const noexcept { return dx * dy; }
};

/// Two grids are the same lattice when their cell counts and spacings agree bitwise.
bool operator==(const GridSpec& a, const GridSpec& b) noexcept;

GridSpec make_grid(int nx, int ny, double length_x, double length_y);

/// Builds a grid from spacings; used when reading snapshots, which store dx and dy.
GridSpec make_grid_from_spacing(int nx, int ny, double dx, double dy);

/// One scalar unknown sampled at cell centers, row-major (index = j * nx + i).
class Field {
 public:
  Field() = default;
  explicit Field(const GridSpec& grid, double fill = 0.0);
  Field(const GridSpec& grid, std::vector<double> values);

  const GridSpec& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  double& operator()(int i, int j) noexcept { return values_[grid_.index(i, j)]; }
  double operator()(int i, int j) const noexcept { return values_[grid_.index(i, j)]; }
  double& operator[](std::size_t k) noexcept { return values_[k]; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double* data() noexcept { return values_.data(); }
  const double* data() const noexcept { return values_.data(); }

  bool all_finite() const noexcept;

  friend bool operator==(const Field&, const Field&) = default;

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

/// Value at (i, j) with homogeneous Neumann mirror ghosts one cell outside the grid.
double ghost_value(const Field& field, int i, int j);

enum class Species : int { u = 0, v = 1, w = 2, z = 3 };
inline constexpr std::array<const char*, 4> species_names{"u", "v", "w", "z"};

/// Tumor cells u, endothelial cells v, tissue w, VEGF z at time t.
struct State {
  Field u;
  Field v;
  Field w;
  Field z;
  double t = 0.0;

  const GridSpec& grid() const noexcept { return u.grid(); }
  Field& operator[](Species s) noexcept;
  const Field& operator[](Species s) const noexcept;

  friend bool operator==(const State&, const State&) = default;
};

struct FieldInit {
  enum class Kind { uniform, gaussian, file };
  Kind kind = Kind::uniform;
  double level = 0.0;
  double center_x = 0.0;
  double center_y = 0.0;
  double amplitude = 0.0;
  double width = 1.0;
  std::string path;

  static FieldInit uniform(double level);
  static FieldInit gaussian(double cx, double cy, double amplitude, double width);
  static FieldInit from_file(std::string path);

  /// Round-trips through parse_field_init.
  std::string to_string() const;
};

/// Parses "uniform(L)", "gaussian(cx, cy, amplitude, width)" or "file(path)".
FieldInit parse_field_init(const std::string& text);

struct InitialCondition {
  FieldInit u;
  FieldInit v;
  FieldInit w;
  FieldInit z;
};

/// Gaussian bumps for u and z centered at (0.75 Lx, 0.75 Ly) with width 10;
/// uniform v = 0.5 and w = 1.
InitialCondition default_initial_condition(const GridSpec& grid);

Field build_field(const GridSpec& grid, const FieldInit& init);
State build_initial_state(const GridSpec& grid, const InitialCondition& ic);

}  // namespace taxis
