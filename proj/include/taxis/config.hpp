#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "taxis/grid.hpp"
#include "taxis/models.hpp"
#include "taxis/solver.hpp"

namespace taxis {

struct OutputConfig {
  std::string dir = "out";
  std::string series = "run";
  double snapshot_every = 10.0;
  double record_every = 0.1;
};

struct CompareConfig {
  ModelVariant variant_a = ModelVariant::cascade_no_source;
  ModelVariant variant_b = ModelVariant::direct_taxis;
};

/// Everything a run needs. Text form: "key = value" lines grouped under [grid], [initial],
/// [model], [coefficients], [assumptions], [solver], [output] and [compare]; '#' and ';'
/// start comments. A [run] section is accepted and ignored (it carries run metadata).
struct RunConfig {
  int nx = 100;
  int ny = 100;
  double length_x = 100.0;
  double length_y = 100.0;
  InitialCondition initial;
  ModelParams model;
  SolverConfig solver;
  OutputConfig output;
  CompareConfig compare;
  std::uint64_t seed = 0;  // reserved; nothing in the pipeline draws random numbers

  GridSpec grid() const { return make_grid(nx, ny, length_x, length_y); }
};

/// All defaults, with the initial condition resolved against the default domain.
RunConfig default_config();

RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Command-line overrides applied on top of a loaded configuration.
struct ConfigOverrides {
  std::optional<std::string> variant;
  std::optional<std::string> out_dir;
  std::optional<double> t_end;
  std::optional<double> dt;
  std::optional<int> nx;
  std::optional<int> ny;
  std::optional<double> snapshot_every;
  std::optional<std::uint64_t> seed;
};

void apply_overrides(RunConfig& cfg, const ConfigOverrides& overrides);

/// Checks every constraint and throws one ValidationError listing all violations.
void validate(const RunConfig& cfg);

/// Fully resolved configuration in the text format; parse_config(to_text(c)) reproduces c.
std::string to_text(const RunConfig& cfg);

}  // namespace taxis
