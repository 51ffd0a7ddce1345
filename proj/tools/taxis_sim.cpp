// taxis_sim: run, compare and check the tumor-invasion taxis-cascade model.
//
//   taxis_sim run --config run.ini [--variant direct] [--tend 10] ...
//   taxis_sim compare --config run.ini
//   taxis_sim check --config run.ini

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "taxis/commands.hpp"
#include "taxis/config.hpp"
#include "taxis/error.hpp"
#include "taxis/version.hpp"

namespace {

struct Flags {
  std::string config;
  taxis::ConfigOverrides overrides;
};

void add_common_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "Configuration file (sections of key = value)");
  cmd->add_option("--variant", f.overrides.variant, "cascade | growth | direct");
  cmd->add_option("--out", f.overrides.out_dir, "Output directory");
  cmd->add_option("--tend", f.overrides.t_end, "Final time");
  cmd->add_option("--dt", f.overrides.dt, "Maximum time step");
  cmd->add_option("--nx", f.overrides.nx, "Cells in x");
  cmd->add_option("--ny", f.overrides.ny, "Cells in y");
  cmd->add_option("--snapshot-every", f.overrides.snapshot_every, "Snapshot interval");
  cmd->add_option("--seed", f.overrides.seed, "Reserved; the pipeline uses no randomness");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-difference simulator for a tumor-invasion taxis cascade"};
  app.set_version_flag("--version", std::string(taxis::kVersion));
  app.require_subcommand(1);

  Flags flags;
  auto* run = app.add_subcommand("run", "Integrate one model variant and write snapshots and diagnostics");
  auto* compare = app.add_subcommand("compare", "Run two variants and write their differences");
  auto* check = app.add_subcommand("check", "Certify the coefficient hypotheses and print the bounds table");
  for (auto* cmd : {run, compare, check}) add_common_flags(cmd, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e);
    return status == 0 ? 0 : static_cast<int>(taxis::ExitCode::validation);
  }

  taxis::RunConfig cfg;
  try {
    cfg = flags.config.empty() ? taxis::default_config() : taxis::load_config(flags.config);
    taxis::apply_overrides(cfg, flags.overrides);
  } catch (const taxis::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.code());
  }

  if (run->parsed()) return taxis::cmd_run(cfg, std::cout, std::cerr);
  if (compare->parsed()) return taxis::cmd_compare(cfg, std::cout, std::cerr);
  return taxis::cmd_check(cfg, std::cout, std::cerr);
}
