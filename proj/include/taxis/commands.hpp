#pragma once

#include <iosfwd>

#include "taxis/config.hpp"

namespace taxis {

// Command implementations behind the taxis_sim tool. Each returns the process exit status
// (see ExitCode) and reports failures as one JSON object per line on `err`.

/// Runs cfg.model.variant and writes <dir>/<series>/{metadata.ini, diagnostics.csv, snap_*.txcs}.
int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Runs compare.variant_a and compare.variant_b from the same initial state and writes both
/// series plus <dir>/<series>_diff/ holding A - B snapshots and norms.csv.
int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Certifies the structural hypotheses and prints the bounds table.
int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err);

inline constexpr const char* kNormsHeader =
    "t,l1_u,l1_v,l1_w,l1_z,linf_u,linf_v,linf_w,linf_z,pos_u,pos_v,pos_w,pos_z,neg_u,neg_v,neg_w,neg_z";

}  // namespace taxis
