#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "taxis/diagnostics.hpp"
#include "taxis/grid.hpp"

namespace taxis {

// TXCS snapshot layout, all little-endian:
//   "TXCS" | u32 version | u32 nx | u32 ny | f64 dx | f64 dy | f64 t | u, v, w, z blocks
// where each block holds nx * ny row-major f64 values.
inline constexpr char kSnapshotMagic[4] = {'T', 'X', 'C', 'S'};
inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 4 + 3 * 4 + 3 * 8;

std::vector<unsigned char> encode_snapshot(const State& state);
State decode_snapshot(const std::vector<unsigned char>& bytes, const std::string& origin = "<memory>");

void write_snapshot(const State& state, const std::filesystem::path& path);
State read_snapshot(const std::filesystem::path& path);

/// Snapshot file name for index k: snap_000042.txcs.
std::string snapshot_name(std::size_t index);

/// Reads every snap_*.txcs in a directory in index order.
SnapshotSeries read_series(const std::filesystem::path& dir);

inline constexpr const char* kDiagnosticsHeader =
    "t,mass_u,mass_v,total_w,min_u,min_v,min_w,min_z,max_u,max_v,max_w,max_z,functional_F,"
    "negativity_excess,cg_iters_max,cg_residual_max,change_rate";

/// One CSV row (no trailing newline); undefined values are written as nan.
std::string diagnostics_row(const DiagnosticsRecord& r);

}  // namespace taxis
