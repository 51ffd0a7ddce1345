#include "taxis/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "taxis/error.hpp"

namespace taxis {

namespace {

void put_u32(std::vector<unsigned char>& out, std::uint32_t x) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<unsigned char>((x >> (8 * b)) & 0xffu));
}

void put_f64(std::vector<unsigned char>& out, double x) {
  const auto bits = std::bit_cast<std::uint64_t>(x);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<unsigned char>((bits >> (8 * b)) & 0xffu));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t x = 0;
  for (int b = 0; b < 4; ++b) x |= static_cast<std::uint32_t>(p[b]) << (8 * b);
  return x;
}

double get_f64(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(p[b]) << (8 * b);
  return std::bit_cast<double>(bits);
}

std::string format_value(double x) {
  if (std::isnan(x)) return "nan";
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

std::vector<unsigned char> encode_snapshot(const State& state) {
  const GridSpec& g = state.grid();
  std::vector<unsigned char> out;
  out.reserve(kSnapshotHeaderBytes + 4 * 8 * g.size());
  out.insert(out.end(), std::begin(kSnapshotMagic), std::end(kSnapshotMagic));
  put_u32(out, kSnapshotVersion);
  put_u32(out, static_cast<std::uint32_t>(g.nx));
  put_u32(out, static_cast<std::uint32_t>(g.ny));
  put_f64(out, g.dx);
  put_f64(out, g.dy);
  put_f64(out, state.t);
  for (int f = 0; f < 4; ++f) {
    for (double x : state[static_cast<Species>(f)].values()) put_f64(out, x);
  }
  return out;
}

State decode_snapshot(const std::vector<unsigned char>& bytes, const std::string& origin) {
  if (bytes.size() < kSnapshotHeaderBytes) {
    throw ValidationError(origin + ": shape error: file too short for a TXCS header (" +
                          std::to_string(bytes.size()) + " bytes)");
  }
  if (!std::equal(std::begin(kSnapshotMagic), std::end(kSnapshotMagic), bytes.begin(),
                  [](char a, unsigned char b) { return static_cast<unsigned char>(a) == b; })) {
    throw ValidationError(origin + ": format error: bad magic (not a TXCS snapshot)");
  }
  const unsigned char* p = bytes.data();
  const std::uint32_t version = get_u32(p + 4);
  if (version != kSnapshotVersion) {
    throw ValidationError(origin + ": format error: unsupported TXCS version " + std::to_string(version));
  }
  const std::uint32_t nx = get_u32(p + 8);
  const std::uint32_t ny = get_u32(p + 12);
  const double dx = get_f64(p + 16);
  const double dy = get_f64(p + 24);
  const double t = get_f64(p + 32);
  if (nx < 4 || ny < 4 || nx > (1u << 20) || ny > (1u << 20)) {
    throw ValidationError(origin + ": shape error: implausible grid " + std::to_string(nx) + " x " +
                          std::to_string(ny));
  }
  const std::size_t cells = static_cast<std::size_t>(nx) * ny;
  const std::size_t expected = kSnapshotHeaderBytes + 4 * 8 * cells;
  if (bytes.size() != expected) {
    throw ValidationError(origin + ": shape error: expected " + std::to_string(expected) + " bytes for " +
                          std::to_string(nx) + " x " + std::to_string(ny) + ", found " +
                          std::to_string(bytes.size()));
  }
  const GridSpec g = make_grid_from_spacing(static_cast<int>(nx), static_cast<int>(ny), dx, dy);
  State s{Field(g), Field(g), Field(g), Field(g), t};
  const unsigned char* q = p + kSnapshotHeaderBytes;
  for (int f = 0; f < 4; ++f) {
    Field& field = s[static_cast<Species>(f)];
    for (std::size_t k = 0; k < cells; ++k, q += 8) field[k] = get_f64(q);
  }
  return s;
}

void write_snapshot(const State& state, const std::filesystem::path& path) {
  const auto bytes = encode_snapshot(state);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

State read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_snapshot(bytes, path.string());
}

std::string snapshot_name(std::size_t index) {
  std::string digits = std::to_string(index);
  if (digits.size() < 6) digits.insert(0, 6 - digits.size(), '0');
  return "snap_" + digits + ".txcs";
}

SnapshotSeries read_series(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("'" + dir.string() + "' is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("snap_", 0) == 0 && entry.path().extension() == ".txcs") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  SnapshotSeries series;
  for (const auto& f : files) {
    series.snapshots.push_back(read_snapshot(f));
    const auto& snaps = series.snapshots;
    if (snaps.size() > 1) {
      if (!(snaps.back().grid() == snaps.front().grid())) {
        throw ValidationError("'" + f.string() + "': grid differs from the first snapshot of the series");
      }
      if (!(snaps.back().t > snaps[snaps.size() - 2].t)) {
        throw ValidationError("'" + f.string() + "': snapshot times are not strictly increasing");
      }
    }
  }
  return series;
}

std::string diagnostics_row(const DiagnosticsRecord& r) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::ostringstream os;
  os << format_value(r.t) << ',' << format_value(r.mass_u) << ',' << format_value(r.mass_v) << ','
     << format_value(r.total_w);
  for (double x : r.min) os << ',' << format_value(x);
  for (double x : r.max) os << ',' << format_value(x);
  os << ',' << format_value(r.functional_F.value_or(nan)) << ',' << format_value(r.negativity_excess) << ','
     << r.cg_iters_max << ',' << format_value(r.cg_residual_max) << ','
     << format_value(r.change_rate.value_or(nan));
  return os.str();
}

}  // namespace taxis
