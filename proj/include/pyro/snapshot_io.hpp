#pragma once

#include "pyro/snapshot.hpp"

#include <optional>
#include <string>

namespace pyro {

/// Binary snapshot format: little-endian header
/// {magic "PYRO", version u32, dim u32, nx u32, ny u32, field count u32 = 3,
/// param count u32, per-param (name length u32, name bytes, value f64)},
/// followed by the T, S_e, S_x fields as row-major 64-bit IEEE floats.
/// A JSON sidecar at <path>.json carries the grid, parameters, fidelity tag,
/// scale, and provenance.
void write_snapshot(const std::string& path, const Snapshot& s,
                    const std::string& provenance = "");

Snapshot read_snapshot(const std::string& path);

/// Resume helper: the parsed snapshot when both files exist and are intact.
std::optional<Snapshot> try_read_snapshot(const std::string& path);

/// Plotting export: x[,y],T,S_e,S_x columns with 17 significant digits.
void export_snapshot_csv(const std::string& path, const Snapshot& s);

}  // namespace pyro
