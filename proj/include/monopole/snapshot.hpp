#pragma once
// Field snapshots: a little-endian float64 payload (component-major, matrix
// entry planes, real/imaginary interleaved) and a JSON header sidecar at
// <payload>.json carrying grid, time, components and the payload SHA-256.

#include <filesystem>
#include <string>
#include <vector>

#include "monopole/ame.hpp"
#include "monopole/spectral.hpp"

namespace monopole {

// Version of the convention set (Riesz phase, box sign, Nyquist policy)
// recorded in every output so results are comparable across builds.
inline constexpr int kConventionVersion = 1;

struct Snapshot {
  double t = 0.0;
  std::vector<LieField> components;  // same grid and rank; labels are the names
};

// Writes payload and header atomically. Throws Error{io}.
void save_snapshot(const Snapshot& s, const std::filesystem::path& payload);

// Throws Error{corrupt_snapshot} naming the file on a hash, size or header
// mismatch, Error{io} if a file is missing. Nothing is returned on failure.
Snapshot load_snapshot(const std::filesystem::path& payload);

Snapshot to_snapshot(const AuxState& s);
// Throws Error{corrupt_snapshot} unless the components are u, ut, v, vt.
AuxState to_aux(const Snapshot& s);

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

}  // namespace monopole
