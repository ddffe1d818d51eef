#pragma once
// Deterministic sample data: smooth localized Coulomb data and band-limited
// random fields.

#include <cstdint>

#include "monopole/spectral.hpp"

namespace monopole {

struct CoulombData {
  LieField a1, a2, phi0;
  LieField f;  // a = *df
};

// Sums of Gaussians of the given width near the centre of the torus, times
// su(n) generators; a = *df is divergence free and mean zero. The seed picks
// the centre offsets (at most 0.3) and the generators.
CoulombData gaussian_data(const TorusGrid& grid, int rank, double amplitude, double width, std::uint64_t seed);

// Real su(n)-valued field with Gaussian spectrum of the given width in modes,
// mean zero, RMS of each generator component equal to amplitude.
LieField random_lie_field(const TorusGrid& grid, int rank, double amplitude, double bandwidth, std::uint64_t seed);

}  // namespace monopole
