#pragma once

#include <bbmlab/spectral_function.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace bbm {

using Rng = std::mt19937_64;

/// Gaussian coefficients on |xi| <= radius (in frequency units). With
/// `real_valued` the coefficients are Hermitian so the physical function is real.
inline SpectralFunction random_band_limited(const FrequencyGrid& grid, double radius, Rng& rng,
                                            bool real_valued = false) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto top = std::min<std::int64_t>(grid.max_index(),
                                          static_cast<std::int64_t>(std::floor(radius * grid.subdivisions())));
  std::vector<Entry> entries;
  for (std::int64_t i = real_valued ? 0 : -top; i <= top; ++i) {
    complex c(normal(rng), normal(rng));
    if (real_valued && i == 0) c = complex(c.real(), 0.0);
    entries.push_back({i, c});
    if (real_valued && i > 0) entries.push_back({-i, std::conj(c)});
  }
  return SpectralFunction::from_entries(grid, std::move(entries));
}

/// Real, smooth profile exp(-xi^2 / (2 width^2)) with seeded random phases on
/// |xi| <= radius, scaled to unit FL1 norm.
inline SpectralFunction smooth_profile(const FrequencyGrid& grid, std::uint64_t seed, double radius = 4.0,
                                       double width = 1.5) {
  Rng rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const auto top = std::min<std::int64_t>(grid.max_index(),
                                          static_cast<std::int64_t>(std::floor(radius * grid.subdivisions())));
  std::vector<Entry> entries;
  double mass = 0.0;
  for (std::int64_t i = 0; i <= top; ++i) {
    const double xi = grid.frequency(i);
    const double a = std::exp(-xi * xi / (2.0 * width * width));
    const complex c = i == 0 ? complex(a) : std::polar(a, angle(rng));
    entries.push_back({i, c});
    mass += a;
    if (i > 0) {
      entries.push_back({-i, std::conj(c)});
      mass += a;
    }
  }
  const double scale = 1.0 / (mass * grid.weight());
  for (auto& e : entries) e.value *= scale;
  return SpectralFunction::from_entries(grid, std::move(entries));
}

}  // namespace bbm
