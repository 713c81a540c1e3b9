#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "statedge/image.hpp"

namespace statedge {

/// Salt-and-pepper corruption parameters.
struct NoiseSpec {
  double density{0.10};     // per-pixel corruption probability
  double salt_ratio{0.5};   // share of corrupted pixels set to 255 (rest to 0)
  std::uint64_t seed{0};
};

inline void validate(const NoiseSpec& spec) {
  if (!(spec.density >= 0.0 && spec.density <= 1.0)) {
    throw std::invalid_argument("noise density must be in [0,1]");
  }
  if (!(spec.salt_ratio >= 0.0 && spec.salt_ratio <= 1.0)) {
    throw std::invalid_argument("salt ratio must be in [0,1]");
  }
}

namespace detail {

// Top 53 bits of one mt19937_64 draw mapped to [0,1). std::mt19937_64's
// output sequence is fixed by the standard; std::uniform_real_distribution
// is not, so it is avoided here.
inline double unit_draw(std::mt19937_64& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Injects salt-and-pepper noise.
///
/// Generator: std::mt19937_64 seeded with spec.seed. Every pixel consumes
/// exactly two draws in row-major order, the first deciding corruption
/// (u < density) and the second its polarity (u < salt_ratio -> 255). A
/// pixel's draws therefore sit at fixed stream positions 2k and 2k+1.
/// Changing any of this changes every golden noisy image.
inline GrayImage add_salt_pepper(const GrayImage& img, const NoiseSpec& spec) {
  validate(spec);
  std::mt19937_64 rng{spec.seed};
  GrayImage out = img;
  for (auto& px : out.pixels()) {
    const double corrupt = detail::unit_draw(rng);
    const double polarity = detail::unit_draw(rng);
    if (corrupt < spec.density) px = polarity < spec.salt_ratio ? 255 : 0;
  }
  return out;
}

}  // namespace statedge
