#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "statedge/image.hpp"

namespace statedge {

enum class BorderPolicy { ClampToEdge };

inline void validate_median_kernel(int k) {
  if (k < 3 || k % 2 == 0) {
    throw std::invalid_argument("median kernel size must be odd and >= 3, got " +
                                std::to_string(k));
  }
}

/// k x k median filter. Each output pixel is the exact median (nth_element
/// selection) of its neighborhood; neighbors past the border replicate the
/// nearest edge pixel, so output size equals input size.
inline GrayImage median_filter(const GrayImage& img, int k = 3,
                               BorderPolicy border = BorderPolicy::ClampToEdge) {
  validate_median_kernel(k);
  (void)border;  // clamp-to-edge is the only policy
  const auto radius = static_cast<std::ptrdiff_t>(k / 2);
  const auto mid = static_cast<std::size_t>(k) * static_cast<std::size_t>(k) / 2;

  GrayImage out{img.width(), img.height()};
  std::vector<std::uint8_t> hood(static_cast<std::size_t>(k) * static_cast<std::size_t>(k));
  for (std::size_t r = 0; r < img.height(); ++r) {
    for (std::size_t c = 0; c < img.width(); ++c) {
      std::size_t n = 0;
      for (std::ptrdiff_t dr = -radius; dr <= radius; ++dr) {
        for (std::ptrdiff_t dc = -radius; dc <= radius; ++dc) {
          hood[n++] = img.clamped(static_cast<std::ptrdiff_t>(r) + dr,
                                  static_cast<std::ptrdiff_t>(c) + dc);
        }
      }
      std::nth_element(hood.begin(), hood.begin() + static_cast<std::ptrdiff_t>(mid), hood.end());
      out(r, c) = hood[mid];
    }
  }
  return out;
}

}  // namespace statedge
