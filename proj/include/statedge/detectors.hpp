#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "statedge/image.hpp"
#include "statedge/median.hpp"

namespace statedge {

enum class DetectorKind { StdDev, Sobel, Canny };

inline std::string_view to_string(DetectorKind kind) noexcept {
  switch (kind) {
    case DetectorKind::StdDev: return "stddev";
    case DetectorKind::Sobel: return "sobel";
    case DetectorKind::Canny: return "canny";
  }
  return "?";
}

inline std::optional<DetectorKind> parse_detector_kind(std::string_view name) noexcept {
  if (name == "stddev") return DetectorKind::StdDev;
  if (name == "sobel") return DetectorKind::Sobel;
  if (name == "canny") return DetectorKind::Canny;
  return std::nullopt;
}

// Default threshold for the window stddev detector; useful band is roughly 4..9.
inline constexpr double kDefaultTau = 7.0;

struct CannyParams {
  double sigma{1.0};
  double low{40.0};
  double high{100.0};
};

struct DetectorConfig {
  DetectorKind kind{DetectorKind::StdDev};
  double tau{kDefaultTau};
  bool pre_median{true};
  int median_k{3};
  std::optional<double> sobel_threshold;
  CannyParams canny{};
};

inline void validate_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("tau must be a positive finite number");
  }
}

inline void validate_canny(const CannyParams& p) {
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) {
    throw std::invalid_argument("canny sigma must be positive");
  }
  if (!std::isfinite(p.low) || !std::isfinite(p.high) || p.low < 0.0) {
    throw std::invalid_argument("canny thresholds must be finite and non-negative");
  }
  if (!(p.low < p.high)) throw std::invalid_argument("canny low threshold must be < high");
}

inline void validate(const DetectorConfig& cfg) {
  switch (cfg.kind) {
    case DetectorKind::StdDev:
      validate_tau(cfg.tau);
      if (cfg.pre_median) validate_median_kernel(cfg.median_k);
      break;
    case DetectorKind::Sobel:
      if (!cfg.sobel_threshold) throw std::invalid_argument("sobel detector needs a threshold");
      if (!std::isfinite(*cfg.sobel_threshold) || *cfg.sobel_threshold < 0.0) {
        throw std::invalid_argument("sobel threshold must be finite and non-negative");
      }
      break;
    case DetectorKind::Canny:
      validate_canny(cfg.canny);
      break;
  }
}

// ---------------------------------------------------------------------------
// Window standard deviation detector
// ---------------------------------------------------------------------------

/// Flags the upper-left pixel of every 2x2 window whose sample standard
/// deviation is strictly greater than tau. When pre_median is set the image
/// is median filtered (k x k) first. The last row and column are never
/// flagged since they anchor no window.
inline EdgeMap stddev_detect(const GrayImage& img, double tau = kDefaultTau, bool pre_median = true,
                             int k = 3) {
  if (img.width() < 2 || img.height() < 2) {
    throw std::invalid_argument("stddev detector needs an image of at least 2x2");
  }
  validate_tau(tau);
  const GrayImage source = pre_median ? median_filter(img, k) : img;

  EdgeMap edges{img.width(), img.height()};
  for_each_window(source, [&](const Window2x2& w) {
    if (sample_stddev(w.values) > tau) edges.set(w.row, w.col);
  });
  return edges;
}

/// Per-origin stddev values, (H-1) x (W-1).
inline Grid<double> window_stddev_field(const GrayImage& img) {
  if (img.width() < 2 || img.height() < 2) {
    throw std::invalid_argument("window stddev field needs an image of at least 2x2");
  }
  Grid<double> field{img.width() - 1, img.height() - 1, 0.0};
  for_each_window(img, [&](const Window2x2& w) { field(w.row, w.col) = sample_stddev(w.values); });
  return field;
}

// ---------------------------------------------------------------------------
// Sobel
// ---------------------------------------------------------------------------

struct GradientField {
  Grid<double> gx;
  Grid<double> gy;
  Grid<double> magnitude;
};

/// 3x3 Sobel gradients with clamp-to-edge borders.
/// gx = [[-1,0,1],[-2,0,2],[-1,0,1]] (rightward), gy its transpose (downward).
template <typename T>
GradientField sobel_gradients(const Grid<T>& img) {
  const std::size_t w = img.width();
  const std::size_t h = img.height();
  GradientField g{Grid<double>{w, h, 0.0}, Grid<double>{w, h, 0.0}, Grid<double>{w, h, 0.0}};
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const auto ri = static_cast<std::ptrdiff_t>(r);
      const auto ci = static_cast<std::ptrdiff_t>(c);
      auto p = [&](std::ptrdiff_t dr, std::ptrdiff_t dc) {
        return static_cast<double>(img.clamped(ri + dr, ci + dc));
      };
      const double gx = (p(-1, 1) + 2.0 * p(0, 1) + p(1, 1)) - (p(-1, -1) + 2.0 * p(0, -1) + p(1, -1));
      const double gy = (p(1, -1) + 2.0 * p(1, 0) + p(1, 1)) - (p(-1, -1) + 2.0 * p(-1, 0) + p(-1, 1));
      g.gx(r, c) = gx;
      g.gy(r, c) = gy;
      g.magnitude(r, c) = std::sqrt(gx * gx + gy * gy);
    }
  }
  return g;
}

/// Sobel magnitude sqrt(gx^2 + gy^2) > threshold.
inline EdgeMap sobel_detect(const GrayImage& img, double threshold) {
  if (img.width() < 3 || img.height() < 3) {
    throw std::invalid_argument("sobel detector needs an image of at least 3x3");
  }
  if (!std::isfinite(threshold)) throw std::invalid_argument("sobel threshold must be finite");
  const auto g = sobel_gradients(img);
  EdgeMap edges{img.width(), img.height()};
  for (std::size_t r = 0; r < img.height(); ++r) {
    for (std::size_t c = 0; c < img.width(); ++c) {
      if (g.magnitude(r, c) > threshold) edges.set(r, c);
    }
  }
  return edges;
}

// ---------------------------------------------------------------------------
// Canny
// ---------------------------------------------------------------------------

inline std::size_t gaussian_radius(double sigma) {
  return static_cast<std::size_t>(std::ceil(3.0 * sigma));
}

/// 1-D Gaussian truncated at ceil(3 sigma), normalized to sum 1.
inline std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian sigma must be positive");
  const auto radius = static_cast<std::ptrdiff_t>(gaussian_radius(sigma));
  std::vector<double> kernel;
  kernel.reserve(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (std::ptrdiff_t x = -radius; x <= radius; ++x) {
    const double v = std::exp(-static_cast<double>(x * x) / (2.0 * sigma * sigma));
    kernel.push_back(v);
    sum += v;
  }
  for (auto& v : kernel) v /= sum;
  return kernel;
}

/// Separable Gaussian blur, clamp-to-edge.
inline Grid<double> gaussian_blur(const GrayImage& img, double sigma) {
  const auto kernel = gaussian_kernel(sigma);
  const auto radius = static_cast<std::ptrdiff_t>(kernel.size() / 2);
  const std::size_t w = img.width();
  const std::size_t h = img.height();

  Grid<double> horizontal{w, h, 0.0};
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      double acc = 0.0;
      for (std::ptrdiff_t d = -radius; d <= radius; ++d) {
        acc += kernel[static_cast<std::size_t>(d + radius)] *
               img.clamped(static_cast<std::ptrdiff_t>(r), static_cast<std::ptrdiff_t>(c) + d);
      }
      horizontal(r, c) = acc;
    }
  }
  Grid<double> out{w, h, 0.0};
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      double acc = 0.0;
      for (std::ptrdiff_t d = -radius; d <= radius; ++d) {
        acc += kernel[static_cast<std::size_t>(d + radius)] *
               horizontal.clamped(static_cast<std::ptrdiff_t>(r) + d, static_cast<std::ptrdiff_t>(c));
      }
      out(r, c) = acc;
    }
  }
  return out;
}

namespace detail {

// Neighbor offsets (dr, dc) along the quantized gradient direction.
struct DirectionStep {
  int dr;
  int dc;
};

// Quantizes atan2(gy, gx) into 0/45/90/135 degree bins. Rows grow downward,
// so a 45 degree gradient points toward (+1,+1).
inline DirectionStep quantize_direction(double gx, double gy) noexcept {
  double angle = std::atan2(gy, gx) * 180.0 / 3.14159265358979323846;
  if (angle < 0.0) angle += 180.0;
  if (angle < 22.5 || angle >= 157.5) return {0, 1};
  if (angle < 67.5) return {1, 1};
  if (angle < 112.5) return {1, 0};
  return {1, -1};
}

}  // namespace detail

/// Keeps local maxima of the gradient magnitude along the gradient
/// direction. Ties: strictly greater than the backward neighbor, at least
/// the forward one, so a symmetric ridge keeps exactly one pixel.
/// Neighbors outside the image count as zero.
inline Grid<double> non_maximum_suppression(const GradientField& g) {
  const std::size_t w = g.magnitude.width();
  const std::size_t h = g.magnitude.height();
  Grid<double> out{w, h, 0.0};
  auto mag_or_zero = [&](std::ptrdiff_t r, std::ptrdiff_t c) {
    if (r < 0 || c < 0 || r >= static_cast<std::ptrdiff_t>(h) || c >= static_cast<std::ptrdiff_t>(w)) {
      return 0.0;
    }
    return g.magnitude(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  };
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const double m = g.magnitude(r, c);
      if (m <= 0.0) continue;
      const auto step = detail::quantize_direction(g.gx(r, c), g.gy(r, c));
      const auto ri = static_cast<std::ptrdiff_t>(r);
      const auto ci = static_cast<std::ptrdiff_t>(c);
      const double backward = mag_or_zero(ri - step.dr, ci - step.dc);
      const double forward = mag_or_zero(ri + step.dr, ci + step.dc);
      if (m > backward && m >= forward) out(r, c) = m;
    }
  }
  return out;
}

/// Double threshold with 8-connected linking: pixels above `high` seed
/// edges, pixels above `low` survive iff connected to a seed.
inline EdgeMap hysteresis(const Grid<double>& thinned, double low, double high) {
  const std::size_t w = thinned.width();
  const std::size_t h = thinned.height();
  EdgeMap edges{w, h};
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      if (thinned(r, c) > high) {
        edges.set(r, c);
        stack.emplace_back(r, c);
      }
    }
  }
  while (!stack.empty()) {
    const auto [r, c] = stack.back();
    stack.pop_back();
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        const auto nr = static_cast<std::ptrdiff_t>(r) + dr;
        const auto nc = static_cast<std::ptrdiff_t>(c) + dc;
        if (nr < 0 || nc < 0 || nr >= static_cast<std::ptrdiff_t>(h) ||
            nc >= static_cast<std::ptrdiff_t>(w)) {
          continue;
        }
        const auto ur = static_cast<std::size_t>(nr);
        const auto uc = static_cast<std::size_t>(nc);
        if (!edges(ur, uc) && thinned(ur, uc) > low) {
          edges.set(ur, uc);
          stack.emplace_back(ur, uc);
        }
      }
    }
  }
  return edges;
}

/// Gaussian smoothing, Sobel gradients, 4-bin non-maximum suppression and
/// hysteresis. Thresholds are in Sobel magnitude units.
inline EdgeMap canny_detect(const GrayImage& img, double sigma, double low, double high) {
  validate_canny({sigma, low, high});
  const std::size_t min_side = std::max<std::size_t>(3, gaussian_radius(sigma) + 1);
  if (img.width() < min_side || img.height() < min_side) {
    throw std::invalid_argument("canny needs an image of at least " + std::to_string(min_side) +
                                "x" + std::to_string(min_side) + " for sigma " +
                                std::to_string(sigma));
  }
  const auto smoothed = gaussian_blur(img, sigma);
  const auto gradients = sobel_gradients(smoothed);
  return hysteresis(non_maximum_suppression(gradients), low, high);
}

inline EdgeMap canny_detect(const GrayImage& img, const CannyParams& p) {
  return canny_detect(img, p.sigma, p.low, p.high);
}

/// Runs the configured detector.
inline EdgeMap detect(const GrayImage& img, const DetectorConfig& cfg) {
  validate(cfg);
  switch (cfg.kind) {
    case DetectorKind::StdDev: return stddev_detect(img, cfg.tau, cfg.pre_median, cfg.median_k);
    case DetectorKind::Sobel: return sobel_detect(img, *cfg.sobel_threshold);
    case DetectorKind::Canny: return canny_detect(img, cfg.canny);
  }
  throw std::invalid_argument("unknown detector");
}

}  // namespace statedge
