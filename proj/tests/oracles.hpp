#pragma once

// Independent reference computations for tests. Nothing here calls into the
// detector/filter code it is used to check; only the GrayImage/EdgeMap
// containers are shared.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "statedge/image.hpp"

namespace oracle {

using statedge::EdgeMap;
using statedge::GrayImage;

// Sample stddev through the integer identity 12*var = 4*sum(v^2) - sum(v)^2.
inline double stddev4(int a, int b, int c, int d) {
  const long long s = a + b + c + d;
  const long long q = 1LL * a * a + 1LL * b * b + 1LL * c * c + 1LL * d * d;
  return std::sqrt(static_cast<double>(4 * q - s * s) / 12.0);
}

inline int px(const GrayImage& img, std::size_t r, std::size_t c) {
  return img.pixels()[r * img.width() + c];
}

inline double window_stddev(const GrayImage& img, std::size_t r, std::size_t c) {
  return stddev4(px(img, r, c), px(img, r, c + 1), px(img, r + 1, c), px(img, r + 1, c + 1));
}

inline EdgeMap stddev_detect(const GrayImage& img, double tau) {
  EdgeMap m{img.width(), img.height()};
  for (std::size_t r = 0; r + 1 < img.height(); ++r) {
    for (std::size_t c = 0; c + 1 < img.width(); ++c) {
      if (window_stddev(img, r, c) > tau) m.set(r, c);
    }
  }
  return m;
}

struct Origin {
  std::size_t row;
  std::size_t col;
};

// Every window origin whose upper-left value equals `value` and whose
// stddev is within tol of `expected`, in row-major order.
inline std::vector<Origin> scan_windows(const GrayImage& img, int value, double expected,
                                        double tol) {
  std::vector<Origin> hits;
  for (std::size_t r = 0; r + 1 < img.height(); ++r) {
    for (std::size_t c = 0; c + 1 < img.width(); ++c) {
      if (px(img, r, c) == value && std::abs(window_stddev(img, r, c) - expected) <= tol) {
        hits.push_back({r, c});
      }
    }
  }
  return hits;
}

inline int clamp_index(long long v, std::size_t n) {
  if (v < 0) return 0;
  if (v >= static_cast<long long>(n)) return static_cast<int>(n) - 1;
  return static_cast<int>(v);
}

inline int clamped_px(const GrayImage& img, long long r, long long c) {
  return px(img, static_cast<std::size_t>(clamp_index(r, img.height())),
            static_cast<std::size_t>(clamp_index(c, img.width())));
}

// Full sort of the clamped neighborhood.
inline GrayImage median(const GrayImage& img, int k) {
  GrayImage out{img.width(), img.height()};
  const int rad = k / 2;
  for (std::size_t r = 0; r < img.height(); ++r) {
    for (std::size_t c = 0; c < img.width(); ++c) {
      std::vector<int> v;
      for (int dr = -rad; dr <= rad; ++dr) {
        for (int dc = -rad; dc <= rad; ++dc) {
          v.push_back(clamped_px(img, static_cast<long long>(r) + dr, static_cast<long long>(c) + dc));
        }
      }
      std::sort(v.begin(), v.end());
      out(r, c) = static_cast<std::uint8_t>(v[v.size() / 2]);
    }
  }
  return out;
}

// Direct 3x3 correlation with explicit kernels; returns magnitude per pixel.
inline std::vector<double> sobel_magnitude(const GrayImage& img) {
  static constexpr int kx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  static constexpr int ky[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
  std::vector<double> mag(img.size());
  for (std::size_t r = 0; r < img.height(); ++r) {
    for (std::size_t c = 0; c < img.width(); ++c) {
      long long gx = 0, gy = 0;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          const int v = clamped_px(img, static_cast<long long>(r) + i - 1,
                                   static_cast<long long>(c) + j - 1);
          gx += kx[i][j] * v;
          gy += ky[i][j] * v;
        }
      }
      mag[r * img.width() + c] = std::sqrt(static_cast<double>(gx * gx + gy * gy));
    }
  }
  return mag;
}

inline EdgeMap sobel_detect(const GrayImage& img, double threshold) {
  const auto mag = sobel_magnitude(img);
  EdgeMap m{img.width(), img.height()};
  for (std::size_t i = 0; i < mag.size(); ++i) {
    if (mag[i] > threshold) m.set(i / img.width(), i % img.width());
  }
  return m;
}

// Canny written out plainly: a full 2-D Gaussian, per-pixel Sobel on the
// blurred field, angle-bin NMS and a flood fill from strong pixels.
inline EdgeMap canny_detect(const GrayImage& img, double sigma, double low, double high) {
  const std::size_t w = img.width();
  const std::size_t h = img.height();
  const int rad = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> g1;
  double total = 0.0;
  for (int x = -rad; x <= rad; ++x) {
    g1.push_back(std::exp(-(x * x) / (2.0 * sigma * sigma)));
    total += g1.back();
  }
  for (auto& v : g1) v /= total;

  std::vector<double> blur(w * h, 0.0);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int i = -rad; i <= rad; ++i) {
        double row = 0.0;
        for (int j = -rad; j <= rad; ++j) {
          row += g1[j + rad] * clamped_px(img, static_cast<long long>(r) + i, static_cast<long long>(c) + j);
        }
        acc += g1[i + rad] * row;
      }
      blur[r * w + c] = acc;
    }
  }
  auto b = [&](long long r, long long c) {
    return blur[clamp_index(r, h) * w + clamp_index(c, w)];
  };
  std::vector<double> mag(w * h), ang(w * h);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const long long R = r, C = c;
      const double gx = b(R - 1, C + 1) + 2 * b(R, C + 1) + b(R + 1, C + 1) - b(R - 1, C - 1) -
                        2 * b(R, C - 1) - b(R + 1, C - 1);
      const double gy = b(R + 1, C - 1) + 2 * b(R + 1, C) + b(R + 1, C + 1) - b(R - 1, C - 1) -
                        2 * b(R - 1, C) - b(R - 1, C + 1);
      mag[r * w + c] = std::hypot(gx, gy);
      double a = std::atan2(gy, gx) * 180.0 / M_PI;
      if (a < 0) a += 180.0;
      ang[r * w + c] = a;
    }
  }
  auto m_at = [&](long long r, long long c) {
    if (r < 0 || c < 0 || r >= static_cast<long long>(h) || c >= static_cast<long long>(w)) return 0.0;
    return mag[r * w + c];
  };
  std::vector<double> thin(w * h, 0.0);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const double m = mag[r * w + c];
      if (m <= 0) continue;
      const double a = ang[r * w + c];
      int dr, dc;
      if (a < 22.5 || a >= 157.5) { dr = 0; dc = 1; }
      else if (a < 67.5) { dr = 1; dc = 1; }
      else if (a < 112.5) { dr = 1; dc = 0; }
      else { dr = 1; dc = -1; }
      const long long R = r, C = c;
      if (m > m_at(R - dr, C - dc) && m >= m_at(R + dr, C + dc)) thin[r * w + c] = m;
    }
  }
  EdgeMap out{w, h};
  std::vector<std::size_t> queue;
  for (std::size_t i = 0; i < thin.size(); ++i) {
    if (thin[i] > high) {
      out.set(i / w, i % w);
      queue.push_back(i);
    }
  }
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const long long r = queue[q] / w, c = queue[q] % w;
    for (long long nr = r - 1; nr <= r + 1; ++nr) {
      for (long long nc = c - 1; nc <= c + 1; ++nc) {
        if (nr < 0 || nc < 0 || nr >= static_cast<long long>(h) || nc >= static_cast<long long>(w)) continue;
        const std::size_t j = nr * w + nc;
        if (!out(nr, nc) && thin[j] > low) {
          out.set(nr, nc);
          queue.push_back(j);
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

inline GrayImage random_image(std::mt19937_64& rng, std::size_t min_side, std::size_t max_side) {
  std::uniform_int_distribution<std::size_t> side(min_side, max_side);
  std::uniform_int_distribution<int> value(0, 255);
  const std::size_t w = side(rng), h = side(rng);
  GrayImage img{w, h};
  for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(value(rng));
  return img;
}

// Piecewise-smooth image: a few flat regions plus mild jitter, so detectors
// see both flat areas and real edges.
inline GrayImage random_blocky_image(std::mt19937_64& rng, std::size_t w, std::size_t h) {
  std::uniform_int_distribution<int> value(0, 255);
  std::uniform_int_distribution<int> jitter(-3, 3);
  std::uniform_int_distribution<std::size_t> block(2, 6);
  const std::size_t bw = block(rng), bh = block(rng);
  std::vector<int> levels((w / bw + 1) * (h / bh + 1));
  for (auto& l : levels) l = value(rng);
  GrayImage img{w, h};
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const int v = levels[(r / bh) * (w / bw + 1) + c / bw] + jitter(rng);
      img(r, c) = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
    }
  }
  return img;
}

inline GrayImage constant_image(std::size_t w, std::size_t h, std::uint8_t v) {
  return GrayImage{w, h, v};
}

// Columns [0, boundary) = lo, [boundary, w) = hi.
inline GrayImage vertical_step(std::size_t w, std::size_t h, std::size_t boundary,
                               std::uint8_t lo = 0, std::uint8_t hi = 255) {
  GrayImage img{w, h};
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) img(r, c) = c < boundary ? lo : hi;
  }
  return img;
}

}  // namespace oracle
