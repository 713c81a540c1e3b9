#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace statedge {

// Grid
//
// Dense row-major 2-D array. GrayImage and the gradient fields used by the
// baselines are both grids; EdgeMap wraps one to keep it a distinct type.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;

  Grid(std::size_t width, std::size_t height, T fill = T{})
      : width_{width}, height_{height}, data_(width * height, fill) {
    check_dims();
  }

  Grid(std::size_t width, std::size_t height, std::vector<T> data)
      : width_{width}, height_{height}, data_(std::move(data)) {
    check_dims();
    if (data_.size() != width_ * height_) {
      throw std::invalid_argument("grid data length " + std::to_string(data_.size()) +
                                  " != " + std::to_string(width_) + "x" +
                                  std::to_string(height_));
    }
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  // Unchecked access.
  T& operator()(std::size_t row, std::size_t col) noexcept { return data_[row * width_ + col]; }
  const T& operator()(std::size_t row, std::size_t col) const noexcept {
    return data_[row * width_ + col];
  }

  // Bounds-checked access.
  const T& at(std::size_t row, std::size_t col) const {
    if (row >= height_ || col >= width_) {
      throw std::out_of_range("pixel (" + std::to_string(row) + "," + std::to_string(col) +
                              ") outside " + std::to_string(height_) + "x" +
                              std::to_string(width_) + " grid");
    }
    return data_[row * width_ + col];
  }

  // Clamp-to-edge read for neighborhoods that reach past the border.
  const T& clamped(std::ptrdiff_t row, std::ptrdiff_t col) const noexcept {
    const auto r = std::clamp<std::ptrdiff_t>(row, 0, static_cast<std::ptrdiff_t>(height_) - 1);
    const auto c = std::clamp<std::ptrdiff_t>(col, 0, static_cast<std::ptrdiff_t>(width_) - 1);
    return data_[static_cast<std::size_t>(r) * width_ + static_cast<std::size_t>(c)];
  }

  std::span<T> pixels() noexcept { return data_; }
  std::span<const T> pixels() const noexcept { return data_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  void check_dims() const {
    if (width_ == 0 || height_ == 0) {
      throw std::invalid_argument("grid dimensions must be at least 1x1");
    }
  }

  std::size_t width_{0};
  std::size_t height_{0};
  std::vector<T> data_;
};

/// 8-bit grayscale image. Intensities are in [0,255] by construction.
using GrayImage = Grid<std::uint8_t>;

/// Binary edge mask with the same dimensions as the image it came from.
class EdgeMap {
 public:
  EdgeMap() = default;
  EdgeMap(std::size_t width, std::size_t height) : mask_{width, height, 0} {}

  std::size_t width() const noexcept { return mask_.width(); }
  std::size_t height() const noexcept { return mask_.height(); }
  std::size_t size() const noexcept { return mask_.size(); }

  bool operator()(std::size_t row, std::size_t col) const noexcept { return mask_(row, col) != 0; }
  bool at(std::size_t row, std::size_t col) const { return mask_.at(row, col) != 0; }
  void set(std::size_t row, std::size_t col, bool edge = true) noexcept {
    mask_(row, col) = edge ? 1 : 0;
  }

  std::size_t count() const noexcept {
    std::size_t n = 0;
    for (auto v : mask_.pixels()) n += v;
    return n;
  }

  bool same_shape(const EdgeMap& other) const noexcept {
    return width() == other.width() && height() == other.height();
  }

  // Every edge in *this is also an edge in `other`.
  bool is_subset_of(const EdgeMap& other) const {
    if (!same_shape(other)) throw std::invalid_argument("edge map dimension mismatch");
    auto a = mask_.pixels();
    auto b = other.mask_.pixels();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] && !b[i]) return false;
    }
    return true;
  }

  friend bool operator==(const EdgeMap&, const EdgeMap&) = default;

 private:
  Grid<std::uint8_t> mask_;
};

inline std::uint8_t get_pixel(const GrayImage& img, std::size_t row, std::size_t col) {
  return img.at(row, col);
}

/// 2x2 neighborhood anchored at its upper-left (candidate) pixel.
/// values = {(r,c), (r,c+1), (r+1,c), (r+1,c+1)}.
struct Window2x2 {
  std::size_t row{0};
  std::size_t col{0};
  std::array<std::uint8_t, 4> values{};

  friend bool operator==(const Window2x2&, const Window2x2&) = default;
};

inline Window2x2 window_at(const GrayImage& img, std::size_t row, std::size_t col) {
  if (row + 1 >= img.height() || col + 1 >= img.width()) {
    throw std::out_of_range("2x2 window origin (" + std::to_string(row) + "," +
                            std::to_string(col) + ") does not fit");
  }
  return {row, col, {img(row, col), img(row, col + 1), img(row + 1, col), img(row + 1, col + 1)}};
}

/// Calls fn(window) for every stride-1 window origin in row-major order.
template <typename Fn>
void for_each_window(const GrayImage& img, Fn&& fn) {
  if (img.width() < 2 || img.height() < 2) return;
  for (std::size_t r = 0; r + 1 < img.height(); ++r) {
    for (std::size_t c = 0; c + 1 < img.width(); ++c) {
      fn(Window2x2{r, c, {img(r, c), img(r, c + 1), img(r + 1, c), img(r + 1, c + 1)}});
    }
  }
}

/// All (H-1)(W-1) windows in row-major origin order; empty for images
/// narrower or shorter than 2.
inline std::vector<Window2x2> iterate_windows(const GrayImage& img) {
  std::vector<Window2x2> out;
  if (img.width() >= 2 && img.height() >= 2) {
    out.reserve((img.width() - 1) * (img.height() - 1));
  }
  for_each_window(img, [&](const Window2x2& w) { out.push_back(w); });
  return out;
}

/// Sample standard deviation (divisor n-1 = 3) of four intensities.
///
/// The sum and all deviations are multiples of 1/4, so everything up to the
/// final division and sqrt is exact in double precision. This makes the
/// result permutation- and shift-invariant bit for bit.
inline double sample_stddev(const std::array<std::uint8_t, 4>& values) noexcept {
  double sum = 0.0;
  for (auto v : values) sum += v;
  const double mean = sum / 4.0;
  double ss = 0.0;
  for (auto v : values) {
    const double d = static_cast<double>(v) - mean;
    ss += d * d;
  }
  return std::sqrt(ss / 3.0);
}

}  // namespace statedge
