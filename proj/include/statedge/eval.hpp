#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "statedge/detectors.hpp"
#include "statedge/image.hpp"

namespace statedge {

// ---------------------------------------------------------------------------
// Reference fixture
// ---------------------------------------------------------------------------

/// 10x10 crop of the Lena image used as the worked example for the window
/// stddev detector.
inline constexpr std::array<std::uint8_t, 100> kSamplePixels = {
    201, 205, 182, 134, 94,  94,  115, 120, 116, 111,  //
    204, 172, 113, 83,  93,  103, 96,  105, 104, 102,  //
    159, 103, 80,  86,  97,  100, 100, 95,  101, 103,  //
    114, 83,  76,  84,  88,  83,  78,  71,  77,  81,   //
    79,  72,  75,  81,  80,  72,  65,  52,  56,  59,   //
    71,  71,  72,  72,  68,  65,  63,  51,  51,  52,   //
    68,  69,  64,  58,  54,  54,  55,  56,  54,  52,   //
    66,  67,  60,  52,  49,  48,  48,  53,  52,  51,   //
    67,  64,  55,  49,  50,  50,  48,  49,  49,  50,   //
    69,  59,  46,  41,  47,  51,  50,  48,  50,  51,   //
};

inline GrayImage sample_fixture() {
  return GrayImage{10, 10, std::vector<std::uint8_t>(kSamplePixels.begin(), kSamplePixels.end())};
}

/// Expected (upper-left value, stddev) pairs with the window origin each
/// one corresponds to in the fixture. Where an upper-left value occurs more
/// than once, the origin is the first row-major window whose stddev matches.
struct Table1Entry {
  std::size_t row;
  std::size_t col;
  std::uint8_t upper_left;
  double expected;
};

inline constexpr std::array<Table1Entry, 10> kTable1 = {{
    {0, 0, 201, 15.7586},
    {1, 1, 172, 39.1833},
    {0, 3, 134, 22.5536},
    {1, 5, 103, 2.8723},
    {0, 6, 115, 10.6771},
    {0, 8, 116, 6.4485},
    {2, 8, 101, 13.4040},
    {3, 1, 83, 4.6547},
    {7, 1, 67, 5.1962},
    {8, 7, 49, 0.8165},
}};

inline constexpr double kTable1Tolerance = 5e-4;

struct Table1Row {
  std::size_t row;
  std::size_t col;
  std::uint8_t upper_left;
  double stddev;
  double expected;
  bool is_edge;

  bool matches() const noexcept { return std::abs(stddev - expected) <= kTable1Tolerance; }
};

/// Recomputes every fixture window and reports the ten expected rows with
/// their edge flag at threshold tau.
inline std::vector<Table1Row> table1_report(double tau = kDefaultTau) {
  validate_tau(tau);
  const auto field = window_stddev_field(sample_fixture());
  std::vector<Table1Row> rows;
  rows.reserve(kTable1.size());
  for (const auto& e : kTable1) {
    const double sd = field(e.row, e.col);
    rows.push_back({e.row, e.col, kSamplePixels[e.row * 10 + e.col], sd, e.expected, sd > tau});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Synthetic scenes with exact ground truth
// ---------------------------------------------------------------------------

enum class SyntheticKind { Constant, VStep, HStep, Diagonal, Checkerboard, Glyph, Composite };

inline SyntheticKind parse_synthetic_kind(std::string_view name) {
  if (name == "constant") return SyntheticKind::Constant;
  if (name == "vstep") return SyntheticKind::VStep;
  if (name == "hstep") return SyntheticKind::HStep;
  if (name == "diagonal") return SyntheticKind::Diagonal;
  if (name == "checkerboard") return SyntheticKind::Checkerboard;
  if (name == "glyph") return SyntheticKind::Glyph;
  if (name == "composite") return SyntheticKind::Composite;
  throw std::invalid_argument("unknown synthetic kind '" + std::string(name) + "'");
}

struct SyntheticParams {
  std::uint8_t low{0};     // region 0 intensity
  std::uint8_t high{255};  // region 1 intensity
  // vstep column / hstep row where region 1 begins; 0 means the midpoint.
  std::size_t boundary{0};
  std::size_t cell{2};  // checkerboard cell size (composite: lower half)
  std::size_t glyph_scale{2};
  std::string text{"EDGE TEXT 2024"};
};

struct SyntheticScene {
  GrayImage image;
  EdgeMap truth;
};

namespace detail {

// 5x7 block letterforms, one 5-bit row per entry, MSB = leftmost column.
inline const std::array<std::uint8_t, 7>* glyph_rows(char ch) noexcept {
  static constexpr std::array<std::array<std::uint8_t, 7>, 26> kLetters = {{
      {0b01110, 0b10001, 0b10001, 0b11111, 0b10001, 0b10001, 0b10001},  // A
      {0b11110, 0b10001, 0b10001, 0b11110, 0b10001, 0b10001, 0b11110},  // B
      {0b01110, 0b10001, 0b10000, 0b10000, 0b10000, 0b10001, 0b01110},  // C
      {0b11110, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b11110},  // D
      {0b11111, 0b10000, 0b10000, 0b11110, 0b10000, 0b10000, 0b11111},  // E
      {0b11111, 0b10000, 0b10000, 0b11110, 0b10000, 0b10000, 0b10000},  // F
      {0b01110, 0b10001, 0b10000, 0b10111, 0b10001, 0b10001, 0b01111},  // G
      {0b10001, 0b10001, 0b10001, 0b11111, 0b10001, 0b10001, 0b10001},  // H
      {0b01110, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110},  // I
      {0b00111, 0b00010, 0b00010, 0b00010, 0b00010, 0b10010, 0b01100},  // J
      {0b10001, 0b10010, 0b10100, 0b11000, 0b10100, 0b10010, 0b10001},  // K
      {0b10000, 0b10000, 0b10000, 0b10000, 0b10000, 0b10000, 0b11111},  // L
      {0b10001, 0b11011, 0b10101, 0b10101, 0b10001, 0b10001, 0b10001},  // M
      {0b10001, 0b10001, 0b11001, 0b10101, 0b10011, 0b10001, 0b10001},  // N
      {0b01110, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01110},  // O
      {0b11110, 0b10001, 0b10001, 0b11110, 0b10000, 0b10000, 0b10000},  // P
      {0b01110, 0b10001, 0b10001, 0b10001, 0b10101, 0b10010, 0b01101},  // Q
      {0b11110, 0b10001, 0b10001, 0b11110, 0b10100, 0b10010, 0b10001},  // R
      {0b01111, 0b10000, 0b10000, 0b01110, 0b00001, 0b00001, 0b11110},  // S
      {0b11111, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100},  // T
      {0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01110},  // U
      {0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01010, 0b00100},  // V
      {0b10001, 0b10001, 0b10001, 0b10101, 0b10101, 0b10101, 0b01010},  // W
      {0b10001, 0b10001, 0b01010, 0b00100, 0b01010, 0b10001, 0b10001},  // X
      {0b10001, 0b10001, 0b01010, 0b00100, 0b00100, 0b00100, 0b00100},  // Y
      {0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b10000, 0b11111},  // Z
  }};
  static constexpr std::array<std::array<std::uint8_t, 7>, 10> kDigits = {{
      {0b01110, 0b10001, 0b10011, 0b10101, 0b11001, 0b10001, 0b01110},  // 0
      {0b00100, 0b01100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110},  // 1
      {0b01110, 0b10001, 0b00001, 0b00010, 0b00100, 0b01000, 0b11111},  // 2
      {0b11111, 0b00010, 0b00100, 0b00010, 0b00001, 0b10001, 0b01110},  // 3
      {0b00010, 0b00110, 0b01010, 0b10010, 0b11111, 0b00010, 0b00010},  // 4
      {0b11111, 0b10000, 0b11110, 0b00001, 0b00001, 0b10001, 0b01110},  // 5
      {0b00110, 0b01000, 0b10000, 0b11110, 0b10001, 0b10001, 0b01110},  // 6
      {0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b01000, 0b01000},  // 7
      {0b01110, 0b10001, 0b10001, 0b01110, 0b10001, 0b10001, 0b01110},  // 8
      {0b01110, 0b10001, 0b10001, 0b01111, 0b00001, 0b00010, 0b01100},  // 9
  }};
  if (ch >= 'a' && ch <= 'z') ch = static_cast<char>(ch - 'a' + 'A');
  if (ch >= 'A' && ch <= 'Z') return &kLetters[static_cast<std::size_t>(ch - 'A')];
  if (ch >= '0' && ch <= '9') return &kDigits[static_cast<std::size_t>(ch - '0')];
  return nullptr;
}

// Tiles the text over the whole canvas, line after line, clipped at the
// border. Advance is 6 cells per character and 8 per line.
inline void rasterize_text(Grid<std::uint8_t>& labels, std::string_view text, std::size_t scale) {
  if (text.empty()) return;
  const std::size_t w = labels.width();
  const std::size_t h = labels.height();
  std::size_t k = 0;
  for (std::size_t top = scale; top < h; top += 8 * scale) {
    for (std::size_t left = scale; left < w; left += 6 * scale, ++k) {
      const auto* rows = glyph_rows(text[k % text.size()]);
      if (!rows) continue;
      for (std::size_t gr = 0; gr < 7; ++gr) {
        for (std::size_t gc = 0; gc < 5; ++gc) {
          if (!(((*rows)[gr] >> (4 - gc)) & 1u)) continue;
          for (std::size_t dy = 0; dy < scale; ++dy) {
            for (std::size_t dx = 0; dx < scale; ++dx) {
              const std::size_t r = top + gr * scale + dy;
              const std::size_t c = left + gc * scale + dx;
              if (r < h && c < w) labels(r, c) = 1;
            }
          }
        }
      }
    }
  }
}

}  // namespace detail

/// Builds a two-level test image and its exact boundary mask. A window
/// origin is a true edge iff its 2x2 window straddles the region boundary,
/// which is where the window stddev detector puts its flag (a vertical step
/// starting at column c is marked at origins (i, c-1)).
inline SyntheticScene make_synthetic(SyntheticKind kind, std::size_t width, std::size_t height,
                                     const SyntheticParams& params = {}) {
  if (width < 4 || height < 4) throw std::invalid_argument("synthetic images must be at least 4x4");
  if (params.cell == 0 || params.glyph_scale == 0) {
    throw std::invalid_argument("cell and glyph scale must be positive");
  }
  Grid<std::uint8_t> labels{width, height, 0};
  const std::size_t col_split = params.boundary ? params.boundary : width / 2;
  const std::size_t row_split = params.boundary ? params.boundary : height / 2;
  auto checker = [&](std::size_t r, std::size_t c) {
    return static_cast<std::uint8_t>(((r / params.cell) + (c / params.cell)) % 2);
  };

  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      std::uint8_t label = 0;
      switch (kind) {
        case SyntheticKind::Constant: break;
        case SyntheticKind::VStep: label = c >= col_split; break;
        case SyntheticKind::HStep: label = r >= row_split; break;
        case SyntheticKind::Diagonal: label = c >= r; break;
        case SyntheticKind::Checkerboard: label = checker(r, c); break;
        case SyntheticKind::Glyph: break;
        case SyntheticKind::Composite:
          // Upper half: vertical step at mid-width. Lower half: checkerboard.
          label = r < height / 2 ? static_cast<std::uint8_t>(c >= width / 2) : checker(r, c);
          break;
      }
      labels(r, c) = label;
    }
  }
  if (kind == SyntheticKind::Glyph) detail::rasterize_text(labels, params.text, params.glyph_scale);

  SyntheticScene scene{GrayImage{width, height, 0}, EdgeMap{width, height}};
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      scene.image(r, c) = labels(r, c) ? params.high : params.low;
    }
  }
  if (params.low == params.high) return scene;
  for (std::size_t r = 0; r + 1 < height; ++r) {
    for (std::size_t c = 0; c + 1 < width; ++c) {
      const auto l = labels(r, c);
      if (labels(r, c + 1) != l || labels(r + 1, c) != l || labels(r + 1, c + 1) != l) {
        scene.truth.set(r, c);
      }
    }
  }
  return scene;
}

inline SyntheticScene make_synthetic(std::string_view kind, std::size_t width, std::size_t height,
                                     const SyntheticParams& params = {}) {
  return make_synthetic(parse_synthetic_kind(kind), width, height, params);
}

// ---------------------------------------------------------------------------
// Scoring
// ---------------------------------------------------------------------------

struct EvalReport {
  std::size_t true_positives{0};
  std::size_t false_positives{0};
  std::size_t false_negatives{0};
  double precision{1.0};
  double recall{1.0};
  double f1{1.0};
  std::size_t tolerance_radius{0};
  DetectorConfig config{};
};

/// One-to-one tolerant matching. Predictions are visited in row-major order
/// and each claims the first still-unmatched truth pixel (row-major within
/// the window) at Chebyshev distance <= radius. Matched pairs are true
/// positives; leftovers are false positives / false negatives. 0/0
/// precision or recall is defined as 1.
inline EvalReport score(const EdgeMap& pred, const EdgeMap& truth, std::size_t radius = 1) {
  if (!pred.same_shape(truth)) throw std::invalid_argument("score: edge map dimension mismatch");
  const std::size_t w = pred.width();
  const std::size_t h = pred.height();
  EdgeMap claimed{w, h};
  std::size_t tp = 0;
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      if (!pred(r, c)) continue;
      const std::size_t r0 = r >= radius ? r - radius : 0;
      const std::size_t c0 = c >= radius ? c - radius : 0;
      const std::size_t r1 = std::min(h - 1, r + radius);
      const std::size_t c1 = std::min(w - 1, c + radius);
      bool matched = false;
      for (std::size_t tr = r0; tr <= r1 && !matched; ++tr) {
        for (std::size_t tc = c0; tc <= c1; ++tc) {
          if (truth(tr, tc) && !claimed(tr, tc)) {
            claimed.set(tr, tc);
            matched = true;
            break;
          }
        }
      }
      tp += matched;
    }
  }

  EvalReport rep;
  rep.true_positives = tp;
  rep.false_positives = pred.count() - tp;
  rep.false_negatives = truth.count() - tp;
  rep.tolerance_radius = radius;
  const auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  rep.precision = ratio(tp, tp + rep.false_positives);
  rep.recall = ratio(tp, tp + rep.false_negatives);
  const double denom = rep.precision + rep.recall;
  rep.f1 = denom > 0.0 ? 2.0 * rep.precision * rep.recall / denom : 0.0;
  return rep;
}

inline EvalReport score(const EdgeMap& pred, const EdgeMap& truth, std::size_t radius,
                        const DetectorConfig& config) {
  auto rep = score(pred, truth, radius);
  rep.config = config;
  return rep;
}

namespace detail {

inline std::string fixed4(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

}  // namespace detail

/// Detector parameters as a single CSV-safe field.
inline std::string describe_parameters(const DetectorConfig& cfg) {
  using detail::fixed4;
  switch (cfg.kind) {
    case DetectorKind::StdDev:
      return "tau=" + fixed4(cfg.tau) +
             ";median=" + (cfg.pre_median ? std::to_string(cfg.median_k) : std::string("off"));
    case DetectorKind::Sobel:
      return "threshold=" + (cfg.sobel_threshold ? fixed4(*cfg.sobel_threshold) : std::string("none"));
    case DetectorKind::Canny:
      return "sigma=" + fixed4(cfg.canny.sigma) + ";low=" + fixed4(cfg.canny.low) +
             ";high=" + fixed4(cfg.canny.high);
  }
  return {};
}

inline constexpr std::string_view kCsvHeader =
    "detector,tau_or_thresholds,tp,fp,fn,precision,recall,f1,tolerance_radius";

inline std::string to_csv_row(const EvalReport& rep) {
  using detail::fixed4;
  std::ostringstream os;
  os << to_string(rep.config.kind) << ',' << describe_parameters(rep.config) << ','
     << rep.true_positives << ',' << rep.false_positives << ',' << rep.false_negatives << ','
     << fixed4(rep.precision) << ',' << fixed4(rep.recall) << ',' << fixed4(rep.f1) << ','
     << rep.tolerance_radius;
  return os.str();
}

inline std::string to_text(const EvalReport& rep) {
  using detail::fixed4;
  std::ostringstream os;
  os << "detector:   " << to_string(rep.config.kind) << " (" << describe_parameters(rep.config)
     << ")\n"
     << "radius:     " << rep.tolerance_radius << "\n"
     << "tp/fp/fn:   " << rep.true_positives << " / " << rep.false_positives << " / "
     << rep.false_negatives << "\n"
     << "precision:  " << fixed4(rep.precision) << "\n"
     << "recall:     " << fixed4(rep.recall) << "\n"
     << "f1:         " << fixed4(rep.f1) << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Montage
// ---------------------------------------------------------------------------

inline constexpr std::size_t kMontageSeparator = 2;

struct MontagePanel {
  std::string label;
  std::size_t first_col;
  std::size_t width;
};

struct Montage {
  GrayImage image;
  std::vector<MontagePanel> panels;
};

/// Places equally sized images side by side with 2-pixel white separators.
/// Labels are optional; when given there must be one per image.
inline Montage montage(std::span<const GrayImage> images, std::span<const std::string> labels = {}) {
  if (images.empty()) throw std::invalid_argument("montage needs at least one image");
  if (!labels.empty() && labels.size() != images.size()) {
    throw std::invalid_argument("montage label count does not match image count");
  }
  const std::size_t w = images.front().width();
  const std::size_t h = images.front().height();
  for (const auto& img : images) {
    if (img.width() != w || img.height() != h) {
      throw std::invalid_argument("montage images must share dimensions");
    }
  }
  const std::size_t n = images.size();
  Montage out{GrayImage{n * w + (n - 1) * kMontageSeparator, h, 255}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t x0 = i * (w + kMontageSeparator);
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t c = 0; c < w; ++c) out.image(r, x0 + c) = images[i](r, c);
    }
    out.panels.push_back({labels.empty() ? std::string{} : labels[i], x0, w});
  }
  return out;
}

}  // namespace statedge
