#pragma once

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "statedge/image.hpp"

namespace statedge {

enum class ImageFileFormat { PgmBinary, PgmAscii, Png };

/// Malformed or truncated image data. offset is the byte position where
/// decoding stopped.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_{offset} {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Unreadable source or unwritable sink.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Bytes = std::vector<std::uint8_t>;

namespace detail {

// Netpbm header/raster tokenizer. Comments (# to end of line) are allowed
// wherever whitespace is.
class PnmReader {
 public:
  explicit PnmReader(std::span<const std::uint8_t> bytes) : bytes_{bytes} {}

  std::size_t pos() const noexcept { return pos_; }
  std::size_t token_start() const noexcept { return token_start_; }
  bool at_end() const noexcept { return pos_ >= bytes_.size(); }
  std::uint8_t peek() const noexcept { return bytes_[pos_]; }

  std::string magic() {
    if (bytes_.size() < 2) throw FormatError("missing PGM magic number", 0);
    pos_ = 2;
    return {static_cast<char>(bytes_[0]), static_cast<char>(bytes_[1])};
  }

  void skip_space_and_comments() {
    while (!at_end()) {
      const auto c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n' && peek() != '\r') ++pos_;
      } else if (is_space(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  // Reads one unsigned decimal field preceded by whitespace/comments.
  unsigned long number(std::string_view what) {
    skip_space_and_comments();
    if (at_end()) throw FormatError("truncated data: expected " + std::string(what), pos_);
    const std::size_t start = pos_;
    token_start_ = start;
    unsigned long value = 0;
    while (!at_end() && peek() >= '0' && peek() <= '9') {
      value = value * 10 + (peek() - '0');
      if (value > 0xFFFFFFFFul) throw FormatError(std::string(what) + " out of range", start);
      ++pos_;
    }
    if (pos_ == start) throw FormatError("expected " + std::string(what), start);
    if (!at_end() && !is_space(peek()) && peek() != '#') {
      throw FormatError("unexpected character after " + std::string(what), pos_);
    }
    return value;
  }

  // The single whitespace byte separating a P5 header from its raster.
  void raster_separator() {
    if (at_end() || !is_space(peek())) throw FormatError("missing whitespace before raster", pos_);
    ++pos_;
  }

  std::span<const std::uint8_t> take(std::size_t n) {
    if (bytes_.size() - pos_ < n) {
      throw FormatError("truncated raster: expected " + std::to_string(n) + " bytes, found " +
                            std::to_string(bytes_.size() - pos_),
                        bytes_.size());
    }
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  static bool is_space(std::uint8_t c) noexcept {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_{0};
  std::size_t token_start_{0};
};

inline GrayImage load_pgm(std::span<const std::uint8_t> bytes, ImageFileFormat format) {
  PnmReader in{bytes};
  const std::string expected = format == ImageFileFormat::PgmBinary ? "P5" : "P2";
  if (in.magic() != expected) throw FormatError("expected magic " + expected, 0);

  const auto width = in.number("width");
  if (width == 0) throw FormatError("zero image width", in.token_start());
  const auto height = in.number("height");
  if (height == 0) throw FormatError("zero image height", in.token_start());
  const auto maxval = in.number("maxval");
  if (maxval != 255) {
    throw FormatError("unsupported maxval " + std::to_string(maxval) + " (only 255)",
                      in.token_start());
  }

  const std::size_t count = static_cast<std::size_t>(width) * height;
  std::vector<std::uint8_t> data;
  if (format == ImageFileFormat::PgmBinary) {
    in.raster_separator();
    auto raster = in.take(count);
    data.assign(raster.begin(), raster.end());
  } else {
    data.reserve(std::min(count, bytes.size()));
    for (std::size_t i = 0; i < count; ++i) {
      const auto v = in.number("sample");
      if (v > 255) {
        throw FormatError("sample " + std::to_string(v) + " exceeds maxval", in.token_start());
      }
      data.push_back(static_cast<std::uint8_t>(v));
    }
  }
  return GrayImage{width, height, std::move(data)};
}

inline Bytes save_pgm(const GrayImage& img, ImageFileFormat format) {
  const bool binary = format == ImageFileFormat::PgmBinary;
  std::string header = std::string(binary ? "P5" : "P2") + "\n" + std::to_string(img.width()) +
                       " " + std::to_string(img.height()) + "\n255\n";
  Bytes out(header.begin(), header.end());
  if (binary) {
    auto px = img.pixels();
    out.insert(out.end(), px.begin(), px.end());
    return out;
  }
  for (std::size_t r = 0; r < img.height(); ++r) {
    std::string line;
    for (std::size_t c = 0; c < img.width(); ++c) {
      if (c) line += ' ';
      line += std::to_string(img(r, c));
    }
    line += '\n';
    out.insert(out.end(), line.begin(), line.end());
  }
  return out;
}

inline std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
  return static_cast<std::uint8_t>(std::lround(0.299 * r + 0.587 * g + 0.114 * b));
}

// RAII guard for libpng's simplified-API control structure.
struct PngImage {
  png_image image{};
  PngImage() {
    image.version = PNG_IMAGE_VERSION;
  }
  ~PngImage() { png_image_free(&image); }
  PngImage(const PngImage&) = delete;
  PngImage& operator=(const PngImage&) = delete;
};

inline GrayImage load_png(std::span<const std::uint8_t> bytes) {
  PngImage png;
  if (!png_image_begin_read_from_memory(&png.image, bytes.data(), bytes.size())) {
    throw FormatError(std::string("PNG: ") + png.image.message, 0);
  }
  if (png.image.format & PNG_FORMAT_FLAG_LINEAR) {
    throw FormatError("PNG: only 8-bit depth is supported", 0);
  }
  const bool color = (png.image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  // Read with an alpha channel so libpng never composites; alpha is dropped.
  png.image.format = color ? PNG_FORMAT_RGBA : PNG_FORMAT_GA;
  const std::size_t channels = color ? 4 : 2;
  const std::size_t width = png.image.width;
  const std::size_t height = png.image.height;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(png.image));
  if (!png_image_finish_read(&png.image, nullptr, buffer.data(), 0, nullptr)) {
    throw FormatError(std::string("PNG: ") + png.image.message, 0);
  }

  std::vector<std::uint8_t> data(width * height);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto* px = &buffer[i * channels];
    data[i] = color ? luma(px[0], px[1], px[2]) : px[0];
  }
  return GrayImage{width, height, std::move(data)};
}

inline Bytes save_png(const GrayImage& img) {
  PngImage png;
  png.image.width = static_cast<png_uint_32>(img.width());
  png.image.height = static_cast<png_uint_32>(img.height());
  png.image.format = PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&png.image, nullptr, &size, 0, img.pixels().data(), 0, nullptr)) {
    throw IoError(std::string("PNG encode: ") + png.image.message);
  }
  Bytes out(size);
  if (!png_image_write_to_memory(&png.image, out.data(), &size, 0, img.pixels().data(), 0,
                                 nullptr)) {
    throw IoError(std::string("PNG encode: ") + png.image.message);
  }
  out.resize(size);
  return out;
}

}  // namespace detail

/// Decodes an image in the declared format. Color PNGs are reduced to
/// BT.601 luma. Throws FormatError on malformed input.
inline GrayImage load_image(std::span<const std::uint8_t> bytes, ImageFileFormat format) {
  switch (format) {
    case ImageFileFormat::PgmBinary:
    case ImageFileFormat::PgmAscii:
      return detail::load_pgm(bytes, format);
    case ImageFileFormat::Png:
      return detail::load_png(bytes);
  }
  throw std::invalid_argument("unknown image format");
}

/// Encodes an image. P5 output is exactly "P5\n{w} {h}\n255\n" + raster.
inline Bytes save_image(const GrayImage& img, ImageFileFormat format) {
  switch (format) {
    case ImageFileFormat::PgmBinary:
    case ImageFileFormat::PgmAscii:
      return detail::save_pgm(img, format);
    case ImageFileFormat::Png:
      return detail::save_png(img);
  }
  throw std::invalid_argument("unknown image format");
}

/// Sniffs the format from magic bytes.
inline std::optional<ImageFileFormat> detect_format(std::span<const std::uint8_t> bytes) {
  static constexpr std::uint8_t kPngSig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  if (bytes.size() >= 8 && std::equal(std::begin(kPngSig), std::end(kPngSig), bytes.begin())) {
    return ImageFileFormat::Png;
  }
  if (bytes.size() >= 2 && bytes[0] == 'P') {
    if (bytes[1] == '5') return ImageFileFormat::PgmBinary;
    if (bytes[1] == '2') return ImageFileFormat::PgmAscii;
  }
  return std::nullopt;
}

/// .png -> PNG, anything else -> binary PGM.
inline ImageFileFormat format_for_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  for (auto& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return ext == ".png" ? ImageFileFormat::Png : ImageFileFormat::PgmBinary;
}

inline Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading " + path.string());
  return bytes;
}

inline void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error writing " + path.string());
}

/// Loads a file, sniffing the format unless one is given.
inline GrayImage load_image_file(const std::filesystem::path& path,
                                 std::optional<ImageFileFormat> format = std::nullopt) {
  const auto bytes = read_file(path);
  if (!format) format = detect_format(bytes);
  if (!format) throw FormatError("unrecognized image format in " + path.string(), 0);
  return load_image(bytes, *format);
}

inline void save_image_file(const GrayImage& img, const std::filesystem::path& path,
                            std::optional<ImageFileFormat> format = std::nullopt) {
  write_file(path, save_image(img, format.value_or(format_for_path(path))));
}

/// Edge pixels become 255, background 0.
inline GrayImage edge_map_to_image(const EdgeMap& edges) {
  GrayImage img{edges.width(), edges.height(), 0};
  for (std::size_t r = 0; r < edges.height(); ++r) {
    for (std::size_t c = 0; c < edges.width(); ++c) {
      if (edges(r, c)) img(r, c) = 255;
    }
  }
  return img;
}

/// Any nonzero pixel is an edge.
inline EdgeMap image_to_edge_map(const GrayImage& img) {
  EdgeMap edges{img.width(), img.height()};
  for (std::size_t r = 0; r < img.height(); ++r) {
    for (std::size_t c = 0; c < img.width(); ++c) {
      if (img(r, c)) edges.set(r, c);
    }
  }
  return edges;
}

}  // namespace statedge
