#pragma once

// Binary Netpbm codecs: P6 (RGB) in, P5 (gray) out, maxval 255 only.
// Readers accept any whitespace runs and '#' comments between header
// tokens; writers always emit the canonical "P?\n<w> <h>\n255\n" header.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "image.hpp"

namespace stereodepth {

using Bytes = std::vector<std::uint8_t>;

namespace detail {

constexpr bool is_space(std::uint8_t c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

// Upper bound per dimension; keeps width * height * 3 far from overflow.
inline constexpr long kMaxDimension = 1L << 15;

struct NetpbmHeader {
  int width = 0;
  int height = 0;
  std::size_t payload_offset = 0;
};

class HeaderCursor {
 public:
  explicit HeaderCursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  // Skips at least one separator (whitespace or comment) before a token.
  void skip_separators() {
    std::size_t start = pos_;
    while (pos_ < bytes_.size()) {
      const std::uint8_t c = bytes_[pos_];
      if (is_space(c)) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else {
        break;
      }
    }
    if (pos_ == start) throw Error(ErrorKind::MalformedHeader, "expected whitespace between header tokens");
    if (pos_ == bytes_.size()) throw Error(ErrorKind::MalformedHeader, "header ends early");
  }

  long read_number(std::string_view what) {
    long value = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      value = value * 10 + (bytes_[pos_] - '0');
      ++pos_;
      if (++digits > 6) throw Error(ErrorKind::MalformedHeader, std::string(what) + " is too large");
    }
    if (digits == 0) throw Error(ErrorKind::MalformedHeader, "expected a number for " + std::string(what));
    return value;
  }

  void expect_magic(char kind) {
    if (bytes_.size() < 2 || bytes_[0] != 'P' || bytes_[1] != static_cast<std::uint8_t>(kind)) {
      throw Error(ErrorKind::MalformedHeader, std::string("expected magic P") + kind);
    }
    pos_ = 2;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  void expect_single_space() {
    if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) {
      throw Error(ErrorKind::MalformedHeader, "expected whitespace after maxval");
    }
    ++pos_;
  }

  std::size_t position() const noexcept { return pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

inline NetpbmHeader parse_header(std::span<const std::uint8_t> bytes, char kind, int channels) {
  HeaderCursor cursor(bytes);
  cursor.expect_magic(kind);
  cursor.skip_separators();
  const long width = cursor.read_number("width");
  cursor.skip_separators();
  const long height = cursor.read_number("height");
  cursor.skip_separators();
  const long maxval = cursor.read_number("maxval");
  cursor.expect_single_space();

  if (width < 1 || height < 1 || width > kMaxDimension || height > kMaxDimension) {
    throw Error(ErrorKind::MalformedHeader,
                "dimensions " + std::to_string(width) + "x" + std::to_string(height) + " out of range");
  }
  if (maxval < 1 || maxval > 65535) {
    throw Error(ErrorKind::MalformedHeader, "maxval " + std::to_string(maxval) + " out of range");
  }
  if (maxval != 255) {
    throw Error(ErrorKind::UnsupportedMaxval, "maxval " + std::to_string(maxval) + " (only 255 is supported)");
  }

  NetpbmHeader header{static_cast<int>(width), static_cast<int>(height), cursor.position()};
  const std::size_t need = static_cast<std::size_t>(header.width) * header.height * channels;
  const std::size_t have = bytes.size() - header.payload_offset;
  if (have < need) {
    throw Error(ErrorKind::TruncatedPayload,
                "need " + std::to_string(need) + " payload bytes, have " + std::to_string(have));
  }
  return header;
}

inline Bytes canonical_header(char kind, int width, int height) {
  const std::string text =
      std::string("P") + kind + "\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  return Bytes(text.begin(), text.end());
}

}  // namespace detail

inline RgbImage read_ppm(std::span<const std::uint8_t> bytes) {
  const auto header = detail::parse_header(bytes, '6', 3);
  std::vector<Rgb> pixels(static_cast<std::size_t>(header.width) * header.height);
  const std::uint8_t* src = bytes.data() + header.payload_offset;
  for (auto& p : pixels) {
    p = Rgb{src[0], src[1], src[2]};
    src += 3;
  }
  return RgbImage(header.width, header.height, std::move(pixels));
}

inline GrayImage read_pgm(std::span<const std::uint8_t> bytes) {
  const auto header = detail::parse_header(bytes, '5', 1);
  const auto* first = bytes.data() + header.payload_offset;
  std::vector<std::uint8_t> pixels(first, first + static_cast<std::size_t>(header.width) * header.height);
  return GrayImage(header.width, header.height, std::move(pixels));
}

inline Bytes write_ppm(const RgbImage& img) {
  Bytes out = detail::canonical_header('6', img.width(), img.height());
  out.reserve(out.size() + img.size() * 3);
  for (const Rgb& p : img.cells()) {
    out.push_back(p.r);
    out.push_back(p.g);
    out.push_back(p.b);
  }
  return out;
}

inline Bytes write_pgm(const GrayImage& img) {
  Bytes out = detail::canonical_header('5', img.width(), img.height());
  out.insert(out.end(), img.cells().begin(), img.cells().end());
  return out;
}

inline Bytes as_bytes(std::string_view text) { return Bytes(text.begin(), text.end()); }

}  // namespace stereodepth
