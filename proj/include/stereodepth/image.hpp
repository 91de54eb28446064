#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "error.hpp"

namespace stereodepth {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend constexpr bool operator==(const Rgb&, const Rgb&) = default;
};

/// Dense row-major raster. Dimensions are fixed at construction and the
/// backing store always holds exactly width * height cells.
template <typename Cell>
class Raster {
 public:
  using value_type = Cell;

  Raster() = default;

  Raster(int width, int height, const Cell& fill = Cell{}) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
      throw Error(ErrorKind::MalformedHeader, "raster dimensions must be positive");
    }
    cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  Raster(int width, int height, std::vector<Cell> cells)
      : width_(width), height_(height), cells_(std::move(cells)) {
    if (width < 1 || height < 1) {
      throw Error(ErrorKind::MalformedHeader, "raster dimensions must be positive");
    }
    if (cells_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
      throw Error(ErrorKind::DimensionMismatch, "cell count does not equal width * height");
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return cells_.size(); }

  Cell& at(int x, int y) { return cells_[index(x, y)]; }
  const Cell& at(int x, int y) const { return cells_[index(x, y)]; }

  std::span<Cell> row(int y) {
    return {cells_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
  }
  std::span<const Cell> row(int y) const {
    return {cells_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
  }

  std::span<Cell> cells() noexcept { return cells_; }
  std::span<const Cell> cells() const noexcept { return cells_; }

  bool same_shape(const auto& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<Cell> cells_;
};

using RgbImage = Raster<Rgb>;
using GrayImage = Raster<std::uint8_t>;

/// Left/right views of one scene; construction guarantees equal dimensions.
class StereoPair {
 public:
  StereoPair(RgbImage left, RgbImage right) : left_(std::move(left)), right_(std::move(right)) {
    if (!left_.same_shape(right_)) {
      throw Error(ErrorKind::DimensionMismatch,
                  "left is " + std::to_string(left_.width()) + "x" + std::to_string(left_.height()) +
                      ", right is " + std::to_string(right_.width()) + "x" +
                      std::to_string(right_.height()));
    }
  }

  const RgbImage& left() const noexcept { return left_; }
  const RgbImage& right() const noexcept { return right_; }
  int width() const noexcept { return left_.width(); }
  int height() const noexcept { return left_.height(); }

 private:
  RgbImage left_;
  RgbImage right_;
};

inline StereoPair make_pair(RgbImage left, RgbImage right) {
  return StereoPair(std::move(left), std::move(right));
}

}  // namespace stereodepth
