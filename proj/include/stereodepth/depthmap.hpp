#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>

#include "image.hpp"
#include "matcher.hpp"

namespace stereodepth {

/// Relative depth with focal length times baseline normalised to 1, so a
/// disparity of d pixels has depth 1/d. Empty optional marks an unmatched pixel.
using DepthCell = std::optional<double>;
using DepthMap = Raster<DepthCell>;

inline constexpr std::uint8_t kUnmatchedGray = 255;

/// d >= 1 maps to 1/d. Zero disparity (a point at infinity) maps to twice the
/// largest finite depth in the image, or to 1 when no cell has d >= 1.
inline DepthMap disparity_to_depth(const DisparityMap& dmap) {
  int min_positive = 0;
  for (const DisparityCell& cell : dmap.cells()) {
    if (cell && cell->disparity >= 1 && (min_positive == 0 || cell->disparity < min_positive)) {
      min_positive = cell->disparity;
    }
  }
  const double zero_disparity_depth = min_positive > 0 ? 2.0 / min_positive : 1.0;

  DepthMap depth(dmap.width(), dmap.height());
  auto out = depth.cells().begin();
  for (const DisparityCell& cell : dmap.cells()) {
    if (cell) *out = cell->disparity >= 1 ? 1.0 / cell->disparity : zero_disparity_depth;
    ++out;
  }
  return depth;
}

inline std::optional<double> max_depth(const DepthMap& depth) {
  std::optional<double> best;
  for (const DepthCell& cell : depth.cells()) {
    if (cell && (!best || *cell > *best)) best = *cell;
  }
  return best;
}

/// Gray level 255 - 255 * depth / maxdepth, rounded half up and clamped.
/// The deepest pixels come out black and unmatched pixels white.
inline GrayImage render(const DepthMap& depth) {
  GrayImage gray(depth.width(), depth.height(), kUnmatchedGray);
  const std::optional<double> deepest = max_depth(depth);
  if (!deepest) return gray;

  // Uniformly rescaling every depth perturbs depth / maxdepth by a few ulps;
  // the nudge keeps exact half-way values rounding the same way.
  constexpr double kHalfUpNudge = 1e-7;
  auto out = gray.cells().begin();
  for (const DepthCell& cell : depth.cells()) {
    if (cell) {
      const double ratio = *cell / *deepest;
      const double level = std::floor(255.0 - 255.0 * ratio + 0.5 + kHalfUpNudge);
      *out = static_cast<std::uint8_t>(std::clamp(level, 0.0, 255.0));
    }
    ++out;
  }
  return gray;
}

/// Encodes disparities as gray levels with 255 reserved for unmatched pixels.
inline GrayImage disparity_to_gray(const DisparityMap& dmap) {
  GrayImage gray(dmap.width(), dmap.height(), kUnmatchedGray);
  auto out = gray.cells().begin();
  for (const DisparityCell& cell : dmap.cells()) {
    if (cell) {
      if (cell->disparity < 0 || cell->disparity >= kUnmatchedGray) {
        throw Error(ErrorKind::ConfigInvalid, "disparity " + std::to_string(cell->disparity) +
                                                  " cannot be encoded below the 255 sentinel");
      }
      *out = static_cast<std::uint8_t>(cell->disparity);
    }
    ++out;
  }
  return gray;
}

}  // namespace stereodepth
