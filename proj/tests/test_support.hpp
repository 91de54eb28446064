#pragma once

// Seeded generators shared by the unit and acceptance suites.

#include <unistd.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "stereodepth/stereodepth.hpp"

namespace stereodepth::testing {

using Rng = std::mt19937_64;

inline Rgb random_rgb(Rng& rng) {
  std::uniform_int_distribution<int> channel(0, 255);
  return Rgb{static_cast<std::uint8_t>(channel(rng)), static_cast<std::uint8_t>(channel(rng)),
             static_cast<std::uint8_t>(channel(rng))};
}

// Mostly uniform noise, sometimes drawn from a small palette so that
// duplicates and conflicts actually occur.
inline std::vector<Rgb> random_row(Rng& rng, int width) {
  std::vector<Rgb> row(width);
  const bool palette = std::bernoulli_distribution(0.5)(rng);
  std::vector<Rgb> colours(std::uniform_int_distribution<int>(1, 6)(rng));
  for (Rgb& c : colours) c = random_rgb(rng);
  std::uniform_int_distribution<std::size_t> pick(0, colours.size() - 1);
  std::uniform_int_distribution<int> wiggle(-4, 4);
  for (Rgb& p : row) {
    if (palette) {
      p = colours[pick(rng)];
      p.r = static_cast<std::uint8_t>(std::clamp(p.r + wiggle(rng), 0, 255));
    } else {
      p = random_rgb(rng);
    }
  }
  return row;
}

inline RgbImage random_image(Rng& rng, int max_side) {
  std::uniform_int_distribution<int> side(1, max_side);
  const int w = side(rng);
  const int h = side(rng);
  RgbImage img(w, h);
  for (Rgb& p : img.cells()) p = random_rgb(rng);
  return img;
}

inline MatchConfig random_config(Rng& rng, int width) {
  static constexpr double kTolerances[] = {0.0, 0.025, 0.1, 1.0};
  MatchConfig cfg;
  cfg.tolerance_fraction = kTolerances[std::uniform_int_distribution<int>(0, 3)(rng)];
  cfg.max_disparity = std::uniform_int_distribution<int>(1, std::max(1, width - 1))(rng);
  return cfg;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("stereodepth_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace stereodepth::testing
