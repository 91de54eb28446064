#pragma once

// Synthetic rectified stereo pairs with exact ground truth.
//
// A scene is a stack of textured rectangles (back to front), each at a fixed
// integer disparity. An implicit full-frame background at disparity 0 sits
// underneath every layer. Texture is re-rolled per pixel until it differs by
// more than the SAD threshold from every left pixel within 2 * max_disparity
// columns, so the true correspondent is the only candidate that passes the gate.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "image.hpp"
#include "matcher.hpp"

namespace stereodepth {

struct Rect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  constexpr bool contains(int px, int py) const noexcept {
    return px >= x && px < x + width && py >= y && py < y + height;
  }
  friend constexpr bool operator==(const Rect&, const Rect&) = default;
};

struct Layer {
  int disparity = 0;
  Rect region;  // left-image coordinates
  std::uint64_t texture_seed = 0;

  friend constexpr bool operator==(const Layer&, const Layer&) = default;
};

struct SyntheticScene {
  int width = 0;
  int height = 0;
  int max_disparity = 64;
  double tolerance_fraction = 0.025;  // gate the texture must stay outside of
  std::vector<Layer> layers;          // back to front

  friend bool operator==(const SyntheticScene&, const SyntheticScene&) = default;
};

struct SyntheticPair {
  StereoPair pair;
  DisparityMap truth;  // Match::cost is always 0
};

struct EvalReport {
  double density = 0.0;
  double bad_pixel_rate = 0.0;
  double mean_abs_disparity_error = 0.0;
};

inline void validate(const SyntheticScene& scene) {
  auto fail = [](const std::string& why) { throw Error(ErrorKind::SceneInvalid, why); };
  if (scene.width < 1 || scene.height < 1) fail("scene dimensions must be positive");
  if (scene.max_disparity < 1) fail("max_disparity must be at least 1");
  if (!(scene.tolerance_fraction >= 0.0 && scene.tolerance_fraction <= 1.0)) {
    fail("tolerance must lie in [0, 1]");
  }
  for (std::size_t i = 0; i < scene.layers.size(); ++i) {
    const Layer& layer = scene.layers[i];
    const std::string id = "layer " + std::to_string(i) + ": ";
    if (layer.disparity < 0) fail(id + "negative disparity");
    if (layer.disparity >= scene.width) {
      fail(id + "disparity " + std::to_string(layer.disparity) + " is not below width " +
           std::to_string(scene.width));
    }
    if (layer.disparity > scene.max_disparity) {
      fail(id + "disparity " + std::to_string(layer.disparity) + " exceeds max_disparity " +
           std::to_string(scene.max_disparity));
    }
    const Rect& r = layer.region;
    if (r.width < 1 || r.height < 1 || r.x < 0 || r.y < 0 || r.x + r.width > scene.width ||
        r.y + r.height > scene.height) {
      fail(id + "region must be non-empty and inside the frame");
    }
  }
}

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr Rgb texel(std::uint64_t seed, int x, int y, std::uint32_t attempt, std::uint64_t salt) noexcept {
  std::uint64_t h = splitmix64(seed ^ salt);
  h = splitmix64(h ^ static_cast<std::uint32_t>(x));
  h = splitmix64(h ^ (static_cast<std::uint64_t>(static_cast<std::uint32_t>(y)) << 32));
  h = splitmix64(h ^ attempt);
  return Rgb{static_cast<std::uint8_t>(h), static_cast<std::uint8_t>(h >> 8), static_cast<std::uint8_t>(h >> 16)};
}

inline constexpr std::uint64_t kVisibleSalt = 0x5eedULL;
inline constexpr std::uint64_t kHiddenSalt = 0x41dde7ULL;
inline constexpr std::uint64_t kBackgroundSeed = 0xba5eULL;
inline constexpr std::uint32_t kMaxAttempts = 1u << 16;
inline constexpr int kBackground = -1;

// Re-rolls until the texel clears the gate against every pixel in `neighbors`.
inline Rgb distinct_texel(std::uint64_t seed, int x, int y, std::uint64_t salt, int threshold,
                          std::span<const Rgb> neighbors) {
  for (std::uint32_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const Rgb c = texel(seed, x, y, attempt, salt);
    if (std::all_of(neighbors.begin(), neighbors.end(), [&](Rgb n) { return sad(c, n) > threshold; })) {
      return c;
    }
  }
  throw Error(ErrorKind::SceneInvalid, "cannot draw distinct texture at this tolerance (threshold " +
                                           std::to_string(threshold) + ")");
}

}  // namespace detail

inline SyntheticPair generate_pair(const SyntheticScene& scene) {
  validate(scene);
  const int width = scene.width;
  const int window = 2 * scene.max_disparity;
  const int threshold = static_cast<int>(std::floor(scene.tolerance_fraction * kMaxSad));

  auto disparity_of = [&](int owner) { return owner == detail::kBackground ? 0 : scene.layers[owner].disparity; };
  auto seed_of = [&](int owner) {
    return owner == detail::kBackground ? detail::kBackgroundSeed : scene.layers[owner].texture_seed;
  };

  RgbImage left(width, scene.height);
  RgbImage right(width, scene.height);
  DisparityMap truth(width, scene.height);

  std::vector<int> left_owner(width);
  std::vector<int> right_owner(width);
  std::vector<Rgb> scratch;

  for (int y = 0; y < scene.height; ++y) {
    for (int x = 0; x < width; ++x) {
      left_owner[x] = detail::kBackground;
      for (int i = static_cast<int>(scene.layers.size()) - 1; i >= 0; --i) {
        if (scene.layers[i].region.contains(x, y)) {
          left_owner[x] = i;
          break;
        }
      }
    }
    // Right-image pixel x shows layer L's texel from left column x + d_L.
    for (int x = 0; x < width; ++x) {
      right_owner[x] = detail::kBackground;
      for (int i = static_cast<int>(scene.layers.size()) - 1; i >= 0; --i) {
        const Layer& layer = scene.layers[i];
        if (layer.region.contains(x + layer.disparity, y)) {
          right_owner[x] = i;
          break;
        }
      }
    }

    const auto left_row = left.row(y);
    for (int x = 0; x < width; ++x) {
      const int lo = std::max(0, x - window);
      left_row[x] = detail::distinct_texel(seed_of(left_owner[x]), x, y, detail::kVisibleSalt, threshold,
                                           std::span<const Rgb>(left_row.data() + lo, x - lo));
    }

    const auto right_row = right.row(y);
    for (int x = 0; x < width; ++x) {
      const int owner = right_owner[x];
      const int source = x + disparity_of(owner);
      if (left_owner[source] == owner) {
        right_row[x] = left_row[source];
      } else {
        // Hidden (or out-of-frame) surface: visible only on the right, so it
        // must not resemble any left pixel that could be matched against it.
        const int lo = std::max(0, x - window);
        const int hi = std::min(width, x + window + 1);
        right_row[x] = detail::distinct_texel(seed_of(owner), source, y, detail::kHiddenSalt, threshold,
                                              std::span<const Rgb>(left_row.data() + lo, hi - lo));
      }
    }

    for (int x = 0; x < width; ++x) {
      const int d = disparity_of(left_owner[x]);
      if (x - d >= 0 && right_owner[x - d] == left_owner[x]) truth.at(x, y) = Match{d, 0};
    }
  }
  return SyntheticPair{StereoPair(std::move(left), std::move(right)), std::move(truth)};
}

/// Adds independent uniform integer noise in [-amplitude, amplitude] to each
/// channel, clamped to [0, 255].
inline RgbImage jitter(const RgbImage& img, int amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> noise(-amplitude, amplitude);
  auto perturb = [&](std::uint8_t v) { return static_cast<std::uint8_t>(std::clamp(v + noise(rng), 0, 255)); };
  RgbImage out = img;
  for (Rgb& p : out.cells()) {
    p.r = perturb(p.r);
    p.g = perturb(p.g);
    p.b = perturb(p.b);
  }
  return out;
}

/// Density is over all pixels; bad-pixel rate and mean absolute error are
/// over pixels matched in both maps (zero when that set is empty).
inline EvalReport evaluate(const DisparityMap& result, const DisparityMap& truth) {
  if (!result.same_shape(truth)) {
    throw Error(ErrorKind::DimensionMismatch, "result and ground truth differ in size");
  }
  std::size_t matched = 0;
  std::size_t scored = 0;
  std::size_t bad = 0;
  long abs_error = 0;
  for (std::size_t i = 0; i < result.size(); ++i) {
    const DisparityCell& r = result.cells()[i];
    const DisparityCell& t = truth.cells()[i];
    if (!r) continue;
    ++matched;
    if (!t) continue;
    ++scored;
    const int err = std::abs(r->disparity - t->disparity);
    if (err > 0) ++bad;
    abs_error += err;
  }
  EvalReport report;
  report.density = static_cast<double>(matched) / static_cast<double>(result.size());
  if (scored > 0) {
    report.bad_pixel_rate = static_cast<double>(bad) / static_cast<double>(scored);
    report.mean_abs_disparity_error = static_cast<double>(abs_error) / static_cast<double>(scored);
  }
  return report;
}

// Scene text format, one directive per line, '#' starts a comment:
//
//   width=256
//   height=128
//   max_disparity=64        (optional, default 64)
//   tolerance=0.025         (optional, default 0.025)
//   layer disparity=2 x=0 y=0 w=256 h=128 seed=7
namespace detail {

template <typename T>
T parse_value(std::string_view key, std::string_view text, int line) {
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) {
    throw Error(ErrorKind::SceneParse, "line " + std::to_string(line) + ": bad value '" + std::string(text) +
                                           "' for " + std::string(key));
  }
  return value;
}

inline std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) words.push_back(line.substr(i, j - i));
    i = j;
  }
  return words;
}

inline std::pair<std::string_view, std::string_view> split_pair(std::string_view word, int line) {
  const auto eq = word.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw Error(ErrorKind::SceneParse, "line " + std::to_string(line) + ": expected key=value, got '" +
                                           std::string(word) + "'");
  }
  return {word.substr(0, eq), word.substr(eq + 1)};
}

}  // namespace detail

inline SyntheticScene parse_scene(std::string_view text) {
  SyntheticScene scene;
  bool have_width = false;
  bool have_height = false;
  int line_no = 0;

  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    const auto words = detail::split_words(line);
    if (words.empty()) continue;

    if (words.front() == "layer") {
      Layer layer;
      unsigned seen = 0;
      for (std::size_t i = 1; i < words.size(); ++i) {
        const auto [key, value] = detail::split_pair(words[i], line_no);
        unsigned bit = 0;
        if (key == "disparity") {
          layer.disparity = detail::parse_value<int>(key, value, line_no), bit = 1;
        } else if (key == "x") {
          layer.region.x = detail::parse_value<int>(key, value, line_no), bit = 2;
        } else if (key == "y") {
          layer.region.y = detail::parse_value<int>(key, value, line_no), bit = 4;
        } else if (key == "w") {
          layer.region.width = detail::parse_value<int>(key, value, line_no), bit = 8;
        } else if (key == "h") {
          layer.region.height = detail::parse_value<int>(key, value, line_no), bit = 16;
        } else if (key == "seed") {
          layer.texture_seed = detail::parse_value<std::uint64_t>(key, value, line_no), bit = 32;
        } else {
          throw Error(ErrorKind::SceneParse,
                      "line " + std::to_string(line_no) + ": unknown layer key '" + std::string(key) + "'");
        }
        if (seen & bit) {
          throw Error(ErrorKind::SceneParse,
                      "line " + std::to_string(line_no) + ": duplicate key '" + std::string(key) + "'");
        }
        seen |= bit;
      }
      if (seen != 63u) {
        throw Error(ErrorKind::SceneParse, "line " + std::to_string(line_no) +
                                               ": layer needs disparity, x, y, w, h and seed");
      }
      scene.layers.push_back(layer);
      continue;
    }

    if (words.size() != 1) {
      throw Error(ErrorKind::SceneParse, "line " + std::to_string(line_no) + ": expected a single key=value");
    }
    const auto [key, value] = detail::split_pair(words.front(), line_no);
    if (key == "width") {
      scene.width = detail::parse_value<int>(key, value, line_no);
      have_width = true;
    } else if (key == "height") {
      scene.height = detail::parse_value<int>(key, value, line_no);
      have_height = true;
    } else if (key == "max_disparity") {
      scene.max_disparity = detail::parse_value<int>(key, value, line_no);
    } else if (key == "tolerance") {
      scene.tolerance_fraction = detail::parse_value<double>(key, value, line_no);
    } else {
      throw Error(ErrorKind::SceneParse,
                  "line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
  }
  if (!have_width || !have_height) throw Error(ErrorKind::SceneParse, "scene needs width and height");
  return scene;
}

inline std::string format_scene(const SyntheticScene& scene) {
  std::ostringstream out;
  out.precision(17);
  out << "width=" << scene.width << "\nheight=" << scene.height << "\nmax_disparity=" << scene.max_disparity
      << "\ntolerance=" << scene.tolerance_fraction << "\n";
  for (const Layer& l : scene.layers) {
    out << "layer disparity=" << l.disparity << " x=" << l.region.x << " y=" << l.region.y
        << " w=" << l.region.width << " h=" << l.region.height << " seed=" << l.texture_seed << "\n";
  }
  return out.str();
}

}  // namespace stereodepth
