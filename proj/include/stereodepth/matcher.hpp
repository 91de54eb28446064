#pragma once

// Pixel-to-pixel scanline matching under an RGB SAD tolerance gate, with
// per-row uniqueness enforced by cost comparison.
//
// Two row matchers are provided. match_row_oracle follows the procedure
// step by step (enumerate, sort, claim-or-fall-back). match_row_fast makes
// one pass over the window per pixel. They must agree cell for cell.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "error.hpp"
#include "image.hpp"

namespace stereodepth {

inline constexpr int kMaxSad = 3 * 255;

struct Match {
  int disparity = 0;
  int cost = 0;

  friend constexpr bool operator==(const Match&, const Match&) = default;
};

/// Empty optional means the left pixel has no accepted correspondent.
using DisparityCell = std::optional<Match>;
using DisparityMap = Raster<DisparityCell>;
using DisparityRow = std::vector<DisparityCell>;

struct MatchConfig {
  double tolerance_fraction = 0.025;
  int max_disparity = 64;

  /// Default configuration for an image of the given width.
  static MatchConfig for_width(int width, double tolerance_fraction = 0.025) {
    return MatchConfig{tolerance_fraction, std::min(64, width - 1)};
  }
};

constexpr int sad(Rgb p, Rgb q) noexcept {
  return std::abs(int{p.r} - int{q.r}) + std::abs(int{p.g} - int{q.g}) + std::abs(int{p.b} - int{q.b});
}

inline void validate_tolerance(const MatchConfig& cfg) {
  if (!(cfg.tolerance_fraction >= 0.0 && cfg.tolerance_fraction <= 1.0)) {
    throw Error(ErrorKind::ConfigInvalid,
                "tolerance fraction " + std::to_string(cfg.tolerance_fraction) + " is outside [0, 1]");
  }
  if (cfg.max_disparity < 1) {
    throw Error(ErrorKind::ConfigInvalid,
                "max disparity " + std::to_string(cfg.max_disparity) + " must be at least 1");
  }
}

inline void validate(const MatchConfig& cfg, int width) {
  validate_tolerance(cfg);
  if (cfg.max_disparity >= width) {
    throw Error(ErrorKind::ConfigInvalid, "max disparity " + std::to_string(cfg.max_disparity) +
                                              " must be below image width " + std::to_string(width));
  }
}

/// Largest SAD accepted as a match: floor(tolerance_fraction * 765).
inline int sad_threshold(const MatchConfig& cfg) {
  validate_tolerance(cfg);
  return static_cast<int>(std::floor(cfg.tolerance_fraction * kMaxSad));
}

namespace detail {

inline void require_equal_rows(std::span<const Rgb> left_row, std::span<const Rgb> right_row) {
  if (left_row.size() != right_row.size()) {
    throw Error(ErrorKind::DimensionMismatch, "left row has " + std::to_string(left_row.size()) +
                                                  " pixels, right row has " +
                                                  std::to_string(right_row.size()));
  }
}

}  // namespace detail

inline DisparityRow match_row_oracle(std::span<const Rgb> left_row, std::span<const Rgb> right_row,
                                     const MatchConfig& cfg) {
  detail::require_equal_rows(left_row, right_row);
  const int threshold = sad_threshold(cfg);
  const int width = static_cast<int>(left_row.size());

  struct Candidate {
    int right_x;
    int cost;
  };
  struct Claim {
    int left_x = -1;
    int cost = 0;
  };

  DisparityRow out(left_row.size());
  std::vector<Claim> claims(left_row.size());

  for (int xl = 0; xl < width; ++xl) {
    std::vector<Candidate> candidates;
    for (int xr = std::max(0, xl - cfg.max_disparity); xr <= xl; ++xr) {
      const int cost = sad(left_row[xl], right_row[xr]);
      if (cost <= threshold) candidates.push_back({xr, cost});
    }
    // Cheapest first; among equal costs the smallest disparity (largest x_r).
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      return a.cost != b.cost ? a.cost < b.cost : a.right_x > b.right_x;
    });

    for (const Candidate& c : candidates) {
      Claim& claim = claims[c.right_x];
      if (claim.left_x >= 0) {
        if (c.cost >= claim.cost) continue;
        out[claim.left_x].reset();  // evicted; never re-matched
      }
      claim = Claim{xl, c.cost};
      out[xl] = Match{xl - c.right_x, c.cost};
      break;
    }
  }
  return out;
}

/// Same result as match_row_oracle. The next-best fallback after a lost conflict
/// is equivalent to taking the minimum (cost, disparity) over candidates that
/// can win their column, so no candidate list or sort is needed.
inline DisparityRow match_row_fast(std::span<const Rgb> left_row, std::span<const Rgb> right_row,
                                   const MatchConfig& cfg) {
  detail::require_equal_rows(left_row, right_row);
  const int threshold = sad_threshold(cfg);
  const int width = static_cast<int>(left_row.size());

  constexpr int kUnclaimed = -1;
  std::vector<int> owner(left_row.size(), kUnclaimed);
  // Cost held by a column's owner; kMaxSad + 1 for unclaimed so that any
  // gated cost can take it.
  std::vector<int> owner_cost(left_row.size(), kMaxSad + 1);
  DisparityRow out(left_row.size());

  for (int xl = 0; xl < width; ++xl) {
    const Rgb p = left_row[xl];
    const int lo = std::max(0, xl - cfg.max_disparity);
    int best_x = -1;
    int best_cost = threshold + 1;
    // Scanning x_r downward visits disparities in increasing order, so a
    // strict '<' keeps the smallest disparity among equal costs.
    for (int xr = xl; xr >= lo; --xr) {
      const int cost = sad(p, right_row[xr]);
      if (cost < best_cost && cost < owner_cost[xr]) {
        best_cost = cost;
        best_x = xr;
        if (cost == 0) break;
      }
    }
    if (best_x < 0) continue;
    if (owner[best_x] != kUnclaimed) out[owner[best_x]].reset();
    owner[best_x] = xl;
    owner_cost[best_x] = best_cost;
    out[xl] = Match{xl - best_x, best_cost};
  }
  return out;
}

/// Matches every row of the pair independently. Rows are split across
/// `threads` workers; the result does not depend on the split.
inline DisparityMap match_pair(const StereoPair& pair, const MatchConfig& cfg, unsigned threads = 1) {
  validate(cfg, pair.width());
  DisparityMap result(pair.width(), pair.height());

  auto work = [&](int first_row, int last_row) {
    for (int y = first_row; y < last_row; ++y) {
      const DisparityRow row = match_row_fast(pair.left().row(y), pair.right().row(y), cfg);
      std::copy(row.begin(), row.end(), result.row(y).begin());
    }
  };

  const int height = pair.height();
  const unsigned workers = std::clamp(threads, 1u, static_cast<unsigned>(height));
  if (workers == 1) {
    work(0, height);
    return result;
  }
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) {
      const int first = static_cast<int>(static_cast<long>(height) * i / workers);
      const int last = static_cast<int>(static_cast<long>(height) * (i + 1) / workers);
      pool.emplace_back(work, first, last);
    }
  }
  return result;
}

}  // namespace stereodepth
