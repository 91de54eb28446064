#include <gtest/gtest.h>

#include <cmath>

#include "stereodepth/depthmap.hpp"
#include "stereodepth/netpbm.hpp"
#include "test_support.hpp"

namespace sd = stereodepth;
using sd::DepthMap;
using sd::DisparityMap;
using sd::Match;

namespace {

DisparityMap row_map(std::initializer_list<sd::DisparityCell> cells) {
  return DisparityMap(static_cast<int>(cells.size()), 1, std::vector<sd::DisparityCell>(cells));
}

DisparityMap random_disparities(sd::testing::Rng& rng) {
  std::uniform_int_distribution<int> side(1, 20);
  DisparityMap dmap(side(rng), side(rng));
  const int max_d = std::uniform_int_distribution<int>(1, 80)(rng);
  std::uniform_int_distribution<int> disparity(0, max_d);
  std::bernoulli_distribution unmatched(0.2);
  for (auto& cell : dmap.cells()) {
    if (!unmatched(rng)) cell = Match{disparity(rng), 0};
  }
  return dmap;
}

DepthMap scaled(const DepthMap& depth, double factor) {
  DepthMap out = depth;
  for (auto& cell : out.cells()) {
    if (cell) *cell *= factor;
  }
  return out;
}

}  // namespace

TEST(DisparityToDepth, Reciprocal) {
  const auto depth = sd::disparity_to_depth(row_map({Match{4, 0}}));
  EXPECT_EQ(depth.at(0, 0), 0.25);
}

TEST(DisparityToDepth, ZeroDisparityGetsTwiceTheLargestDepth) {
  const auto depth = sd::disparity_to_depth(row_map({Match{1, 0}, Match{2, 3}, Match{4, 0}, Match{0, 0}}));
  EXPECT_EQ(depth.at(0, 0), 1.0);
  EXPECT_EQ(depth.at(1, 0), 0.5);
  EXPECT_EQ(depth.at(2, 0), 0.25);
  EXPECT_EQ(depth.at(3, 0), 2.0);
}

TEST(DisparityToDepth, OnlyZeroDisparitiesUseUnitDepth) {
  const auto depth = sd::disparity_to_depth(row_map({Match{0, 0}, std::nullopt}));
  EXPECT_EQ(depth.at(0, 0), 1.0);
  EXPECT_FALSE(depth.at(1, 0));
}

TEST(DisparityToDepth, UnmatchedPropagates) {
  const auto depth = sd::disparity_to_depth(DisparityMap(3, 2));
  for (const auto& cell : depth.cells()) EXPECT_FALSE(cell);
}

TEST(DisparityToDepth, ReciprocityProperty) {
  sd::testing::Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const auto dmap = random_disparities(rng);
    const auto depth = sd::disparity_to_depth(dmap);
    ASSERT_TRUE(depth.same_shape(dmap));
    for (std::size_t i = 0; i < dmap.size(); ++i) {
      const auto& d = dmap.cells()[i];
      const auto& z = depth.cells()[i];
      ASSERT_EQ(d.has_value(), z.has_value());
      if (!d) continue;
      ASSERT_GT(*z, 0.0);
      ASSERT_TRUE(std::isfinite(*z));
      if (d->disparity >= 1) {
        // 1/d is correctly rounded, so the product is 1 to within one ulp.
        ASSERT_EQ(*z, 1.0 / d->disparity);
        ASSERT_NEAR(*z * d->disparity, 1.0, 0x1p-52);
      }
    }
  }
}

TEST(Render, EquationExamples) {
  const DepthMap depth(4, 1, std::vector<sd::DepthCell>{1.0, 0.5, 0.25, std::nullopt});
  const auto gray = sd::render(depth);
  EXPECT_EQ(gray.at(0, 0), 0);    // deepest is black
  EXPECT_EQ(gray.at(1, 0), 128);  // 127.5 rounds up
  EXPECT_EQ(gray.at(2, 0), 191);  // 191.25
  EXPECT_EQ(gray.at(3, 0), 255);  // unmatched is white
}

TEST(Render, NothingMatchedIsAllWhite) {
  const auto gray = sd::render(DepthMap(5, 4));
  for (auto v : gray.cells()) EXPECT_EQ(v, 255);
}

TEST(Render, ZeroDisparityPixelsAreBlack) {
  const auto gray = sd::render(sd::disparity_to_depth(row_map({Match{0, 0}, Match{1, 0}, Match{2, 0}})));
  EXPECT_EQ(gray.at(0, 0), 0);
  EXPECT_EQ(gray.at(1, 0), 128);  // 255 - 255 * 1 / 2
  EXPECT_EQ(gray.at(2, 0), 191);  // 255 - 255 * 0.5 / 2
}

TEST(Render, Properties) {
  sd::testing::Rng rng(22);
  for (int trial = 0; trial < 300; ++trial) {
    const auto depth = sd::disparity_to_depth(random_disparities(rng));
    const auto gray = sd::render(depth);
    const auto deepest = sd::max_depth(depth);
    for (std::size_t i = 0; i < depth.size(); ++i) {
      const auto& zi = depth.cells()[i];
      if (!zi) {
        ASSERT_EQ(gray.cells()[i], 255);
        continue;
      }
      ASSERT_EQ(gray.cells()[i] == 0, *zi == *deepest) << "only maxdepth cells are black here";
      for (std::size_t j = 0; j < depth.size(); ++j) {
        const auto& zj = depth.cells()[j];
        if (zj && *zi > *zj) {
          ASSERT_LE(gray.cells()[i], gray.cells()[j]);
        }
      }
    }
    const auto bytes = sd::write_pgm(gray);
    for (double factor : {7.3, 0.001, 3.0, 1e6, 0.1}) {
      ASSERT_EQ(sd::write_pgm(sd::render(scaled(depth, factor))), bytes) << "factor " << factor;
    }
  }
}

TEST(DisparityGray, SentinelEncoding) {
  const auto gray = sd::disparity_to_gray(row_map({Match{0, 0}, std::nullopt, Match{254, 0}}));
  EXPECT_EQ(gray.at(0, 0), 0);
  EXPECT_EQ(gray.at(1, 0), 255);
  EXPECT_EQ(gray.at(2, 0), 254);
  EXPECT_THROW(sd::disparity_to_gray(row_map({Match{255, 0}})), sd::Error);
}
