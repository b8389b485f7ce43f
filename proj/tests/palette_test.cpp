/* Copyright 2026 The Semcomm Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "semcomm/palette.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "semcomm/error.hpp"

namespace semcomm {
namespace {

TEST(ExtractPaletteTest, UniformRegion) {
  const RasterImage img(4, 4, Rgb{12, 34, 56});
  const SegmentationArray seg(4, 4, Label{3});
  const auto p = extract_palette(img, seg);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p.find(Label{3}), (Rgb{12, 34, 56}));
}

TEST(ExtractPaletteTest, HalfRoundsUp) {
  // Mean of 127 and 128 is 127.5.
  const RasterImage img(2, 1, {Rgb{127, 0, 255}, Rgb{128, 1, 254}});
  const SegmentationArray seg(2, 1, Label{0});
  EXPECT_EQ(extract_palette(img, seg).find(Label{0}), (Rgb{128, 1, 255}));
}

TEST(ExtractPaletteTest, OneEntryPerPresentLabel) {
  const std::uint8_t v[] = {0, 5, 5, 0};
  const RasterImage img(2, 2, {Rgb{0, 0, 0}, Rgb{10, 10, 10}, Rgb{20, 20, 20},
                               Rgb{2, 2, 2}});
  const auto p = extract_palette(img, SegmentationArray::from_values(2, 2, v));
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p.find(Label{0}), (Rgb{1, 1, 1}));
  EXPECT_EQ(p.find(Label{5}), (Rgb{15, 15, 15}));
}

TEST(ExtractPaletteTest, DimensionMismatch) {
  EXPECT_THROW(extract_palette(RasterImage(2, 2, kWhite),
                               SegmentationArray(2, 3, Label{0})),
               DimensionMismatch);
}

TEST(ExtractPaletteTest, MatchesBruteForceOracle) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t w = 1 + rng() % 48, h = 1 + rng() % 48;
    const auto img = testing::random_image(rng, w, h);
    const auto labels = testing::random_labels(rng, w * h, rng() % 12, rng() % 2);
    const auto p =
        extract_palette(img, SegmentationArray::from_values(w, h, labels));
    const auto expected = testing::brute_force_palette(
        {img.pixels().begin(), img.pixels().end()}, labels);
    ASSERT_EQ(p.size(), expected.size());
    for (const auto& [label, color] : expected) {
      ASSERT_EQ(p.find(Label{static_cast<std::uint8_t>(label)}), color)
          << "trial " << trial << " label " << label;
    }
  }
}

TEST(ExtractPaletteTest, InvariantUnderPixelPermutation) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng() % 500;
    const auto img = testing::random_image(rng, n, 1);
    const auto labels = testing::random_labels(rng, n, 6, false);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Rgb> px;
    std::vector<std::uint8_t> lb;
    for (auto i : order) {
      px.push_back(img.pixels()[i]);
      lb.push_back(labels[i]);
    }
    EXPECT_EQ(extract_palette(img, SegmentationArray::from_values(n, 1, labels)),
              extract_palette(RasterImage(n, 1, px),
                              SegmentationArray::from_values(n, 1, lb)));
  }
}

TEST(RenderTest, PaintsLabelColors) {
  const std::uint8_t v[] = {0, 2};
  const ColorPalette p({{Label{0}, kWhite}, {Label{2}, Rgb{9, 8, 7}}});
  EXPECT_EQ(render_colored_segmented(SegmentationArray::from_values(2, 1, v), p),
            RasterImage(2, 1, {kWhite, Rgb{9, 8, 7}}));
}

TEST(RenderTest, UncoveredLabel) {
  const std::uint8_t v[] = {0, 2};
  try {
    render_colored_segmented(SegmentationArray::from_values(2, 1, v),
                             ColorPalette({{Label{0}, kWhite}}));
    FAIL() << "expected an error";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("uncovered label 2"), std::string::npos);
  }
}

TEST(RenderTest, RenderedImageIsAFixedPoint) {
  // Extracting from a rendered image gives back the palette it was drawn with.
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t w = 1 + rng() % 40, h = 1 + rng() % 40;
    const auto seg = SegmentationArray::from_values(
        w, h, testing::random_labels(rng, w * h, 20, true));
    const auto palette =
        extract_palette(testing::random_image(rng, w, h), seg);
    const auto rendered = render_colored_segmented(seg, palette);
    ASSERT_EQ(extract_palette(rendered, seg), palette);
    ASSERT_EQ(render_colored_segmented(seg, extract_palette(rendered, seg)),
              rendered);
  }
}

TEST(RecolorTest, SetsBackgroundWhiteOnly) {
  const ColorPalette p({{Label{0}, Rgb{3, 3, 3}}, {Label{4}, Rgb{5, 6, 7}}});
  const auto q = recolor_background(p, Label{0});
  EXPECT_EQ(q.find(Label{0}), kWhite);
  EXPECT_EQ(q.find(Label{4}), (Rgb{5, 6, 7}));
  EXPECT_EQ(recolor_background(q, Label{0}), q);
}

TEST(RecolorTest, AbsentBackground) {
  const ColorPalette p({{Label{4}, Rgb{5, 6, 7}}});
  try {
    recolor_background(p, Label{0});
    FAIL() << "expected an error";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("background label absent"),
              std::string::npos);
  }
}

TEST(RecolorTest, IdempotentAndOnlyTouchesBackground) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<PaletteEntry> entries;
    for (int v = 0; v < 21; ++v) {
      if (rng() % 2) {
        entries.push_back({Label{static_cast<std::uint8_t>(v)},
                           Rgb{static_cast<std::uint8_t>(rng()),
                               static_cast<std::uint8_t>(rng()),
                               static_cast<std::uint8_t>(rng())}});
      }
    }
    if (entries.empty()) continue;
    const ColorPalette p(entries);
    const Label bg = entries[rng() % entries.size()].label;
    const auto once = recolor_background(p, bg);
    ASSERT_EQ(recolor_background(once, bg), once);
    for (const auto& e : p.entries()) {
      ASSERT_EQ(once.find(e.label), e.label == bg ? kWhite : e.color);
    }
  }
}

TEST(SeparationTest, ChebyshevDistance) {
  const ColorPalette p({{Label{0}, kWhite}, {Label{1}, Rgb{250, 200, 254}},
                        {Label{2}, Rgb{0, 0, 0}}});
  EXPECT_EQ(background_separation(p, Label{0}), 55);
  EXPECT_TRUE(background_well_separated(p, Label{0}));
  EXPECT_FALSE(background_well_separated(p, Label{0}, 56));
  EXPECT_FALSE(background_separation(ColorPalette({{Label{0}, kWhite}}), Label{0}));
}

TEST(SeparationTest, WhiteObjectCollidesWithRecoloredBackground) {
  const ColorPalette p({{Label{0}, Rgb{1, 1, 1}}, {Label{9}, kWhite}});
  EXPECT_TRUE(background_well_separated(p, Label{0}));
  const auto q = recolor_background(p, Label{0});
  EXPECT_EQ(background_separation(q, Label{0}), 0);
  EXPECT_FALSE(background_well_separated(q, Label{0}));
}

}  // namespace
}  // namespace semcomm
