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

#include <algorithm>
#include <array>
#include <cstdlib>
#include <string>

#include "semcomm/error.hpp"

namespace semcomm {
namespace {

std::uint8_t mean_half_up(std::uint64_t sum, std::uint64_t count) {
  return static_cast<std::uint8_t>((2 * sum + count) / (2 * count));
}

}  // namespace

ColorPalette extract_palette(const RasterImage& image,
                             const SegmentationArray& segmentation) {
  if (!image.same_shape(segmentation.width(), segmentation.height())) {
    throw DimensionMismatch(
        "dimension mismatch: image " + std::to_string(image.width()) + "x" +
        std::to_string(image.height()) + " vs segmentation " +
        std::to_string(segmentation.width()) + "x" +
        std::to_string(segmentation.height()));
  }
  struct Accumulator {
    std::uint64_t r = 0, g = 0, b = 0, count = 0;
  };
  std::array<Accumulator, 256> acc{};
  const auto pixels = image.pixels();
  const auto labels = segmentation.labels();
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    auto& a = acc[labels[i].value];
    a.r += pixels[i].r;
    a.g += pixels[i].g;
    a.b += pixels[i].b;
    ++a.count;
  }
  std::vector<PaletteEntry> entries;
  for (std::size_t v = 0; v < acc.size(); ++v) {
    const auto& a = acc[v];
    if (a.count == 0) continue;
    entries.push_back({Label{static_cast<std::uint8_t>(v)},
                       Rgb{mean_half_up(a.r, a.count),
                           mean_half_up(a.g, a.count),
                           mean_half_up(a.b, a.count)}});
  }
  return ColorPalette(std::move(entries));
}

RasterImage render_colored_segmented(const SegmentationArray& segmentation,
                                     const ColorPalette& palette) {
  std::array<std::optional<Rgb>, 256> lut{};
  for (const auto& e : palette.entries()) lut[e.label.value] = e.color;

  std::vector<Rgb> pixels;
  pixels.reserve(segmentation.pixel_count());
  for (const auto label : segmentation.labels()) {
    const auto& color = lut[label.value];
    if (!color) {
      throw InvalidArgument("uncovered label " + std::to_string(label.value));
    }
    pixels.push_back(*color);
  }
  return RasterImage(segmentation.width(), segmentation.height(),
                     std::move(pixels));
}

ColorPalette recolor_background(const ColorPalette& palette,
                                Label background_label) {
  if (!palette.contains(background_label)) {
    throw InvalidArgument("background label absent: " +
                          std::to_string(background_label.value));
  }
  return palette.with_color(background_label, kWhite);
}

std::optional<int> background_separation(const ColorPalette& palette,
                                         Label background_label) {
  const auto bg = palette.find(background_label);
  if (!bg) return std::nullopt;
  std::optional<int> best;
  for (const auto& e : palette.entries()) {
    if (e.label == background_label) continue;
    const int d = std::max({std::abs(e.color.r - bg->r),
                            std::abs(e.color.g - bg->g),
                            std::abs(e.color.b - bg->b)});
    if (!best || d < *best) best = d;
  }
  return best;
}

bool background_well_separated(const ColorPalette& palette,
                               Label background_label, int min_distance) {
  const auto d = background_separation(palette, background_label);
  return !d || *d >= min_distance;
}

}  // namespace semcomm
