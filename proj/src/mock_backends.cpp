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

#include "semcomm/mock_backends.hpp"

#include <algorithm>
#include <random>

#include "semcomm/palette.hpp"

namespace semcomm {
namespace {

constexpr std::size_t kTableSize = kObjectClassCount + 1;

ColorPalette make_table() {
  // Standard colormap: bits of the label spread over the high bits of each
  // channel. Label 0 would be black; it is white here so blank canvases read
  // as background.
  std::vector<PaletteEntry> entries;
  for (std::size_t label = 0; label < kTableSize; ++label) {
    std::uint8_t r = 0, g = 0, b = 0;
    std::size_t c = label;
    for (int bit = 7; bit >= 0 && c != 0; --bit) {
      r |= static_cast<std::uint8_t>(((c >> 0) & 1) << bit);
      g |= static_cast<std::uint8_t>(((c >> 1) & 1) << bit);
      b |= static_cast<std::uint8_t>(((c >> 2) & 1) << bit);
      c >>= 3;
    }
    entries.push_back({Label{static_cast<std::uint8_t>(label)},
                       label == 0 ? kWhite : Rgb{r, g, b}});
  }
  return ColorPalette(std::move(entries));
}

int squared_distance(const Rgb& a, const Rgb& b) {
  const int dr = a.r - b.r, dg = a.g - b.g, db = a.b - b.b;
  return dr * dr + dg * dg + db * db;
}

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

}  // namespace

const ColorPalette& builtin_label_table() {
  static const ColorPalette table = make_table();
  return table;
}

SegmentationArray mock_segment(const RasterImage& image) {
  const auto table = builtin_label_table().entries();
  std::vector<Label> labels;
  labels.reserve(image.pixel_count());
  for (const auto& px : image.pixels()) {
    // Entries are sorted by label, so strict < keeps the lowest on ties.
    const PaletteEntry* best = &table.front();
    int best_d = squared_distance(px, best->color);
    for (const auto& e : table) {
      const int d = squared_distance(px, e.color);
      if (d < best_d) {
        best = &e;
        best_d = d;
      }
    }
    labels.push_back(best->label);
  }
  return SegmentationArray(image.width(), image.height(), std::move(labels));
}

Caption mock_caption(const RasterImage& image, Label background_label) {
  std::string names;
  for (const auto label : mock_segment(image).distinct_labels()) {
    if (label == background_label) continue;
    if (!names.empty()) names += " and ";
    names += label_name(label);
  }
  if (names.empty()) names = "background";
  return Caption("a photography of " + names);
}

std::vector<RasterImage> mock_generate(const RasterImage& conditioning,
                                       std::size_t count, std::uint64_t seed) {
  std::vector<RasterImage> out;
  if (count == 0) return out;
  out.reserve(count);
  out.push_back(conditioning);

  const std::size_t width = conditioning.width();
  const std::size_t height = conditioning.height();
  const auto base = mock_segment(conditioning);
  const auto table = builtin_label_table().entries();

  // Raw engine output only; the standard distributions are not portable.
  std::mt19937_64 rng(seed);
  const std::size_t x0 = rng() % width;
  const std::size_t y0 = rng() % height;

  std::size_t w = 0, h = 0;
  for (std::size_t i = 1; i < count; ++i) {
    const std::size_t prev_area = w * h;
    w = std::max(w, ceil_div(width * i, count));
    h = std::max(h, ceil_div(height * i, count));
    if (w * h <= prev_area) {
      if (w < width) {
        ++w;
      } else if (h < height) {
        ++h;
      }
    }
    const std::size_t shift = 1 + rng() % (kTableSize - 1);

    std::vector<Rgb> pixels(conditioning.pixels().begin(),
                            conditioning.pixels().end());
    for (std::size_t dy = 0; dy < h; ++dy) {
      const std::size_t y = (y0 + dy) % height;
      for (std::size_t dx = 0; dx < w; ++dx) {
        const std::size_t x = (x0 + dx) % width;
        const std::size_t relabeled =
            (base.at(x, y).value + shift) % kTableSize;
        pixels[y * width + x] = table[relabeled].color;
      }
    }
    out.emplace_back(width, height, std::move(pixels));
  }
  return out;
}

BackendSet mock_backend_set() {
  return BackendSet{std::make_shared<MockCaptioner>(),
                    std::make_shared<MockSegmenter>(),
                    std::make_shared<MockGenerator>(), nullptr};
}

}  // namespace semcomm
