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

#pragma once

#include <optional>

#include "semcomm/image.hpp"
#include "semcomm/semantic.hpp"

namespace semcomm {

// Mean colour of every label present in `segmentation`, each channel rounded
// half-up. Throws DimensionMismatch when the shapes differ.
ColorPalette extract_palette(const RasterImage& image,
                             const SegmentationArray& segmentation);

// Colored-segmented image: every pixel takes its label's palette colour.
// Throws InvalidArgument ("uncovered label N") if a label has no entry.
RasterImage render_colored_segmented(const SegmentationArray& segmentation,
                                     const ColorPalette& palette);

// Sets the background entry to white. Throws InvalidArgument
// ("background label absent") if the palette has no such entry.
ColorPalette recolor_background(const ColorPalette& palette,
                                Label background_label);

// Smallest Chebyshev (max per-channel) distance between the background
// colour and any other palette colour; nullopt when there is no other entry
// or no background entry. A diagnostic for object/background colour clashes.
std::optional<int> background_separation(const ColorPalette& palette,
                                         Label background_label);

inline constexpr int kDefaultMinBackgroundSeparation = 1;

bool background_well_separated(
    const ColorPalette& palette, Label background_label,
    int min_distance = kDefaultMinBackgroundSeparation);

}  // namespace semcomm
