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

#include <array>
#include <memory>

#include "semcomm/pipeline.hpp"

namespace semcomm {

// Deterministic stand-ins for the real models, used for hermetic tests and
// the CLI's default backend.

// Label -> colour table the mock segmenter quantizes against. Background is
// white; labels 1..20 use the usual 21-class segmentation colormap.
const ColorPalette& builtin_label_table();

// Nearest table colour (squared RGB distance), ties to the lowest label.
// Inverts render_colored_segmented(s, builtin_label_table()) exactly.
SegmentationArray mock_segment(const RasterImage& image);

// "a photography of " + the sorted distinct non-background class names of
// mock_segment(image) joined by " and ", or "background" when there are none.
Caption mock_caption(const RasterImage& image,
                     Label background_label = kBackgroundLabel);

// Candidate 0 is `conditioning` unchanged. Candidate i >= 1 relabels every
// pixel of a rectangle anchored at a seeded position (wrapping around the
// edges) to a different table colour. The rectangles are nested and strictly
// grow with i while the image has room, so the matching rate against the
// conditioning image strictly falls.
std::vector<RasterImage> mock_generate(const RasterImage& conditioning,
                                       std::size_t count, std::uint64_t seed);

class MockCaptioner final : public Captioner {
 public:
  explicit MockCaptioner(Label background_label = kBackgroundLabel)
      : background_label_(background_label) {}
  Caption caption(const RasterImage& image) const override {
    return mock_caption(image, background_label_);
  }

 private:
  Label background_label_;
};

class MockSegmenter final : public Segmenter {
 public:
  SegmentationArray segment(const RasterImage& image) const override {
    return mock_segment(image);
  }
};

class MockGenerator final : public Generator {
 public:
  std::vector<RasterImage> generate(
      const GenerationRequest& request) const override {
    return mock_generate(request.conditioning, request.count, request.seed);
  }
};

// All three mocks plus builtin similarity.
BackendSet mock_backend_set();

}  // namespace semcomm
