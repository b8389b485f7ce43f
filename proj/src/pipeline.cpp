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

#include "semcomm/pipeline.hpp"

#include <mutex>
#include <optional>

#include "semcomm/detail/parallel.hpp"
#include "semcomm/error.hpp"
#include "semcomm/palette.hpp"

namespace semcomm {
namespace {

// Holds a lock for the duration of a call when the backend is single-flight.
class CallGate {
 public:
  explicit CallGate(bool serialize) : serialize_(serialize) {}

  template <typename Fn>
  auto run(Fn&& fn) {
    if (!serialize_) return fn();
    std::lock_guard lock(mutex_);
    return fn();
  }

 private:
  bool serialize_;
  std::mutex mutex_;
};

template <typename Fn>
auto call_stage(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const BackendError&) {
    throw;
  } catch (const std::exception& e) {
    throw BackendError(stage, e.what());
  }
}

std::string shape(std::size_t w, std::size_t h) {
  return std::to_string(w) + "x" + std::to_string(h);
}

void require_backends(const BackendSet& b, bool need_generator) {
  if (!b.captioner) throw InvalidArgument("backend set has no captioner");
  if (!b.segmenter) throw InvalidArgument("backend set has no segmenter");
  if (need_generator && !b.generator) {
    throw InvalidArgument("backend set has no generator");
  }
}

SegmentationArray checked_segment(const Segmenter& segmenter,
                                  const RasterImage& image) {
  auto seg = segmenter.segment(image);
  if (seg.width() != image.width() || seg.height() != image.height()) {
    throw BackendError("segmenter",
                       "segmenter dimension mismatch: got " +
                           shape(seg.width(), seg.height()) + " for a " +
                           shape(image.width(), image.height()) + " image");
  }
  return seg;
}

}  // namespace

SemanticPayload transmit(const RasterImage& image, const BackendSet& backends,
                         const TransmitterConfig& config) {
  require_backends(backends, false);
  Caption caption = call_stage(
      "captioner", [&] { return backends.captioner->caption(image); });
  SegmentationArray segmentation = call_stage(
      "segmenter", [&] { return checked_segment(*backends.segmenter, image); });

  ColorPalette palette = extract_palette(image, segmentation);
  bool recolored = false;
  // Nothing to recolor when no pixel carries the background label.
  if (config.apply_background_recoloring &&
      palette.contains(config.background_label)) {
    palette = recolor_background(palette, config.background_label);
    recolored = true;
  }

  SemanticPayload payload{std::move(caption), std::move(segmentation),
                          std::move(palette), config.background_label,
                          recolored};
  if (const auto v = validate_payload(payload); !v.ok()) {
    throw InvalidArgument("transmitter produced an invalid payload: " +
                          v.summary());
  }
  return payload;
}

ReceiveResult receive(const SemanticPayload& payload,
                      const BackendSet& backends,
                      const ReceiverConfig& config) {
  require_backends(backends, true);
  if (config.candidate_count == 0) {
    throw InvalidArgument("candidate count must be at least 1");
  }
  config.scoring.validate();
  if (const auto v = validate_payload(payload); !v.ok()) {
    throw InvalidArgument("invalid payload: " + v.summary());
  }

  const RasterImage conditioning =
      render_colored_segmented(payload.segmentation, payload.palette);

  std::vector<RasterImage> images = call_stage("generator", [&] {
    return backends.generator->generate(GenerationRequest{
        conditioning, payload.caption, config.candidate_count,
        config.negative_prompt, config.generation_seed});
  });
  if (images.size() != config.candidate_count) {
    throw BackendError("generator",
                       "candidate count mismatch: expected " +
                           std::to_string(config.candidate_count) + ", got " +
                           std::to_string(images.size()));
  }
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (!images[i].same_shape(conditioning.width(), conditioning.height())) {
      throw CandidateError(
          i, "generator: dimension mismatch: got " +
                 shape(images[i].width(), images[i].height()) +
                 ", expected " +
                 shape(conditioning.width(), conditioning.height()));
    }
  }

  CallGate caption_gate(backends.captioner->single_flight());
  CallGate segment_gate(backends.segmenter->single_flight());
  std::vector<std::optional<CandidateFeatures>> features(images.size());
  detail::parallel_for(images.size(), config.jobs, [&](std::size_t i) {
    try {
      Caption caption = call_stage("captioner", [&] {
        return caption_gate.run(
            [&] { return backends.captioner->caption(images[i]); });
      });
      SegmentationArray seg = call_stage("segmenter", [&] {
        return segment_gate.run(
            [&] { return checked_segment(*backends.segmenter, images[i]); });
      });
      features[i] = CandidateFeatures{images[i], std::move(caption),
                                      std::move(seg)};
    } catch (const std::exception& e) {
      throw CandidateError(i, e.what());
    }
  });

  std::vector<CandidateFeatures> ready;
  ready.reserve(features.size());
  for (auto& f : features) ready.push_back(std::move(*f));

  ReceiveResult result;
  result.candidates =
      score_candidates(payload, std::move(ready), config.scoring,
                       backends.similarity.get(), config.jobs);
  result.selected_index = select_output(result.candidates);
  return result;
}

}  // namespace semcomm
