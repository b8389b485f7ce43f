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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "semcomm/image.hpp"
#include "semcomm/scoring.hpp"
#include "semcomm/semantic.hpp"

namespace semcomm {

// Model backends. Implementations are expected to tolerate concurrent calls
// unless single_flight() returns true, in which case the pipeline serializes
// every call into that backend.
class Captioner {
 public:
  virtual ~Captioner() = default;
  virtual Caption caption(const RasterImage& image) const = 0;
  virtual bool single_flight() const { return false; }
};

class Segmenter {
 public:
  virtual ~Segmenter() = default;
  virtual SegmentationArray segment(const RasterImage& image) const = 0;
  virtual bool single_flight() const { return false; }
};

struct GenerationRequest {
  const RasterImage& conditioning;
  const Caption& caption;
  std::size_t count;
  const std::string& negative_prompt;
  std::uint64_t seed;
};

class Generator {
 public:
  virtual ~Generator() = default;
  virtual std::vector<RasterImage> generate(
      const GenerationRequest& request) const = 0;
  virtual bool single_flight() const { return false; }
};

struct BackendSet {
  std::shared_ptr<const Captioner> captioner;
  std::shared_ptr<const Segmenter> segmenter;
  std::shared_ptr<const Generator> generator;
  // Null selects the builtin token-F1 similarity.
  std::shared_ptr<const SimilarityBackend> similarity;
};

struct TransmitterConfig {
  bool apply_background_recoloring = false;
  Label background_label = kBackgroundLabel;
};

inline constexpr const char* kDefaultNegativePrompt =
    "low quality, worst quality, out of focus, ugly, error, jpeg artifacts, "
    "lowers, blurry, broken, illustration, animation, painting, 2D, oil "
    "painting, sketch, watercolor, ink, flat color";

inline constexpr std::size_t kDefaultCandidateCount = 50;

struct ReceiverConfig {
  std::size_t candidate_count = kDefaultCandidateCount;
  ScoringConfig scoring;
  std::string negative_prompt = kDefaultNegativePrompt;
  std::uint64_t generation_seed = 0;
  // Worker threads for per-candidate captioning/segmentation/scoring;
  // 0 = hardware concurrency.
  std::size_t jobs = 0;
};

// Caption, segment and summarize `image` into a validated payload. Backend
// failures are rethrown as BackendError naming the stage.
SemanticPayload transmit(const RasterImage& image, const BackendSet& backends,
                         const TransmitterConfig& config);

struct ReceiveResult {
  std::size_t selected_index = 0;
  // Every candidate in generation order, for auditing.
  std::vector<ScoredCandidate> candidates;

  const ScoredCandidate& selected() const { return candidates[selected_index]; }
};

// Render the conditioning image, generate K candidates, caption and segment
// each, score them against the payload and pick the best.
ReceiveResult receive(const SemanticPayload& payload,
                      const BackendSet& backends,
                      const ReceiverConfig& config);

}  // namespace semcomm
