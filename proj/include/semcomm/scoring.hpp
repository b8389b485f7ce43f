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
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "semcomm/error.hpp"
#include "semcomm/image.hpp"
#include "semcomm/semantic.hpp"

namespace semcomm {

using StopWordList = std::set<std::string, std::less<>>;

// The builtin English list: articles, prepositions, conjunctions and forms
// of "to be". Mirrors data/stopwords_en_v1.txt.
const StopWordList& default_stop_words();

// One lowercase token per line; '#' starts a comment; blank lines ignored.
StopWordList parse_stop_words(std::string_view text);
StopWordList load_stop_words(const std::filesystem::path& path);

struct ScoringConfig {
  // combined = smr_weight * smr + (1 - smr_weight) * text_similarity
  double smr_weight = 0.5;
  bool remove_stop_words = true;
  bool foreground_only_smr = false;
  // Use token F1 when an external similarity backend is unreachable.
  bool fallback_to_builtin = false;
  StopWordList stop_words = default_stop_words();

  // Throws InvalidArgument unless smr_weight is within [0, 1].
  void validate() const;
};

// Caption similarity model. Implementations must be callable concurrently.
class SimilarityBackend {
 public:
  virtual ~SimilarityBackend() = default;
  // Raw score; text_similarity clamps it to [0, 1].
  virtual double similarity(std::string_view reference,
                            std::string_view candidate) const = 0;
  virtual std::string name() const = 0;
};

// Thrown by remote backends when the service cannot be reached at all.
class BackendUnavailable : public BackendError {
 public:
  using BackendError::BackendError;
};

int kronecker(Label x, Label y);

// Segmentation matching rate: fraction of positions with equal labels.
// Throws DimensionMismatch.
double smr(const SegmentationArray& reference,
           const SegmentationArray& candidate);

// Matching rate over the positions where `reference` is not background.
// Throws DimensionMismatch, or InvalidArgument when the reference is
// entirely background.
double smr_foreground(const SegmentationArray& reference,
                      const SegmentationArray& candidate,
                      Label background_label);

// Lowercase tokens split on runs of non-alphanumeric ASCII. Octets >= 0x80
// are kept inside tokens.
std::vector<std::string> tokenize(std::string_view text,
                                  const ScoringConfig& config);
inline std::vector<std::string> tokenize(const Caption& caption,
                                         const ScoringConfig& config) {
  return tokenize(caption.text(), config);
}

// Multiset token F1; 0 when either side has no tokens.
double token_f1(const std::vector<std::string>& reference,
                const std::vector<std::string>& candidate);

// Builtin token F1 when `backend` is null, otherwise the backend's score
// clamped to [0, 1]. With stop-word removal on, an external backend sees
// the filtered tokens joined by spaces.
double text_similarity(const Caption& reference, const Caption& candidate,
                       const ScoringConfig& config,
                       const SimilarityBackend* backend = nullptr);

struct CandidateFeatures {
  RasterImage image;
  Caption caption;
  SegmentationArray segmentation;
};

struct ScoredCandidate {
  std::size_t candidate_index = 0;
  RasterImage image;
  SegmentationArray candidate_segmentation;
  Caption candidate_caption;
  double smr = 0.0;
  double text_similarity = 0.0;
  double combined = 0.0;
};

double combine_scores(double smr, double text_similarity, double smr_weight);

// One result per candidate, in input order. `jobs` bounds the number of
// worker threads (0 = hardware concurrency); the result does not depend on
// it. A failing candidate raises CandidateError carrying its index.
std::vector<ScoredCandidate> score_candidates(
    const SemanticPayload& payload, std::vector<CandidateFeatures> candidates,
    const ScoringConfig& config, const SimilarityBackend* backend = nullptr,
    std::size_t jobs = 1);

class CandidateError : public Error {
 public:
  CandidateError(std::size_t index, const std::string& what)
      : Error("candidate " + std::to_string(index) + ": " + what),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

// candidate_index of the highest combined score, ties to the lowest index.
// Throws InvalidArgument on an empty list.
std::size_t select_output(const std::vector<ScoredCandidate>& scored);

}  // namespace semcomm
