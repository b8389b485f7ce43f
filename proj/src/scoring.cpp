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

#include "semcomm/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>

#include "semcomm/detail/parallel.hpp"
#include "semcomm/error.hpp"
#include "stopwords_data.inc"

namespace semcomm {
namespace {

void require_same_shape(const SegmentationArray& a,
                        const SegmentationArray& b) {
  if (!a.same_shape(b)) {
    throw DimensionMismatch(
        "dimension mismatch: " + std::to_string(a.width()) + "x" +
        std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
        std::to_string(b.height()));
  }
}

bool is_token_char(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

}  // namespace

const StopWordList& default_stop_words() {
  static const StopWordList list = parse_stop_words(kDefaultStopWordsText);
  return list;
}

StopWordList parse_stop_words(std::string_view text) {
  StopWordList words;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) {
      line.remove_prefix(1);
    }
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) {
      line.remove_suffix(1);
    }
    if (!line.empty()) {
      std::string word(line);
      std::transform(word.begin(), word.end(), word.begin(),
                     [](unsigned char c) { return std::tolower(c); });
      words.insert(std::move(word));
    }
    pos = end + 1;
  }
  return words;
}

StopWordList load_stop_words(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return parse_stop_words(
      {reinterpret_cast<const char*>(bytes.data()), bytes.size()});
}

void ScoringConfig::validate() const {
  if (!(smr_weight >= 0.0 && smr_weight <= 1.0)) {
    throw InvalidArgument("smr_weight must be within [0, 1]");
  }
}

int kronecker(Label x, Label y) { return x == y ? 1 : 0; }

double smr(const SegmentationArray& reference,
           const SegmentationArray& candidate) {
  require_same_shape(reference, candidate);
  const auto p = reference.labels();
  const auto q = candidate.labels();
  std::size_t matches = 0;
  for (std::size_t i = 0; i < p.size(); ++i) matches += kronecker(p[i], q[i]);
  return static_cast<double>(matches) / static_cast<double>(p.size());
}

double smr_foreground(const SegmentationArray& reference,
                      const SegmentationArray& candidate,
                      Label background_label) {
  require_same_shape(reference, candidate);
  const auto p = reference.labels();
  const auto q = candidate.labels();
  std::size_t matches = 0;
  std::size_t foreground = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == background_label) continue;
    ++foreground;
    matches += kronecker(p[i], q[i]);
  }
  if (foreground == 0) {
    throw InvalidArgument("all-background reference: foreground SMR undefined");
  }
  return static_cast<double>(matches) / static_cast<double>(foreground);
}

std::vector<std::string> tokenize(std::string_view text,
                                  const ScoringConfig& config) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !is_token_char(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && is_token_char(text[j])) ++j;
    if (j > i) {
      std::string token(text.substr(i, j - i));
      std::transform(token.begin(), token.end(), token.begin(),
                     [](unsigned char c) {
                       return c < 0x80 ? std::tolower(c) : c;
                     });
      if (!config.remove_stop_words || !config.stop_words.contains(token)) {
        tokens.push_back(std::move(token));
      }
    }
    i = j;
  }
  return tokens;
}

double token_f1(const std::vector<std::string>& reference,
                const std::vector<std::string>& candidate) {
  if (reference.empty() || candidate.empty()) return 0.0;
  std::map<std::string_view, std::size_t> counts;
  for (const auto& t : reference) ++counts[t];
  std::size_t overlap = 0;
  for (const auto& t : candidate) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  if (overlap == 0) return 0.0;
  const double precision =
      static_cast<double>(overlap) / static_cast<double>(candidate.size());
  const double recall =
      static_cast<double>(overlap) / static_cast<double>(reference.size());
  return 2.0 * precision * recall / (precision + recall);
}

double text_similarity(const Caption& reference, const Caption& candidate,
                       const ScoringConfig& config,
                       const SimilarityBackend* backend) {
  const auto ref_tokens = tokenize(reference, config);
  const auto cand_tokens = tokenize(candidate, config);
  if (backend == nullptr) return token_f1(ref_tokens, cand_tokens);
  if (config.remove_stop_words && (ref_tokens.empty() || cand_tokens.empty())) {
    return 0.0;
  }

  try {
    const double raw =
        config.remove_stop_words
            ? backend->similarity(join_tokens(ref_tokens),
                                  join_tokens(cand_tokens))
            : backend->similarity(reference.text(), candidate.text());
    if (std::isnan(raw)) {
      throw BackendError("similarity", "backend returned NaN");
    }
    return std::clamp(raw, 0.0, 1.0);
  } catch (const BackendUnavailable&) {
    if (!config.fallback_to_builtin) throw;
    return token_f1(ref_tokens, cand_tokens);
  }
}

double combine_scores(double smr, double text_similarity, double smr_weight) {
  return smr_weight * smr + (1.0 - smr_weight) * text_similarity;
}

std::vector<ScoredCandidate> score_candidates(
    const SemanticPayload& payload, std::vector<CandidateFeatures> candidates,
    const ScoringConfig& config, const SimilarityBackend* backend,
    std::size_t jobs) {
  config.validate();
  std::vector<std::optional<ScoredCandidate>> slots(candidates.size());
  detail::parallel_for(candidates.size(), jobs, [&](std::size_t i) {
    auto& c = candidates[i];
    try {
      const double match =
          config.foreground_only_smr
              ? smr_foreground(payload.segmentation, c.segmentation,
                               payload.background_label)
              : smr(payload.segmentation, c.segmentation);
      const double text =
          text_similarity(payload.caption, c.caption, config, backend);
      slots[i] = ScoredCandidate{
          i,
          std::move(c.image),
          std::move(c.segmentation),
          std::move(c.caption),
          match,
          text,
          combine_scores(match, text, config.smr_weight),
      };
    } catch (const CandidateError&) {
      throw;
    } catch (const std::exception& e) {
      throw CandidateError(i, e.what());
    }
  });
  std::vector<ScoredCandidate> scored;
  scored.reserve(slots.size());
  for (auto& s : slots) scored.push_back(std::move(*s));
  return scored;
}

std::size_t select_output(const std::vector<ScoredCandidate>& scored) {
  if (scored.empty()) {
    throw InvalidArgument("cannot select from an empty candidate list");
  }
  const ScoredCandidate* best = &scored.front();
  for (const auto& c : scored) {
    if (c.combined > best->combined ||
        (c.combined == best->combined &&
         c.candidate_index < best->candidate_index)) {
      best = &c;
    }
  }
  return best->candidate_index;
}

}  // namespace semcomm
