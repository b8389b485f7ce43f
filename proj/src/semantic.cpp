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

#include "semcomm/semantic.hpp"

#include <algorithm>
#include <array>
#include <bitset>
#include <cctype>

#include "semcomm/error.hpp"

namespace semcomm {
namespace {

constexpr std::array<std::string_view, kObjectClassCount + 1> kClassNames = {
    "background", "airplane", "bicycle",      "bird",   "boat",
    "bottle",     "bus",      "car",          "cat",    "chair",
    "cow",        "table",    "dog",          "horse",  "motorbike",
    "person",     "potted plant", "sheep",    "sofa",   "train",
    "tv",
};

// Decodes one UTF-8 sequence starting at `pos`; returns the code point and
// advances `pos`. Throws on malformed input.
char32_t next_code_point(std::string_view s, std::size_t& pos) {
  const auto lead = static_cast<unsigned char>(s[pos]);
  std::size_t extra = 0;
  char32_t cp = 0;
  if (lead < 0x80) {
    ++pos;
    return lead;
  } else if ((lead & 0xE0) == 0xC0) {
    extra = 1;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    extra = 2;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    extra = 3;
    cp = lead & 0x07;
  } else {
    throw InvalidArgument("malformed UTF-8 at byte " + std::to_string(pos));
  }
  if (pos + extra >= s.size()) {
    throw InvalidArgument("truncated UTF-8 at byte " + std::to_string(pos));
  }
  for (std::size_t k = 1; k <= extra; ++k) {
    const auto c = static_cast<unsigned char>(s[pos + k]);
    if ((c & 0xC0) != 0x80) {
      throw InvalidArgument("malformed UTF-8 at byte " + std::to_string(pos));
    }
    cp = (cp << 6) | (c & 0x3F);
  }
  static constexpr char32_t kMinForLength[] = {0, 0x80, 0x800, 0x10000};
  if (cp < kMinForLength[extra] || cp > 0x10FFFF ||
      (cp >= 0xD800 && cp <= 0xDFFF)) {
    throw InvalidArgument("malformed UTF-8 at byte " + std::to_string(pos));
  }
  pos += extra + 1;
  return cp;
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
  });
}

}  // namespace

std::string label_name(Label label) {
  if (label.value < kClassNames.size()) {
    return std::string(kClassNames[label.value]);
  }
  return "label" + std::to_string(label.value);
}

SegmentationArray::SegmentationArray(std::size_t width, std::size_t height,
                                     std::vector<Label> labels)
    : width_(width), height_(height), labels_(std::move(labels)) {
  if (width_ == 0 || height_ == 0) {
    throw InvalidArgument("segmentation dimensions must be at least 1x1");
  }
  if (labels_.size() != width_ * height_) {
    throw InvalidArgument("length mismatch: " + std::to_string(labels_.size()) +
                          " labels for " + std::to_string(width_) + "x" +
                          std::to_string(height_));
  }
}

SegmentationArray::SegmentationArray(std::size_t width, std::size_t height,
                                     Label fill)
    : SegmentationArray(width, height,
                        std::vector<Label>(width * height, fill)) {}

SegmentationArray SegmentationArray::from_values(
    std::size_t width, std::size_t height,
    std::span<const std::uint8_t> values) {
  std::vector<Label> labels;
  labels.reserve(values.size());
  for (auto v : values) labels.emplace_back(v);
  return SegmentationArray(width, height, std::move(labels));
}

std::vector<Label> SegmentationArray::distinct_labels() const {
  std::bitset<256> seen;
  for (auto l : labels_) seen.set(l.value);
  std::vector<Label> out;
  for (std::size_t v = 0; v < 256; ++v) {
    if (seen.test(v)) out.emplace_back(static_cast<std::uint8_t>(v));
  }
  return out;
}

Caption::Caption(std::string text) : text_(std::move(text)) {
  for (std::size_t pos = 0; pos < text_.size();) next_code_point(text_, pos);
  if (is_blank(text_)) {
    throw InvalidArgument("caption is empty");
  }
}

std::size_t Caption::char_count() const {
  std::size_t n = 0;
  for (std::size_t pos = 0; pos < text_.size(); ++n) {
    next_code_point(text_, pos);
  }
  return n;
}

std::string to_latin1(std::string_view utf8) {
  std::string out;
  out.reserve(utf8.size());
  for (std::size_t pos = 0; pos < utf8.size();) {
    const std::size_t at = pos;
    const char32_t cp = next_code_point(utf8, pos);
    if (cp > 0xFF) {
      throw InvalidArgument("caption character at byte " + std::to_string(at) +
                            " is not encodable in Latin-1");
    }
    out.push_back(static_cast<char>(cp));
  }
  return out;
}

std::string from_latin1(std::string_view latin1) {
  std::string out;
  out.reserve(latin1.size());
  for (char ch : latin1) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 0x80) {
      out.push_back(ch);
    } else {
      out.push_back(static_cast<char>(0xC0 | (c >> 6)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
  }
  return out;
}

ColorPalette::ColorPalette(std::vector<PaletteEntry> entries)
    : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const auto& a, const auto& b) { return a.label < b.label; });
  auto dup = std::adjacent_find(
      entries_.begin(), entries_.end(),
      [](const auto& a, const auto& b) { return a.label == b.label; });
  if (dup != entries_.end()) {
    throw InvalidArgument("duplicate palette label " +
                          std::to_string(dup->label.value));
  }
}

std::optional<Rgb> ColorPalette::find(Label label) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), label,
      [](const PaletteEntry& e, Label l) { return e.label < l; });
  if (it == entries_.end() || it->label != label) return std::nullopt;
  return it->color;
}

ColorPalette ColorPalette::with_color(Label label, Rgb color) const {
  ColorPalette copy = *this;
  auto it = std::find_if(copy.entries_.begin(), copy.entries_.end(),
                         [&](const auto& e) { return e.label == label; });
  if (it == copy.entries_.end()) {
    throw InvalidArgument("palette has no entry for label " +
                          std::to_string(label.value));
  }
  it->color = color;
  return copy;
}

std::string ValidationResult::summary() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.message;
  }
  return out;
}

RawPayload to_raw(const SemanticPayload& payload) {
  RawPayload raw;
  raw.caption = payload.caption.text();
  raw.width = payload.segmentation.width();
  raw.height = payload.segmentation.height();
  raw.labels.assign(payload.segmentation.labels().begin(),
                    payload.segmentation.labels().end());
  raw.palette.assign(payload.palette.entries().begin(),
                     payload.palette.entries().end());
  raw.background_label = payload.background_label;
  raw.background_recolored = payload.background_recolored;
  return raw;
}

ValidationResult validate_payload(const RawPayload& raw) {
  ValidationResult result;
  auto add = [&](ViolationKind kind, std::string msg,
                 std::optional<std::size_t> index = std::nullopt) {
    result.violations.push_back({kind, std::move(msg), index});
  };

  if (is_blank(raw.caption)) {
    add(ViolationKind::kEmptyCaption, "empty caption");
  }
  if (raw.width == 0 || raw.height == 0 ||
      raw.labels.size() != raw.width * raw.height) {
    add(ViolationKind::kLengthMismatch,
        "length mismatch: " + std::to_string(raw.labels.size()) +
            " labels for " + std::to_string(raw.width) + "x" +
            std::to_string(raw.height),
        raw.labels.size());
  }

  std::array<std::optional<Rgb>, 256> colors{};
  for (const auto& e : raw.palette) {
    if (colors[e.label.value]) {
      add(ViolationKind::kDuplicatePaletteLabel,
          "duplicate palette label " + std::to_string(e.label.value),
          e.label.value);
    }
    colors[e.label.value] = e.color;
  }

  // Report each uncovered label once, at its first pixel.
  std::bitset<256> reported;
  for (std::size_t i = 0; i < raw.labels.size(); ++i) {
    const auto v = raw.labels[i].value;
    if (!colors[v] && !reported.test(v)) {
      reported.set(v);
      add(ViolationKind::kUncoveredLabel,
          "uncovered label " + std::to_string(v) + " (first at pixel " +
              std::to_string(i) + ")",
          v);
    }
  }

  if (raw.background_recolored) {
    const auto& bg = colors[raw.background_label.value];
    if (!bg || *bg != kWhite) {
      add(ViolationKind::kBackgroundNotWhite,
          "background label " + std::to_string(raw.background_label.value) +
              " is recolored but its palette entry is not (255,255,255)",
          raw.background_label.value);
    }
  }
  return result;
}

ValidationResult validate_payload(const SemanticPayload& payload) {
  return validate_payload(to_raw(payload));
}

SemanticPayload make_payload(RawPayload raw) {
  const auto result = validate_payload(raw);
  if (!result.ok()) throw InvalidArgument(result.summary());
  return SemanticPayload{
      Caption(std::move(raw.caption)),
      SegmentationArray(raw.width, raw.height, std::move(raw.labels)),
      ColorPalette(std::move(raw.palette)),
      raw.background_label,
      raw.background_recolored,
  };
}

}  // namespace semcomm
