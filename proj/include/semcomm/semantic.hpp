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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semcomm/image.hpp"

namespace semcomm {

// Segmentation class identifier. 0 is background by convention, 1..20 are
// the object classes of the 21-class segmentation model, the rest are free.
struct Label {
  std::uint8_t value = 0;

  constexpr Label() = default;
  constexpr explicit Label(std::uint8_t v) : value(v) {}

  friend constexpr auto operator<=>(const Label&, const Label&) = default;
};

inline constexpr Label kBackgroundLabel{0};
inline constexpr int kObjectClassCount = 20;

// Human readable class name: "background", "airplane", ..., "tv", or
// "label<N>" outside the known range.
std::string label_name(Label label);

// Per-pixel class grid, row-major, exactly width * height labels.
class SegmentationArray {
 public:
  SegmentationArray(std::size_t width, std::size_t height,
                    std::vector<Label> labels);
  SegmentationArray(std::size_t width, std::size_t height, Label fill);
  // Convenience for tests and fixtures.
  static SegmentationArray from_values(std::size_t width, std::size_t height,
                                       std::span<const std::uint8_t> values);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept { return labels_.size(); }
  std::span<const Label> labels() const noexcept { return labels_; }
  Label at(std::size_t x, std::size_t y) const {
    return labels_[y * width_ + x];
  }

  // Distinct labels in ascending order.
  std::vector<Label> distinct_labels() const;

  bool same_shape(const SegmentationArray& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const SegmentationArray&,
                         const SegmentationArray&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<Label> labels_;
};

// Descriptive text, stored as UTF-8. Must be valid UTF-8 and non-empty after
// trimming whitespace. Only Latin-1 text can go on the wire; encode_payload
// rejects anything else.
class Caption {
 public:
  explicit Caption(std::string text);

  const std::string& text() const noexcept { return text_; }
  // Number of code points, which is the Latin-1 octet count when encodable.
  std::size_t char_count() const;

  friend bool operator==(const Caption&, const Caption&) = default;

 private:
  std::string text_;
};

// UTF-8 <-> Latin-1. to_latin1 throws InvalidArgument on malformed UTF-8 or
// a code point above U+00FF.
std::string to_latin1(std::string_view utf8);
std::string from_latin1(std::string_view latin1);

struct PaletteEntry {
  Label label;
  Rgb color;

  friend constexpr auto operator<=>(const PaletteEntry&,
                                    const PaletteEntry&) = default;
};

// Label -> colour mapping. Entries are kept sorted by label; duplicate
// labels are rejected.
class ColorPalette {
 public:
  ColorPalette() = default;
  explicit ColorPalette(std::vector<PaletteEntry> entries);

  std::span<const PaletteEntry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::optional<Rgb> find(Label label) const;
  bool contains(Label label) const { return find(label).has_value(); }

  // Copy with `label` mapped to `color`; the label must already be present.
  ColorPalette with_color(Label label, Rgb color) const;

  friend bool operator==(const ColorPalette&, const ColorPalette&) = default;

 private:
  std::vector<PaletteEntry> entries_;
};

// The transmitted unit.
struct SemanticPayload {
  Caption caption;
  SegmentationArray segmentation;
  ColorPalette palette;
  Label background_label = kBackgroundLabel;
  bool background_recolored = false;

  friend bool operator==(const SemanticPayload&,
                         const SemanticPayload&) = default;
};

enum class ViolationKind {
  kLengthMismatch,
  kUncoveredLabel,
  kBackgroundNotWhite,
  kEmptyCaption,
  kDuplicatePaletteLabel,
};

struct Violation {
  ViolationKind kind;
  std::string message;
  // Offending label or pixel index, when one applies.
  std::optional<std::size_t> index;
};

struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  // All messages joined with "; ".
  std::string summary() const;
};

// Unchecked payload fields, as they arrive off the wire before any of the
// checked types are built.
struct RawPayload {
  std::string caption;  // UTF-8
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<Label> labels;
  std::vector<PaletteEntry> palette;
  Label background_label = kBackgroundLabel;
  bool background_recolored = false;
};

RawPayload to_raw(const SemanticPayload& payload);

ValidationResult validate_payload(const SemanticPayload& payload);
ValidationResult validate_payload(const RawPayload& raw);

// Builds the checked payload, throwing InvalidArgument with the violation
// summary when the fields do not validate.
SemanticPayload make_payload(RawPayload raw);

}  // namespace semcomm
