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
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "semcomm/semantic.hpp"

namespace semcomm {

// SMC1 wire format, all multi-octet integers little-endian:
//
//   "SMC1" | version u8 | flags u8 | background label u8
//   | width u16 | height u16
//   | caption length u16 | caption (Latin-1)
//   | palette count u8 | count x (label u8, R, G, B)
//   | RLE length u32 | RLE runs (label u8, run length u16)
//
// flags bit 0 = background recolored; the remaining bits must be zero.
inline constexpr std::array<std::uint8_t, 4> kMagic = {'S', 'M', 'C', '1'};
inline constexpr std::uint8_t kWireVersion = 0x01;
inline constexpr std::uint8_t kFlagBackgroundRecolored = 0x01;
inline constexpr std::size_t kHeaderOctets = 18;
inline constexpr std::size_t kRunOctets = 3;
inline constexpr std::size_t kMaxRunLength = 65535;

struct EncodedPayload {
  std::vector<std::uint8_t> bytes;

  friend bool operator==(const EncodedPayload&,
                         const EncodedPayload&) = default;
};

// Row-major runs that may cross row boundaries. Adjacent runs carry
// different labels except where a run was split at kMaxRunLength.
std::vector<std::uint8_t> rle_encode(const SegmentationArray& segmentation);
std::vector<std::uint8_t> rle_encode(std::span<const Label> labels);

// Throws CodecError on a trailing partial run, a zero-length run, or when the
// run lengths do not add up to `expected_pixel_count`.
std::vector<Label> rle_decode(std::span<const std::uint8_t> octets,
                              std::size_t expected_pixel_count);

// Number of runs rle_encode would emit.
std::size_t rle_run_count(std::span<const Label> labels);

EncodedPayload encode_payload(const SemanticPayload& payload);
SemanticPayload decode_payload(std::span<const std::uint8_t> octets);
inline SemanticPayload decode_payload(const EncodedPayload& encoded) {
  return decode_payload(encoded.bytes);
}

// Transmitted sizes in octets. The SMC1 header is not counted.
struct SizeReport {
  std::size_t uncompressed_image_bytes = 0;
  std::size_t caption_bytes = 0;
  std::size_t palette_bytes = 0;
  std::size_t segmentation_rle_bytes = 0;
  std::size_t total_payload_bytes = 0;

  friend bool operator==(const SizeReport&, const SizeReport&) = default;
};

SizeReport size_report(const SemanticPayload& payload);

}  // namespace semcomm
