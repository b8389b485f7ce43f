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

#include "semcomm/codec.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "semcomm/error.hpp"

namespace semcomm {
namespace {

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) {
    out_.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out_.push_back(static_cast<std::uint8_t>(v >> 8));
  }
  void u32(std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) {
      out_.push_back(static_cast<std::uint8_t>((v >> shift) & 0xFF));
    }
  }
  void bytes(std::span<const std::uint8_t> b) {
    out_.insert(out_.end(), b.begin(), b.end());
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint16_t u16() {
    need(2);
    const auto v = static_cast<std::uint16_t>(in_[pos_] | (in_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int k = 3; k >= 0; --k) v = (v << 8) | in_[pos_ + k];
    pos_ += 4;
    return v;
  }
  std::span<const std::uint8_t> bytes(std::size_t n) {
    need(n);
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) throw CodecError("truncated payload");
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::size_t rle_run_count(std::span<const Label> labels) {
  std::size_t runs = 0;
  std::size_t i = 0;
  while (i < labels.size()) {
    std::size_t j = i + 1;
    while (j < labels.size() && labels[j] == labels[i] &&
           j - i < kMaxRunLength) {
      ++j;
    }
    ++runs;
    i = j;
  }
  return runs;
}

std::vector<std::uint8_t> rle_encode(std::span<const Label> labels) {
  std::vector<std::uint8_t> out;
  out.reserve(rle_run_count(labels) * kRunOctets);
  std::size_t i = 0;
  while (i < labels.size()) {
    std::size_t j = i + 1;
    while (j < labels.size() && labels[j] == labels[i] &&
           j - i < kMaxRunLength) {
      ++j;
    }
    const auto length = static_cast<std::uint16_t>(j - i);
    out.push_back(labels[i].value);
    out.push_back(static_cast<std::uint8_t>(length & 0xFF));
    out.push_back(static_cast<std::uint8_t>(length >> 8));
    i = j;
  }
  return out;
}

std::vector<std::uint8_t> rle_encode(const SegmentationArray& segmentation) {
  return rle_encode(segmentation.labels());
}

std::vector<Label> rle_decode(std::span<const std::uint8_t> octets,
                              std::size_t expected_pixel_count) {
  if (octets.size() % kRunOctets != 0) {
    throw CodecError("trailing partial run");
  }
  std::vector<Label> labels;
  labels.reserve(expected_pixel_count);
  for (std::size_t i = 0; i < octets.size(); i += kRunOctets) {
    const Label label{octets[i]};
    const std::size_t length = octets[i + 1] | (octets[i + 2] << 8);
    if (length == 0) {
      throw CodecError("zero-length run at offset " + std::to_string(i));
    }
    if (length > expected_pixel_count - labels.size()) {
      throw CodecError("length-sum mismatch: runs exceed " +
                       std::to_string(expected_pixel_count) + " pixels");
    }
    labels.insert(labels.end(), length, label);
  }
  if (labels.size() != expected_pixel_count) {
    throw CodecError("length-sum mismatch: runs cover " +
                     std::to_string(labels.size()) + " of " +
                     std::to_string(expected_pixel_count) + " pixels");
  }
  return labels;
}

EncodedPayload encode_payload(const SemanticPayload& payload) {
  if (const auto v = validate_payload(payload); !v.ok()) {
    throw CodecError("invalid payload: " + v.summary());
  }
  const auto& seg = payload.segmentation;
  if (seg.width() > 0xFFFF || seg.height() > 0xFFFF) {
    throw CodecError("dimensions " + std::to_string(seg.width()) + "x" +
                     std::to_string(seg.height()) + " exceed 65535");
  }
  std::string caption;
  try {
    caption = to_latin1(payload.caption.text());
  } catch (const InvalidArgument& e) {
    throw CodecError(e.what());
  }
  if (caption.size() > 0xFFFF) {
    throw CodecError("caption longer than 65535 octets");
  }
  if (payload.palette.size() > 0xFF) {
    throw CodecError("palette overflow: " +
                     std::to_string(payload.palette.size()) +
                     " entries, at most 255");
  }
  const auto runs = rle_encode(seg);

  Writer w;
  w.bytes(kMagic);
  w.u8(kWireVersion);
  w.u8(payload.background_recolored ? kFlagBackgroundRecolored : 0);
  w.u8(payload.background_label.value);
  w.u16(static_cast<std::uint16_t>(seg.width()));
  w.u16(static_cast<std::uint16_t>(seg.height()));
  w.u16(static_cast<std::uint16_t>(caption.size()));
  w.bytes({reinterpret_cast<const std::uint8_t*>(caption.data()),
           caption.size()});
  w.u8(static_cast<std::uint8_t>(payload.palette.size()));
  for (const auto& e : payload.palette.entries()) {
    w.u8(e.label.value);
    w.u8(e.color.r);
    w.u8(e.color.g);
    w.u8(e.color.b);
  }
  w.u32(static_cast<std::uint32_t>(runs.size()));
  w.bytes(runs);
  return EncodedPayload{w.take()};
}

SemanticPayload decode_payload(std::span<const std::uint8_t> octets) {
  Reader r(octets);
  if (octets.size() < kMagic.size() ||
      !std::equal(kMagic.begin(), kMagic.end(), octets.begin())) {
    throw CodecError("bad magic");
  }
  r.bytes(kMagic.size());
  if (const auto version = r.u8(); version != kWireVersion) {
    throw CodecError("unsupported version " + std::to_string(version));
  }
  const auto flags = r.u8();
  if ((flags & ~kFlagBackgroundRecolored) != 0) {
    throw CodecError("reserved flag bits set");
  }

  RawPayload raw;
  raw.background_recolored = (flags & kFlagBackgroundRecolored) != 0;
  raw.background_label = Label{r.u8()};
  raw.width = r.u16();
  raw.height = r.u16();
  if (raw.width == 0 || raw.height == 0) {
    throw CodecError("zero image dimension");
  }

  const auto caption_len = r.u16();
  const auto caption = r.bytes(caption_len);
  raw.caption = from_latin1(
      {reinterpret_cast<const char*>(caption.data()), caption.size()});

  const auto entries = r.u8();
  for (std::size_t i = 0; i < entries; ++i) {
    const Label label{r.u8()};
    const auto red = r.u8();
    const auto green = r.u8();
    const auto blue = r.u8();
    if (!raw.palette.empty() && !(raw.palette.back().label < label)) {
      throw CodecError("palette entries out of order at label " +
                       std::to_string(label.value));
    }
    raw.palette.push_back({label, Rgb{red, green, blue}});
  }

  const std::uint32_t rle_len = r.u32();
  if (rle_len > r.remaining()) throw CodecError("truncated payload");
  const auto runs = r.bytes(rle_len);
  if (r.remaining() != 0) {
    throw CodecError("trailing octets after RLE block");
  }
  raw.labels = rle_decode(runs, raw.width * raw.height);
  // Canonical runs only: a run shorter than the cap is never followed by one
  // with the same label.
  for (std::size_t i = kRunOctets; i < runs.size(); i += kRunOctets) {
    const std::size_t prev_len = runs[i - 2] | (runs[i - 1] << 8);
    if (runs[i] == runs[i - kRunOctets] && prev_len != kMaxRunLength) {
      throw CodecError("non-canonical run at offset " + std::to_string(i));
    }
  }

  if (const auto v = validate_payload(raw); !v.ok()) {
    throw CodecError("invalid payload: " + v.summary());
  }
  return make_payload(std::move(raw));
}

SizeReport size_report(const SemanticPayload& payload) {
  SizeReport report;
  const auto& seg = payload.segmentation;
  report.uncompressed_image_bytes = seg.pixel_count() * 3;
  report.caption_bytes = payload.caption.char_count();
  report.palette_bytes = payload.palette.size() * 4;
  report.segmentation_rle_bytes = rle_run_count(seg.labels()) * kRunOctets;
  report.total_payload_bytes = report.caption_bytes + report.palette_bytes +
                               report.segmentation_rle_bytes;
  return report;
}

}  // namespace semcomm
