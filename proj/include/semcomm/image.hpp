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
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace semcomm {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend constexpr auto operator<=>(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kWhite{255, 255, 255};

// RGB8 raster, row-major. Width and height are both at least 1 and the
// pixel buffer always holds exactly width * height entries.
class RasterImage {
 public:
  RasterImage(std::size_t width, std::size_t height, std::vector<Rgb> pixels);
  // Uniformly filled image.
  RasterImage(std::size_t width, std::size_t height, Rgb fill);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept { return pixels_.size(); }

  std::span<const Rgb> pixels() const noexcept { return pixels_; }
  const Rgb& at(std::size_t x, std::size_t y) const {
    return pixels_[y * width_ + x];
  }

  bool same_shape(std::size_t width, std::size_t height) const noexcept {
    return width_ == width && height_ == height;
  }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<Rgb> pixels_;
};

enum class ImageFormat { kPpm, kPng };

// Picks the format from a file extension (.ppm/.pnm or .png, case-insensitive).
// Throws ImageFormatError for anything else.
ImageFormat format_from_extension(const std::filesystem::path& path);

// Sniffs the leading bytes ("P6" or the PNG signature).
ImageFormat detect_format(std::span<const std::uint8_t> bytes);

// Decodes a P6 (maxval 255) or PNG byte stream. PNG alpha is composited over
// opaque white and then dropped.
RasterImage decode_image(std::span<const std::uint8_t> bytes);
RasterImage decode_image(std::span<const std::uint8_t> bytes, ImageFormat hint);

std::vector<std::uint8_t> encode_image(const RasterImage& image,
                                       ImageFormat format);

RasterImage load_image(const std::filesystem::path& path);
// Writes in the format implied by the extension.
void save_image(const RasterImage& image, const std::filesystem::path& path);
void save_image(const RasterImage& image, const std::filesystem::path& path,
                ImageFormat format);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes);

}  // namespace semcomm
