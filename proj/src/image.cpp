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

#include "semcomm/image.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "semcomm/error.hpp"

namespace semcomm {

RasterImage::RasterImage(std::size_t width, std::size_t height,
                         std::vector<Rgb> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width_ == 0 || height_ == 0) {
    throw InvalidArgument("image dimensions must be at least 1x1");
  }
  if (pixels_.size() != width_ * height_) {
    throw InvalidArgument("length mismatch: " + std::to_string(pixels_.size()) +
                          " pixels for " + std::to_string(width_) + "x" +
                          std::to_string(height_));
  }
}

RasterImage::RasterImage(std::size_t width, std::size_t height, Rgb fill)
    : RasterImage(width, height, std::vector<Rgb>(width * height, fill)) {}

namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G',
                                           '\r', '\n', 0x1A, '\n'};

// ---------------------------------------------------------------- PPM

class PpmHeaderReader {
 public:
  explicit PpmHeaderReader(std::span<const std::uint8_t> bytes)
      : bytes_(bytes) {}

  std::size_t read_number(const char* what) {
    skip_whitespace_and_comments();
    std::size_t value = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 0xFFFFFFFFu) {
        throw ImageFormatError(std::string("malformed header: ") + what +
                               " too large");
      }
      ++pos_;
      ++digits;
    }
    if (digits == 0) {
      throw ImageFormatError(std::string("malformed header: missing ") + what);
    }
    return value;
  }

  // Exactly one whitespace octet separates maxval from the raster.
  void expect_single_whitespace() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw ImageFormatError("malformed header: no separator before raster");
    }
    ++pos_;
  }

  std::size_t position() const { return pos_; }
  void skip(std::size_t n) { pos_ += n; }

 private:
  void skip_whitespace_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

RasterImage decode_ppm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
    throw ImageFormatError("malformed header: not a P6 file");
  }
  PpmHeaderReader reader(bytes);
  reader.skip(2);
  const std::size_t width = reader.read_number("width");
  const std::size_t height = reader.read_number("height");
  const std::size_t maxval = reader.read_number("maxval");
  if (width == 0 || height == 0) {
    throw ImageFormatError("malformed header: zero dimension");
  }
  if (maxval != 255) {
    throw ImageFormatError("unsupported bit depth: maxval " +
                           std::to_string(maxval));
  }
  reader.expect_single_whitespace();

  const std::size_t start = reader.position();
  if (width > (bytes.size() - start) / 3 / height) {
    throw ImageFormatError("truncated pixel data");
  }
  std::vector<Rgb> pixels(width * height);
  const auto* p = bytes.data() + start;
  for (auto& px : pixels) {
    px = Rgb{p[0], p[1], p[2]};
    p += 3;
  }
  return RasterImage(width, height, std::move(pixels));
}

std::vector<std::uint8_t> encode_ppm(const RasterImage& image) {
  const std::string header = "P6\n" + std::to_string(image.width()) + " " +
                             std::to_string(image.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(header.size() + image.pixel_count() * 3);
  for (const auto& px : image.pixels()) {
    out.push_back(px.r);
    out.push_back(px.g);
    out.push_back(px.b);
  }
  return out;
}

// ---------------------------------------------------------------- PNG

// Alpha over opaque white, rounded to nearest.
std::uint8_t over_white(std::uint8_t c, std::uint8_t a) {
  return static_cast<std::uint8_t>((c * a + 255 * (255 - a) + 127) / 255);
}

RasterImage decode_png(std::span<const std::uint8_t> bytes) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    const std::string message = image.message;
    png_image_free(&image);
    throw ImageFormatError("malformed header: " + message);
  }
  image.format = PNG_FORMAT_RGBA;
  if (image.width == 0 || image.height == 0) {
    png_image_free(&image);
    throw ImageFormatError("malformed header: zero dimension");
  }
  std::vector<std::uint8_t> rgba(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, rgba.data(), 0, nullptr)) {
    const std::string message = image.message;
    png_image_free(&image);
    if (message.find("EOF") != std::string::npos ||
        message.find("truncat") != std::string::npos ||
        message.find("Not enough") != std::string::npos) {
      throw ImageFormatError("truncated pixel data");
    }
    throw ImageFormatError("malformed PNG: " + message);
  }

  std::vector<Rgb> pixels(static_cast<std::size_t>(image.width) *
                          image.height);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const auto* p = &rgba[i * 4];
    pixels[i] = Rgb{over_white(p[0], p[3]), over_white(p[1], p[3]),
                    over_white(p[2], p[3])};
  }
  return RasterImage(image.width, image.height, std::move(pixels));
}

std::vector<std::uint8_t> encode_png(const RasterImage& raster) {
  if (raster.width() > 0x7FFFFFFF || raster.height() > 0x7FFFFFFF) {
    throw ImageFormatError("image too large for PNG");
  }
  std::vector<std::uint8_t> rgb(raster.pixel_count() * 3);
  for (std::size_t i = 0; i < raster.pixel_count(); ++i) {
    rgb[i * 3] = raster.pixels()[i].r;
    rgb[i * 3 + 1] = raster.pixels()[i].g;
    rgb[i * 3 + 2] = raster.pixels()[i].b;
  }

  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(raster.width());
  image.height = static_cast<png_uint_32>(raster.height());
  image.format = PNG_FORMAT_RGB;

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, rgb.data(), 0,
                                 nullptr)) {
    throw ImageFormatError(std::string("PNG encoding failed: ") +
                           image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, rgb.data(), 0,
                                 nullptr)) {
    throw ImageFormatError(std::string("PNG encoding failed: ") +
                           image.message);
  }
  out.resize(size);
  return out;
}

}  // namespace

ImageFormat format_from_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (ext == ".ppm" || ext == ".pnm") return ImageFormat::kPpm;
  if (ext == ".png") return ImageFormat::kPng;
  throw ImageFormatError("unsupported image extension '" + ext + "'");
}

ImageFormat detect_format(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 8 &&
      std::equal(std::begin(kPngSignature), std::end(kPngSignature),
                 bytes.begin())) {
    return ImageFormat::kPng;
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') {
    return ImageFormat::kPpm;
  }
  throw ImageFormatError("malformed header: unrecognised image format");
}

RasterImage decode_image(std::span<const std::uint8_t> bytes) {
  return decode_image(bytes, detect_format(bytes));
}

RasterImage decode_image(std::span<const std::uint8_t> bytes,
                         ImageFormat hint) {
  return hint == ImageFormat::kPng ? decode_png(bytes) : decode_ppm(bytes);
}

std::vector<std::uint8_t> encode_image(const RasterImage& image,
                                       ImageFormat format) {
  return format == ImageFormat::kPng ? encode_png(image) : encode_ppm(image);
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("cannot read " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("cannot write " + path.string());
}

RasterImage load_image(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return decode_image(bytes);
}

void save_image(const RasterImage& image, const std::filesystem::path& path) {
  save_image(image, path, format_from_extension(path));
}

void save_image(const RasterImage& image, const std::filesystem::path& path,
                ImageFormat format) {
  write_file(path, encode_image(image, format));
}

}  // namespace semcomm
