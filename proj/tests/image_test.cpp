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

#include <gtest/gtest.h>
#include <png.h>

#include <filesystem>
#include <random>
#include <string>

#include "oracles.hpp"
#include "semcomm/error.hpp"

namespace semcomm {
namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) {
  return {s.begin(), s.end()};
}

std::vector<std::uint8_t> png_from_rgba(std::uint32_t w, std::uint32_t h,
                                        const std::vector<std::uint8_t>& px,
                                        std::uint32_t format) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = w;
  image.height = h;
  image.format = format;
  png_alloc_size_t size = 0;
  EXPECT_TRUE(png_image_write_to_memory(&image, nullptr, &size, 0, px.data(),
                                        0, nullptr));
  std::vector<std::uint8_t> out(size);
  EXPECT_TRUE(png_image_write_to_memory(&image, out.data(), &size, 0,
                                        px.data(), 0, nullptr));
  out.resize(size);
  return out;
}

TEST(RasterImageTest, RejectsBadShapes) {
  EXPECT_THROW(RasterImage(0, 1, std::vector<Rgb>{}), InvalidArgument);
  EXPECT_THROW(RasterImage(2, 2, std::vector<Rgb>(3)), InvalidArgument);
}

TEST(PpmTest, ReadsTwoByOne) {
  auto bytes = bytes_of("P6\n2 1\n255\n");
  for (int v : {0, 0, 0, 255, 255, 255}) bytes.push_back(v);
  const auto img = decode_image(bytes);
  EXPECT_EQ(img, RasterImage(2, 1, {Rgb{0, 0, 0}, Rgb{255, 255, 255}}));
}

TEST(PpmTest, SkipsHeaderComments) {
  auto bytes = bytes_of("P6 # produced by hand\n1\t1\n# maxval next\n255\n");
  for (int v : {1, 2, 3}) bytes.push_back(v);
  EXPECT_EQ(decode_image(bytes).at(0, 0), (Rgb{1, 2, 3}));
}

TEST(PpmTest, TruncatedBody) {
  auto bytes = bytes_of("P6\n2 1\n255\n");
  bytes.insert(bytes.end(), {0, 0, 0, 255});
  try {
    decode_image(bytes);
    FAIL() << "expected an error";
  } catch (const ImageFormatError& e) {
    EXPECT_STREQ(e.what(), "truncated pixel data");
  }
}

TEST(PpmTest, MalformedHeaders) {
  EXPECT_THROW(decode_image(bytes_of("P6\n2\n")), ImageFormatError);
  EXPECT_THROW(decode_image(bytes_of("P6\n0 1\n255\n")), ImageFormatError);
  EXPECT_THROW(decode_image(bytes_of("P3\n1 1\n255\n0 0 0\n"),
                            ImageFormat::kPpm),
               ImageFormatError);
  EXPECT_THROW(decode_image(bytes_of("GIF89a")), ImageFormatError);
}

TEST(PpmTest, UnsupportedBitDepth) {
  auto bytes = bytes_of("P6\n1 1\n65535\n");
  bytes.resize(bytes.size() + 6, 0);
  try {
    decode_image(bytes);
    FAIL() << "expected an error";
  } catch (const ImageFormatError& e) {
    EXPECT_NE(std::string(e.what()).find("unsupported bit depth"),
              std::string::npos);
  }
}

TEST(PpmTest, WhitePixelIsFourteenBytes) {
  // "P6\n" (3) + "1 1\n" (4) + "255\n" (4) + one RGB triple (3).
  const auto bytes = encode_image(RasterImage(1, 1, kWhite), ImageFormat::kPpm);
  auto expected = bytes_of("P6\n1 1\n255\n");
  expected.insert(expected.end(), {255, 255, 255});
  EXPECT_EQ(bytes.size(), 14u);
  EXPECT_EQ(bytes, expected);
}

TEST(PpmTest, RoundTripIsBitExact) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto img = testing::random_image(rng, 1 + rng() % 40, 1 + rng() % 40);
    const auto bytes = encode_image(img, ImageFormat::kPpm);
    EXPECT_EQ(decode_image(bytes), img);
    EXPECT_EQ(encode_image(decode_image(bytes), ImageFormat::kPpm), bytes);
  }
}

TEST(PngTest, RoundTripPreservesPixels) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto img = testing::random_image(rng, 1 + rng() % 50, 1 + rng() % 50);
    EXPECT_EQ(decode_image(encode_image(img, ImageFormat::kPng)), img);
  }
}

TEST(PngTest, FiveTwelveSquare) {
  std::mt19937_64 rng(5);
  const auto img = testing::random_image(rng, 512, 512);
  const auto back = decode_image(encode_image(img, ImageFormat::kPng));
  EXPECT_EQ(back.pixel_count(), 262144u);
  EXPECT_EQ(back, img);
}

TEST(PngTest, AlphaCompositedOverWhite) {
  // Opaque red, fully transparent blue, half-transparent black.
  const std::vector<std::uint8_t> rgba = {255, 0, 0,   255,  //
                                          0,   0, 255, 0,    //
                                          0,   0, 0,   128};
  const auto img =
      decode_image(png_from_rgba(3, 1, rgba, PNG_FORMAT_RGBA));
  EXPECT_EQ(img.at(0, 0), (Rgb{255, 0, 0}));
  EXPECT_EQ(img.at(1, 0), kWhite);
  // 255 * (255 - 128) / 255 = 127
  EXPECT_EQ(img.at(2, 0), (Rgb{127, 127, 127}));
}

TEST(PngTest, GrayscaleExpandsToRgb) {
  const std::vector<std::uint8_t> gray = {0, 100, 255};
  const auto img = decode_image(png_from_rgba(3, 1, gray, PNG_FORMAT_GRAY));
  EXPECT_EQ(img.at(1, 0), (Rgb{100, 100, 100}));
}

TEST(PngTest, TruncatedStreamFails) {
  std::mt19937_64 rng(6);
  auto bytes =
      encode_image(testing::random_image(rng, 64, 64), ImageFormat::kPng);
  bytes.resize(bytes.size() / 2);
  EXPECT_THROW(decode_image(bytes), ImageFormatError);
}

TEST(ImageFileTest, SaveAndLoadBothFormats) {
  const auto dir = std::filesystem::temp_directory_path();
  std::mt19937_64 rng(7);
  const auto img = testing::random_image(rng, 17, 9);
  for (const char* name : {"semcomm_image_test.ppm", "semcomm_image_test.png"}) {
    const auto path = dir / name;
    save_image(img, path);
    EXPECT_EQ(load_image(path), img);
    std::filesystem::remove(path);
  }
}

TEST(ImageFileTest, UnreadableAndUnknownPaths) {
  EXPECT_THROW(load_image("/nonexistent/semcomm.ppm"), IoError);
  EXPECT_THROW(save_image(RasterImage(1, 1, kWhite), "/tmp/semcomm.gif"),
               ImageFormatError);
  EXPECT_THROW(save_image(RasterImage(1, 1, kWhite), "/nonexistent/dir/x.ppm"),
               IoError);
}

TEST(ImageFileTest, FormatFromExtension) {
  EXPECT_EQ(format_from_extension("a.PPM"), ImageFormat::kPpm);
  EXPECT_EQ(format_from_extension("b.png"), ImageFormat::kPng);
  EXPECT_THROW(format_from_extension("c.jpg"), ImageFormatError);
}

}  // namespace
}  // namespace semcomm
