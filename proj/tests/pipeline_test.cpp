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

#include "semcomm/pipeline.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <mutex>
#include <random>
#include <thread>

#include "oracles.hpp"
#include "semcomm/codec.hpp"
#include "semcomm/mock_backends.hpp"
#include "semcomm/palette.hpp"

namespace semcomm {
namespace {

// Background with an airplane block, a dog block and a person strip, all in
// builtin-table colours.
SegmentationArray scene_labels(std::size_t w = 48, std::size_t h = 32) {
  std::vector<std::uint8_t> v(w * h, 0);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      if (x >= 4 && x < 20 && y >= 4 && y < 14) v[y * w + x] = 1;
      if (x >= 26 && x < 40 && y >= 10 && y < 28) v[y * w + x] = 12;
      if (y >= h - 3) v[y * w + x] = 15;
    }
  }
  return SegmentationArray::from_values(w, h, v);
}

RasterImage scene_image() {
  return render_colored_segmented(scene_labels(), builtin_label_table());
}

ReceiverConfig receiver(std::size_t k, std::uint64_t seed = 1,
                        std::size_t jobs = 1) {
  ReceiverConfig c;
  c.candidate_count = k;
  c.generation_seed = seed;
  c.jobs = jobs;
  return c;
}

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "<no error>";
}

// ------------------------------------------------------------------ mocks

TEST(MockSegmentTest, InvertsBuiltinRendering) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t w = 1 + rng() % 40, h = 1 + rng() % 40;
    const auto s = SegmentationArray::from_values(
        w, h, testing::random_labels(rng, w * h, 20, rng() % 2));
    ASSERT_EQ(mock_segment(render_colored_segmented(s, builtin_label_table())),
              s);
  }
}

TEST(MockSegmentTest, WhiteIsBackground) {
  EXPECT_EQ(mock_segment(RasterImage(5, 3, kWhite)),
            SegmentationArray(5, 3, Label{0}));
}

TEST(MockCaptionTest, Template) {
  const std::uint8_t v[] = {0, 1, 1, 0};
  const auto img = render_colored_segmented(
      SegmentationArray::from_values(2, 2, v), builtin_label_table());
  EXPECT_EQ(mock_caption(img).text(), "a photography of airplane");
  EXPECT_EQ(mock_caption(RasterImage(2, 2, kWhite)).text(),
            "a photography of background");
  EXPECT_EQ(mock_caption(scene_image()).text(),
            "a photography of airplane and dog and person");
  EXPECT_EQ(mock_caption(scene_image()), mock_caption(scene_image()));
}

TEST(MockGenerateTest, LoopbackAndPerturbations) {
  const auto img = scene_image();
  for (std::uint64_t seed : {0ull, 1ull, 99ull, 12345678901ull}) {
    const auto out = mock_generate(img, 3, seed);
    ASSERT_EQ(out.size(), 3u);
    EXPECT_EQ(out[0], img);
    EXPECT_NE(out[1], img);
    EXPECT_NE(out[2], img);
    EXPECT_EQ(mock_generate(img, 3, seed), out);
  }
  EXPECT_NE(mock_generate(img, 3, 1)[1], mock_generate(img, 3, 2)[1]);
}

TEST(MockGenerateTest, MatchingRateStrictlyFalls) {
  const auto ref = scene_labels();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto out = mock_generate(scene_image(), 50, seed);
    double last = 2.0;
    for (const auto& cand : out) {
      const double s = smr(ref, mock_segment(cand));
      ASSERT_LT(s, last) << "seed " << seed;
      last = s;
    }
  }
}

TEST(MockGenerateTest, TinyImagesStillGrowUntilFull) {
  // Rectangles on 2x2 cover 1, 2 or 4 pixels: three perturbation sizes.
  const auto img = render_colored_segmented(SegmentationArray(2, 2, Label{3}),
                                            builtin_label_table());
  const auto out = mock_generate(img, 4, 7);
  double last = 2.0;
  for (const auto& cand : out) {
    const double s = smr(SegmentationArray(2, 2, Label{3}), mock_segment(cand));
    EXPECT_LT(s, last);
    last = s;
  }
  EXPECT_EQ(last, 0.0);
}

// --------------------------------------------------------------- transmit

TEST(TransmitTest, RenderedPayloadEqualsInput) {
  const auto img = scene_image();
  const auto p = transmit(img, mock_backend_set(), {});
  EXPECT_TRUE(validate_payload(p).ok());
  EXPECT_EQ(p.segmentation, scene_labels());
  EXPECT_EQ(render_colored_segmented(p.segmentation, p.palette), img);
  EXPECT_FALSE(p.background_recolored);
  EXPECT_EQ(transmit(img, mock_backend_set(), {}), p);
}

TEST(TransmitTest, Recoloring) {
  // Give the background a non-white colour first.
  auto table = builtin_label_table().with_color(Label{0}, Rgb{10, 200, 10});
  const auto img = render_colored_segmented(scene_labels(), table);
  struct : Segmenter {
    SegmentationArray segment(const RasterImage&) const override {
      return scene_labels();
    }
  } fixed;
  auto b = mock_backend_set();
  b.segmenter = std::shared_ptr<const Segmenter>(&fixed, [](auto*) {});
  TransmitterConfig c;
  c.apply_background_recoloring = true;
  const auto p = transmit(img, b, c);
  EXPECT_TRUE(p.background_recolored);
  EXPECT_EQ(p.palette.find(Label{0}), kWhite);
  EXPECT_EQ(p.palette.find(Label{1}), table.find(Label{1}));
  EXPECT_TRUE(validate_payload(p).ok());
}

TEST(TransmitTest, RecoloringWithoutBackgroundPixels) {
  const auto img = render_colored_segmented(SegmentationArray(4, 4, Label{2}),
                                            builtin_label_table());
  TransmitterConfig c;
  c.apply_background_recoloring = true;
  const auto p = transmit(img, mock_backend_set(), c);
  EXPECT_FALSE(p.background_recolored);
  EXPECT_TRUE(validate_payload(p).ok());
}

struct WrongSizeSegmenter : Segmenter {
  SegmentationArray segment(const RasterImage& img) const override {
    return SegmentationArray(img.width() + 1, img.height(), Label{0});
  }
};

struct FailingCaptioner : Captioner {
  Caption caption(const RasterImage&) const override {
    throw std::runtime_error("model not loaded");
  }
};

TEST(TransmitTest, Errors) {
  auto b = mock_backend_set();
  b.segmenter = std::make_shared<WrongSizeSegmenter>();
  EXPECT_NE(error_of([&] { transmit(scene_image(), b, {}); })
                .find("segmenter dimension mismatch"),
            std::string::npos);

  b = mock_backend_set();
  b.captioner = std::make_shared<FailingCaptioner>();
  try {
    transmit(scene_image(), b, {});
    FAIL() << "expected an error";
  } catch (const BackendError& e) {
    EXPECT_EQ(e.stage(), "captioner");
    EXPECT_NE(std::string(e.what()).find("model not loaded"), std::string::npos);
  }
}

TEST(TransmitTest, PayloadAlwaysValidates) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const auto img = testing::random_image(rng, 1 + rng() % 20, 1 + rng() % 20);
    TransmitterConfig c;
    c.apply_background_recoloring = rng() % 2;
    const auto p = transmit(img, mock_backend_set(), c);
    ASSERT_TRUE(validate_payload(p).ok());
    ASSERT_EQ(decode_payload(encode_payload(p)), p);
  }
}

// ---------------------------------------------------------------- receive

TEST(ReceiveTest, EndToEndSelectsLoopback) {
  const auto img = scene_image();
  const auto p = transmit(img, mock_backend_set(), {});
  const auto r = receive(p, mock_backend_set(), receiver(10));
  ASSERT_EQ(r.candidates.size(), 10u);
  EXPECT_EQ(r.selected_index, 0u);
  EXPECT_EQ(r.selected().smr, 1.0);
  EXPECT_EQ(r.selected().image, render_colored_segmented(p.segmentation, p.palette));
  EXPECT_EQ(r.selected().image, img);
  for (std::size_t i = 0; i < r.candidates.size(); ++i) {
    EXPECT_EQ(r.candidates[i].candidate_index, i);
  }
}

TEST(ReceiveTest, DeterministicAcrossRunsAndJobs) {
  const auto p = transmit(scene_image(), mock_backend_set(), {});
  const auto first = receive(p, mock_backend_set(), receiver(10, 5, 1));
  for (int run = 0; run < 5; ++run) {
    for (std::size_t jobs : {1u, 8u}) {
      const auto r = receive(p, mock_backend_set(), receiver(10, 5, jobs));
      ASSERT_EQ(r.selected_index, first.selected_index);
      for (std::size_t i = 0; i < 10; ++i) {
        ASSERT_EQ(r.candidates[i].image, first.candidates[i].image);
        ASSERT_EQ(r.candidates[i].combined, first.candidates[i].combined);
        ASSERT_EQ(r.candidates[i].candidate_caption,
                  first.candidates[i].candidate_caption);
      }
    }
  }
}

TEST(ReceiveTest, SingleCandidateIsSelected) {
  const auto p = transmit(scene_image(), mock_backend_set(), {});
  EXPECT_EQ(receive(p, mock_backend_set(), receiver(1)).selected_index, 0u);
}

TEST(ReceiveTest, ZeroCandidatesRejected) {
  const auto p = transmit(scene_image(), mock_backend_set(), {});
  EXPECT_THROW(receive(p, mock_backend_set(), receiver(0)), InvalidArgument);
}

struct ShortGenerator : Generator {
  std::vector<RasterImage> generate(const GenerationRequest& r) const override {
    auto out = mock_generate(r.conditioning, r.count, r.seed);
    out.pop_back();
    return out;
  }
};

struct OddSizeGenerator : Generator {
  std::vector<RasterImage> generate(const GenerationRequest& r) const override {
    auto out = mock_generate(r.conditioning, r.count, r.seed);
    out[1] = RasterImage(3, 3, kWhite);
    return out;
  }
};

TEST(ReceiveTest, GeneratorContractErrors) {
  const auto p = transmit(scene_image(), mock_backend_set(), {});
  auto b = mock_backend_set();
  b.generator = std::make_shared<ShortGenerator>();
  EXPECT_NE(error_of([&] { receive(p, b, receiver(4)); })
                .find("candidate count mismatch"),
            std::string::npos);
  b.generator = std::make_shared<OddSizeGenerator>();
  EXPECT_NE(error_of([&] { receive(p, b, receiver(4)); }).find("candidate 1"),
            std::string::npos);
}

struct CapturingGenerator : Generator {
  std::vector<RasterImage> generate(const GenerationRequest& r) const override {
    std::lock_guard lock(mu);
    negative_prompt = r.negative_prompt;
    caption = r.caption.text();
    conditioning = std::make_unique<RasterImage>(r.conditioning);
    ++calls;
    return mock_generate(r.conditioning, r.count, r.seed);
  }
  mutable std::mutex mu;
  mutable std::string negative_prompt, caption;
  mutable std::unique_ptr<RasterImage> conditioning;
  mutable int calls = 0;
};

TEST(ReceiveTest, GeneratorSeesRenderedFeaturesOncePerBatch) {
  auto table = builtin_label_table().with_color(Label{0}, Rgb{1, 2, 3});
  auto p = transmit(render_colored_segmented(scene_labels(), table),
                    mock_backend_set(), {});
  auto gen = std::make_shared<CapturingGenerator>();
  auto b = mock_backend_set();
  b.generator = gen;
  receive(p, b, receiver(6));
  EXPECT_EQ(gen->calls, 1);
  EXPECT_EQ(gen->negative_prompt, kDefaultNegativePrompt);
  EXPECT_EQ(gen->caption, p.caption.text());
  EXPECT_EQ(*gen->conditioning,
            render_colored_segmented(p.segmentation, p.palette));
}

TEST(ReceiveTest, DefaultNegativePrompt) {
  EXPECT_EQ(std::string(kDefaultNegativePrompt).rfind(
                "low quality, worst quality, out of focus", 0),
            0u);
  EXPECT_EQ(ReceiverConfig{}.candidate_count, 50u);
}

// Counts overlapping calls; a single-flight backend must never see two.
class OverlapProbe {
 public:
  void enter() {
    const int now = ++active_;
    int seen = peak_.load();
    while (now > seen && !peak_.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
    --active_;
  }
  int peak() const { return peak_; }

 private:
  std::atomic<int> active_{0}, peak_{0};
};

struct ProbedSegmenter : Segmenter {
  ProbedSegmenter(bool sf, OverlapProbe& p) : single(sf), probe(p) {}
  SegmentationArray segment(const RasterImage& img) const override {
    probe.enter();
    return mock_segment(img);
  }
  bool single_flight() const override { return single; }
  bool single;
  OverlapProbe& probe;
};

TEST(ReceiveTest, SingleFlightBackendsAreSerialized) {
  const auto p = transmit(scene_image(), mock_backend_set(), {});
  OverlapProbe probe;
  auto b = mock_backend_set();
  b.segmenter = std::make_shared<ProbedSegmenter>(true, probe);
  const auto r = receive(p, b, receiver(16, 1, 8));
  EXPECT_EQ(probe.peak(), 1);
  EXPECT_EQ(r.selected_index, 0u);
}

}  // namespace
}  // namespace semcomm
