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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

#include "semcomm/error.hpp"
#include "semcomm/pipeline.hpp"

namespace semcomm::gateway {

// Protocol v1 client for the model gateway. All endpoints are JSON POSTs:
//
//   /v1/caption     {image_png_b64}                         -> {caption}
//   /v1/segment     {image_png_b64}                  -> {width, height, rle_b64}
//   /v1/generate    {image_png_b64, caption, k, negative_prompt, seed
//                    [, strength]}                    -> {images_png_b64: [...]}
//   /v1/similarity  {reference, candidate}          -> {precision, recall, f1}
//
// Failures come back as {"error": {"code", "message"}} with a non-2xx status.

struct Endpoint {
  std::string base_url;  // e.g. "http://127.0.0.1:8080"
  double timeout_seconds = 120.0;
  int retries = 2;
  std::optional<std::string> bearer_token;
  // Forwarded to /v1/generate only when set.
  std::optional<double> strength;
  std::chrono::milliseconds retry_backoff{200};
  std::size_t max_in_flight = 8;

  // Throws InvalidArgument on an empty URL, timeout <= 0 or retries < 0.
  void validate() const;
};

inline constexpr const char* kUrlEnv = "SEMCOMM_GATEWAY_URL";
inline constexpr const char* kTokenEnv = "SEMCOMM_GATEWAY_TOKEN";
inline constexpr const char* kTimeoutEnv = "SEMCOMM_GATEWAY_TIMEOUT";

// Builds an endpoint from the environment; `url_override` wins over
// SEMCOMM_GATEWAY_URL when non-empty.
Endpoint endpoint_from_env(const std::string& url_override = {});

// Could not get a usable answer: connection failures, or retryable statuses
// (429, 5xx) still failing after every retry.
class TransportError : public BackendUnavailable {
 public:
  using BackendUnavailable::BackendUnavailable;
};

// Non-retryable HTTP status.
class StatusError : public BackendError {
 public:
  StatusError(std::string stage, int status, const std::string& what)
      : BackendError(std::move(stage), what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

// The response body does not match the protocol schema.
class SchemaError : public BackendError {
 public:
  using BackendError::BackendError;
};

class Client {
 public:
  explicit Client(Endpoint endpoint);

  const Endpoint& endpoint() const noexcept { return endpoint_; }

  Caption caption(const RasterImage& image) const;
  SegmentationArray segment(const RasterImage& image) const;
  std::vector<RasterImage> generate(const RasterImage& conditioning,
                                    const Caption& caption, std::size_t count,
                                    const std::string& negative_prompt,
                                    std::uint64_t seed) const;
  // Returns f1 clamped to [0, 1].
  double similarity(const std::string& reference,
                    const std::string& candidate) const;

  // Request bodies, exposed so callers can check they are deterministic.
  static std::string caption_request(const RasterImage& image);
  static std::string segment_request(const RasterImage& image);
  std::string generate_request(const RasterImage& conditioning,
                               const Caption& caption, std::size_t count,
                               const std::string& negative_prompt,
                               std::uint64_t seed) const;
  static std::string similarity_request(const std::string& reference,
                                        const std::string& candidate);

 private:
  std::string post(const char* stage, const std::string& path,
                   const std::string& body) const;

  Endpoint endpoint_;
  std::shared_ptr<std::counting_semaphore<>> in_flight_;
};

std::string base64_encode(const std::vector<std::uint8_t>& bytes);
// Throws InvalidArgument on malformed input.
std::vector<std::uint8_t> base64_decode(const std::string& text);

// Pipeline adapters.
class RemoteCaptioner final : public Captioner {
 public:
  explicit RemoteCaptioner(std::shared_ptr<const Client> client)
      : client_(std::move(client)) {}
  Caption caption(const RasterImage& image) const override {
    return client_->caption(image);
  }

 private:
  std::shared_ptr<const Client> client_;
};

class RemoteSegmenter final : public Segmenter {
 public:
  explicit RemoteSegmenter(std::shared_ptr<const Client> client)
      : client_(std::move(client)) {}
  SegmentationArray segment(const RasterImage& image) const override {
    return client_->segment(image);
  }

 private:
  std::shared_ptr<const Client> client_;
};

class RemoteGenerator final : public Generator {
 public:
  explicit RemoteGenerator(std::shared_ptr<const Client> client)
      : client_(std::move(client)) {}
  std::vector<RasterImage> generate(
      const GenerationRequest& request) const override {
    return client_->generate(request.conditioning, request.caption,
                             request.count, request.negative_prompt,
                             request.seed);
  }

 private:
  std::shared_ptr<const Client> client_;
};

class RemoteSimilarity final : public SimilarityBackend {
 public:
  explicit RemoteSimilarity(std::shared_ptr<const Client> client)
      : client_(std::move(client)) {}
  double similarity(std::string_view reference,
                    std::string_view candidate) const override {
    return client_->similarity(std::string(reference), std::string(candidate));
  }
  std::string name() const override { return "gateway"; }

 private:
  std::shared_ptr<const Client> client_;
};

BackendSet remote_backend_set(const Endpoint& endpoint);

}  // namespace semcomm::gateway
