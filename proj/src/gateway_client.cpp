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

#include "semcomm/gateway_client.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <random>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "semcomm/codec.hpp"

namespace semcomm::gateway {

using nlohmann::json;

namespace {

std::string new_request_id() {
  thread_local std::mt19937_64 rng{std::random_device{}()};
  static constexpr char kHex[] = "0123456789abcdef";
  std::string id;
  for (int half = 0; half < 2; ++half) {
    auto v = rng();
    for (int k = 0; k < 16; ++k) {
      id.push_back(kHex[v & 0xF]);
      v >>= 4;
    }
  }
  return id;
}

bool retryable(int status) { return status == 429 || status >= 500; }

std::string describe_error_body(const std::string& body) {
  const auto parsed = json::parse(body, nullptr, false);
  if (parsed.is_object() && parsed.contains("error") &&
      parsed["error"].is_object()) {
    const auto& err = parsed["error"];
    std::string out;
    if (err.contains("code") && err["code"].is_string()) {
      out = err["code"].get<std::string>();
    }
    if (err.contains("message") && err["message"].is_string()) {
      if (!out.empty()) out += ": ";
      out += err["message"].get<std::string>();
    }
    if (!out.empty()) return out;
  }
  return body.substr(0, 200);
}

json parse_object(const char* stage, const std::string& body) {
  auto parsed = json::parse(body, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw SchemaError(stage, "schema violation: response is not a JSON object");
  }
  return parsed;
}

const json& require_field(const char* stage, const json& obj,
                          const char* field) {
  auto it = obj.find(field);
  if (it == obj.end()) {
    throw SchemaError(stage, std::string("schema violation: missing field '") +
                                 field + "'");
  }
  return *it;
}

std::string require_string(const char* stage, const json& obj,
                           const char* field) {
  const auto& v = require_field(stage, obj, field);
  if (!v.is_string()) {
    throw SchemaError(stage, std::string("schema violation: '") + field +
                                 "' is not a string");
  }
  return v.get<std::string>();
}

std::uint64_t require_unsigned(const char* stage, const json& obj,
                               const char* field) {
  const auto& v = require_field(stage, obj, field);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw SchemaError(stage, std::string("schema violation: '") + field +
                                 "' is not a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

double require_number(const char* stage, const json& obj, const char* field) {
  const auto& v = require_field(stage, obj, field);
  if (!v.is_number()) {
    throw SchemaError(stage, std::string("schema violation: '") + field +
                                 "' is not a number");
  }
  return v.get<double>();
}

std::vector<std::uint8_t> decode_b64_field(const char* stage,
                                           const std::string& text) {
  try {
    return base64_decode(text);
  } catch (const InvalidArgument& e) {
    throw SchemaError(stage, std::string("schema violation: ") + e.what());
  }
}

RasterImage decode_png_field(const char* stage, const std::string& text) {
  const auto bytes = decode_b64_field(stage, text);
  try {
    return decode_image(bytes, ImageFormat::kPng);
  } catch (const ImageFormatError& e) {
    throw SchemaError(stage, std::string("schema violation: ") + e.what());
  }
}

std::string png_b64(const RasterImage& image) {
  return base64_encode(encode_image(image, ImageFormat::kPng));
}

}  // namespace

void Endpoint::validate() const {
  if (base_url.empty()) throw InvalidArgument("gateway URL is empty");
  if (!(timeout_seconds > 0.0)) {
    throw InvalidArgument("gateway timeout must be positive");
  }
  if (retries < 0) throw InvalidArgument("gateway retries must be >= 0");
  if (max_in_flight == 0) {
    throw InvalidArgument("gateway connection limit must be >= 1");
  }
}

Endpoint endpoint_from_env(const std::string& url_override) {
  Endpoint ep;
  if (!url_override.empty()) {
    ep.base_url = url_override;
  } else if (const char* url = std::getenv(kUrlEnv)) {
    ep.base_url = url;
  }
  if (const char* token = std::getenv(kTokenEnv); token && *token) {
    ep.bearer_token = token;
  }
  if (const char* timeout = std::getenv(kTimeoutEnv); timeout && *timeout) {
    char* end = nullptr;
    const double t = std::strtod(timeout, &end);
    if (end == timeout || *end != '\0') {
      throw InvalidArgument(std::string(kTimeoutEnv) + " is not a number");
    }
    ep.timeout_seconds = t;
  }
  return ep;
}

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3) + 1, '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                bytes.data(), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
  if (text.size() % 4 != 0) throw InvalidArgument("invalid base64 length");
  std::size_t padding = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    const bool alpha = std::isalnum(static_cast<unsigned char>(c)) ||
                       c == '+' || c == '/';
    if (c == '=') {
      if (i + 2 < text.size()) throw InvalidArgument("invalid base64 padding");
      ++padding;
    } else if (!alpha || padding > 0) {
      throw InvalidArgument("invalid base64 character");
    }
  }
  std::vector<std::uint8_t> out(text.size() / 4 * 3);
  if (text.empty()) return out;
  const int n = EVP_DecodeBlock(
      out.data(), reinterpret_cast<const unsigned char*>(text.data()),
      static_cast<int>(text.size()));
  if (n < 0) throw InvalidArgument("invalid base64");
  out.resize(static_cast<std::size_t>(n) - padding);
  return out;
}

Client::Client(Endpoint endpoint)
    : endpoint_(std::move(endpoint)),
      in_flight_(std::make_shared<std::counting_semaphore<>>(
          static_cast<std::ptrdiff_t>(std::max<std::size_t>(
              1, endpoint_.max_in_flight)))) {
  endpoint_.validate();
}

std::string Client::post(const char* stage, const std::string& path,
                         const std::string& body) const {
  in_flight_->acquire();
  struct Release {
    std::counting_semaphore<>* s;
    ~Release() { s->release(); }
  } release{in_flight_.get()};

  httplib::Client http(endpoint_.base_url);
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::duration<double>(endpoint_.timeout_seconds));
  http.set_connection_timeout(timeout);
  http.set_read_timeout(timeout);
  http.set_write_timeout(timeout);

  httplib::Headers headers{{"X-Request-Id", new_request_id()}};
  if (endpoint_.bearer_token) {
    headers.emplace("Authorization", "Bearer " + *endpoint_.bearer_token);
  }

  std::string last_failure;
  const int attempts = endpoint_.retries + 1;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0 && endpoint_.retry_backoff.count() > 0) {
      std::this_thread::sleep_for(endpoint_.retry_backoff * attempt);
    }
    auto res = http.Post(path, headers, body, "application/json");
    if (!res) {
      last_failure = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 200 && res->status < 300) return res->body;
    const std::string detail = "HTTP " + std::to_string(res->status) + " (" +
                               describe_error_body(res->body) + ")";
    if (!retryable(res->status)) {
      throw StatusError(stage, res->status, path + " failed: " + detail);
    }
    last_failure = detail;
  }
  throw TransportError(stage, "transport error: " + path + " failed after " +
                                  std::to_string(attempts) +
                                  " attempt(s): " + last_failure);
}

std::string Client::caption_request(const RasterImage& image) {
  return json{{"image_png_b64", png_b64(image)}}.dump();
}

std::string Client::segment_request(const RasterImage& image) {
  return json{{"image_png_b64", png_b64(image)}}.dump();
}

std::string Client::generate_request(const RasterImage& conditioning,
                                     const Caption& caption, std::size_t count,
                                     const std::string& negative_prompt,
                                     std::uint64_t seed) const {
  json body{{"image_png_b64", png_b64(conditioning)},
            {"caption", caption.text()},
            {"k", count},
            {"negative_prompt", negative_prompt},
            {"seed", seed}};
  if (endpoint_.strength) body["strength"] = *endpoint_.strength;
  return body.dump();
}

std::string Client::similarity_request(const std::string& reference,
                                       const std::string& candidate) {
  return json{{"reference", reference}, {"candidate", candidate}}.dump();
}

Caption Client::caption(const RasterImage& image) const {
  constexpr const char* kStage = "captioner";
  const auto obj =
      parse_object(kStage, post(kStage, "/v1/caption", caption_request(image)));
  const auto text = require_string(kStage, obj, "caption");
  try {
    return Caption(text);
  } catch (const InvalidArgument& e) {
    throw SchemaError(kStage, std::string("schema violation: ") + e.what());
  }
}

SegmentationArray Client::segment(const RasterImage& image) const {
  constexpr const char* kStage = "segmenter";
  const auto obj =
      parse_object(kStage, post(kStage, "/v1/segment", segment_request(image)));
  const auto width = require_unsigned(kStage, obj, "width");
  const auto height = require_unsigned(kStage, obj, "height");
  const auto rle = decode_b64_field(kStage, require_string(kStage, obj, "rle_b64"));
  if (width != image.width() || height != image.height()) {
    throw BackendError(kStage, "segmentation dimension mismatch: got " +
                                   std::to_string(width) + "x" +
                                   std::to_string(height) + ", expected " +
                                   std::to_string(image.width()) + "x" +
                                   std::to_string(image.height()));
  }
  try {
    return SegmentationArray(width, height, rle_decode(rle, width * height));
  } catch (const CodecError& e) {
    throw SchemaError(kStage, std::string("schema violation: ") + e.what());
  }
}

std::vector<RasterImage> Client::generate(const RasterImage& conditioning,
                                          const Caption& caption,
                                          std::size_t count,
                                          const std::string& negative_prompt,
                                          std::uint64_t seed) const {
  constexpr const char* kStage = "generator";
  if (count == 0) {
    throw InvalidArgument("generate: k must be at least 1");
  }
  const auto obj = parse_object(
      kStage, post(kStage, "/v1/generate",
                   generate_request(conditioning, caption, count,
                                    negative_prompt, seed)));
  const auto& images = require_field(kStage, obj, "images_png_b64");
  if (!images.is_array()) {
    throw SchemaError(kStage, "schema violation: 'images_png_b64' is not an array");
  }
  if (images.size() != count) {
    throw BackendError(kStage, "candidate count mismatch: expected " +
                                   std::to_string(count) + ", got " +
                                   std::to_string(images.size()));
  }
  std::vector<RasterImage> out;
  out.reserve(count);
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (!images[i].is_string()) {
      throw SchemaError(kStage, "schema violation: image " + std::to_string(i) +
                                    " is not a string");
    }
    auto img = decode_png_field(kStage, images[i].get<std::string>());
    if (!img.same_shape(conditioning.width(), conditioning.height())) {
      throw BackendError(kStage, "dimension mismatch: image " +
                                     std::to_string(i) + " is " +
                                     std::to_string(img.width()) + "x" +
                                     std::to_string(img.height()));
    }
    out.push_back(std::move(img));
  }
  return out;
}

double Client::similarity(const std::string& reference,
                          const std::string& candidate) const {
  constexpr const char* kStage = "similarity";
  const auto obj = parse_object(
      kStage,
      post(kStage, "/v1/similarity", similarity_request(reference, candidate)));
  require_number(kStage, obj, "precision");
  require_number(kStage, obj, "recall");
  const double f1 = require_number(kStage, obj, "f1");
  return std::clamp(f1, 0.0, 1.0);
}

BackendSet remote_backend_set(const Endpoint& endpoint) {
  auto client = std::make_shared<const Client>(endpoint);
  return BackendSet{std::make_shared<RemoteCaptioner>(client),
                    std::make_shared<RemoteSegmenter>(client),
                    std::make_shared<RemoteGenerator>(client),
                    std::make_shared<RemoteSimilarity>(client)};
}

}  // namespace semcomm::gateway
