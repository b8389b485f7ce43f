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

// semcomm: command-line front end for the semantic image transmission
// pipeline. Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "semcomm/codec.hpp"
#include "semcomm/error.hpp"
#include "semcomm/gateway_client.hpp"
#include "semcomm/image.hpp"
#include "semcomm/mock_backends.hpp"
#include "semcomm/palette.hpp"
#include "semcomm/pipeline.hpp"
#include "semcomm/scoring.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BackendOptions {
  std::string backend = "mock";
  std::string gateway_url;
  int background_label = 0;
};

void add_backend_options(CLI::App* cmd, BackendOptions& opts) {
  cmd->add_option("--backend", opts.backend, "Model backend")
      ->check(CLI::IsMember({"mock", "gateway"}))
      ->capture_default_str();
  cmd->add_option("--gateway-url", opts.gateway_url,
                  std::string("Gateway base URL (default: $") +
                      semcomm::gateway::kUrlEnv + ")");
}

semcomm::BackendSet make_backends(const BackendOptions& opts) {
  if (opts.backend == "mock") {
    return semcomm::BackendSet{
        std::make_shared<semcomm::MockCaptioner>(
            semcomm::Label{static_cast<std::uint8_t>(opts.background_label)}),
        std::make_shared<semcomm::MockSegmenter>(),
        std::make_shared<semcomm::MockGenerator>(), nullptr};
  }
  auto endpoint = semcomm::gateway::endpoint_from_env(opts.gateway_url);
  if (endpoint.base_url.empty()) {
    throw UsageError(std::string("--backend gateway needs --gateway-url or $") +
                     semcomm::gateway::kUrlEnv);
  }
  return semcomm::gateway::remote_backend_set(endpoint);
}

semcomm::RasterImage read_image(const fs::path& path) {
  std::vector<std::uint8_t> bytes;
  try {
    bytes = semcomm::read_file(path);
  } catch (const semcomm::IoError&) {
    throw semcomm::IoError("cannot read image " + path.string());
  }
  return semcomm::decode_image(bytes);
}

semcomm::SemanticPayload read_payload(const fs::path& path) {
  std::vector<std::uint8_t> bytes;
  try {
    bytes = semcomm::read_file(path);
  } catch (const semcomm::IoError&) {
    throw semcomm::IoError("cannot read payload " + path.string());
  }
  return semcomm::decode_payload(bytes);
}

json size_report_json(const semcomm::SizeReport& r) {
  return json{{"uncompressed_image_bytes", r.uncompressed_image_bytes},
              {"caption_bytes", r.caption_bytes},
              {"palette_bytes", r.palette_bytes},
              {"segmentation_rle_bytes", r.segmentation_rle_bytes},
              {"total_payload_bytes", r.total_payload_bytes}};
}

// ------------------------------------------------------------------ extract

struct ExtractArgs {
  std::string image;
  std::string output;
  bool recolor_bg = false;
  BackendOptions backend;
};

int run_extract(const ExtractArgs& args) {
  const auto image = read_image(args.image);
  const auto backends = make_backends(args.backend);
  const semcomm::TransmitterConfig config{
      args.recolor_bg,
      semcomm::Label{static_cast<std::uint8_t>(args.backend.background_label)}};
  const auto payload = semcomm::transmit(image, backends, config);
  semcomm::write_file(args.output, semcomm::encode_payload(payload).bytes);
  std::cout << size_report_json(semcomm::size_report(payload)).dump() << "\n";
  return 0;
}

// ------------------------------------------------------------------- render

struct RenderArgs {
  std::string payload;
  std::string output;
};

int run_render(const RenderArgs& args) {
  const auto payload = read_payload(args.payload);
  const auto format = semcomm::format_from_extension(args.output);
  semcomm::save_image(
      semcomm::render_colored_segmented(payload.segmentation, payload.palette),
      args.output, format);
  return 0;
}

// ------------------------------------------------------------------ receive

struct ScoringArgs {
  bool no_stop_word_removal = false;
  bool foreground_smr = false;
  double smr_weight = 0.5;
  std::string stop_words_file;
};

void add_scoring_options(CLI::App* cmd, ScoringArgs& s) {
  cmd->add_option("--smr-weight", s.smr_weight,
                  "Weight of the segmentation matching rate in the combined "
                  "score")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_flag("--no-stop-word-removal", s.no_stop_word_removal,
                "Keep stop words when comparing captions");
  cmd->add_flag("--foreground-smr", s.foreground_smr,
                "Match only reference pixels that are not background");
  cmd->add_option("--stop-words", s.stop_words_file,
                  "Stop-word list file (one token per line)")
      ->check(CLI::ExistingFile);
}

semcomm::ScoringConfig scoring_config(const ScoringArgs& s) {
  semcomm::ScoringConfig config;
  config.smr_weight = s.smr_weight;
  config.remove_stop_words = !s.no_stop_word_removal;
  config.foreground_only_smr = s.foreground_smr;
  if (!s.stop_words_file.empty()) {
    config.stop_words = semcomm::load_stop_words(s.stop_words_file);
  }
  return config;
}

struct ReceiveArgs {
  std::string payload;
  std::string output;
  std::size_t k = semcomm::kDefaultCandidateCount;
  std::uint64_t seed = 0;
  std::size_t jobs = 0;
  std::string negative_prompt = semcomm::kDefaultNegativePrompt;
  std::string audit_path;
  ScoringArgs scoring;
  BackendOptions backend;
};

int run_receive(const ReceiveArgs& args) {
  const auto payload = read_payload(args.payload);
  auto opts = args.backend;
  opts.background_label = payload.background_label.value;
  const auto backends = make_backends(opts);

  semcomm::ReceiverConfig config;
  config.candidate_count = args.k;
  config.generation_seed = args.seed;
  config.jobs = args.jobs;
  config.negative_prompt = args.negative_prompt;
  config.scoring = scoring_config(args.scoring);

  const auto result = semcomm::receive(payload, backends, config);
  semcomm::save_image(result.selected().image, args.output);

  if (!args.audit_path.empty()) {
    std::ofstream audit(args.audit_path, std::ios::trunc);
    if (!audit) throw semcomm::IoError("cannot write " + args.audit_path);
    for (const auto& c : result.candidates) {
      audit << json{{"candidate_index", c.candidate_index},
                    {"smr", c.smr},
                    {"text_similarity", c.text_similarity},
                    {"combined", c.combined},
                    {"smr_weight", config.scoring.smr_weight},
                    {"caption", c.candidate_caption.text()},
                    {"selected", c.candidate_index == result.selected_index}}
                   .dump()
            << "\n";
    }
    if (!audit) throw semcomm::IoError("cannot write " + args.audit_path);
  }
  std::cout << json{{"selected_index", result.selected_index},
                    {"smr", result.selected().smr},
                    {"text_similarity", result.selected().text_similarity},
                    {"combined", result.selected().combined}}
                   .dump()
            << "\n";
  return 0;
}

// -------------------------------------------------------------------- score

struct ScoreArgs {
  std::string payload;
  std::string candidate;
  ScoringArgs scoring;
  BackendOptions backend;
};

int run_score(const ScoreArgs& args) {
  const auto payload = read_payload(args.payload);
  const auto candidate = read_image(args.candidate);
  auto opts = args.backend;
  opts.background_label = payload.background_label.value;
  const auto backends = make_backends(opts);
  const auto config = scoring_config(args.scoring);

  const auto seg = backends.segmenter->segment(candidate);
  const auto caption = backends.captioner->caption(candidate);

  json out;
  out["smr"] = semcomm::smr(payload.segmentation, seg);
  try {
    out["smr_foreground"] = semcomm::smr_foreground(
        payload.segmentation, seg, payload.background_label);
  } catch (const semcomm::InvalidArgument&) {
    out["smr_foreground"] = nullptr;  // all-background reference
  }
  out["text_similarity"] =
      semcomm::text_similarity(payload.caption, caption, config);
  out["candidate_caption"] = caption.text();
  std::cout << out.dump() << "\n";
  return 0;
}

// -------------------------------------------------------------- bench-sizes

struct BenchArgs {
  std::string directory;
  bool recolor_bg = false;
  BackendOptions backend;
};

bool is_image_file(const fs::path& p) {
  try {
    semcomm::format_from_extension(p);
    return true;
  } catch (const semcomm::ImageFormatError&) {
    return false;
  }
}

int run_bench_sizes(const BenchArgs& args) {
  std::error_code ec;
  if (!fs::is_directory(args.directory, ec)) {
    throw semcomm::IoError("cannot read directory " + args.directory);
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(args.directory)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  const auto backends = make_backends(args.backend);
  const semcomm::TransmitterConfig config{
      args.recolor_bg,
      semcomm::Label{static_cast<std::uint8_t>(args.backend.background_label)}};

  std::ostringstream rows;
  std::vector<semcomm::SizeReport> reports;
  for (const auto& file : files) {
    std::optional<semcomm::SemanticPayload> payload;
    try {
      payload = semcomm::transmit(read_image(file), backends, config);
    } catch (const semcomm::ImageFormatError& e) {
      std::cerr << "warning: skipping " << file.string() << ": " << e.what()
                << "\n";
      continue;
    } catch (const semcomm::IoError& e) {
      std::cerr << "warning: skipping " << file.string() << ": " << e.what()
                << "\n";
      continue;
    }
    const auto r = semcomm::size_report(*payload);
    reports.push_back(r);
    rows << file.filename().string() << "," << payload->segmentation.width()
         << "," << payload->segmentation.height() << ","
         << r.uncompressed_image_bytes << "," << r.caption_bytes << ","
         << r.palette_bytes << "," << r.segmentation_rle_bytes << ","
         << r.total_payload_bytes << "\n";
  }
  if (reports.empty()) {
    throw semcomm::IoError("no readable images in " + args.directory);
  }

  auto mean = [&](auto field) {
    double sum = 0;
    for (const auto& r : reports) sum += static_cast<double>(r.*field);
    return sum / static_cast<double>(reports.size());
  };
  std::cout << "image,width,height,uncompressed_bytes,caption_bytes,"
               "palette_bytes,segmentation_rle_bytes,total_payload_bytes\n"
            << rows.str() << std::fixed << std::setprecision(2) << "mean,,,"
            << mean(&semcomm::SizeReport::uncompressed_image_bytes) << ","
            << mean(&semcomm::SizeReport::caption_bytes) << ","
            << mean(&semcomm::SizeReport::palette_bytes) << ","
            << mean(&semcomm::SizeReport::segmentation_rle_bytes) << ","
            << mean(&semcomm::SizeReport::total_payload_bytes) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantic image transmission: extract, render, receive and "
               "score semantic payloads"};
  app.require_subcommand(1);

  ExtractArgs extract;
  auto* extract_cmd =
      app.add_subcommand("extract", "Image -> SMC1 payload (prints sizes)");
  extract_cmd->add_option("image", extract.image, "Input PPM/PNG image")
      ->required();
  extract_cmd->add_option("output", extract.output, "Output SMC1 file")
      ->required();
  extract_cmd->add_flag("--recolor-bg", extract.recolor_bg,
                        "Send the background label as white");
  extract_cmd->add_option("--background-label", extract.backend.background_label,
                          "Background label")
      ->check(CLI::Range(0, 255))
      ->capture_default_str();
  add_backend_options(extract_cmd, extract.backend);

  RenderArgs render;
  auto* render_cmd = app.add_subcommand(
      "render", "SMC1 payload -> colored-segmented image");
  render_cmd->add_option("payload", render.payload, "Input SMC1 file")
      ->required();
  render_cmd->add_option("output", render.output,
                         "Output image (.ppm or .png)")
      ->required();

  ReceiveArgs receive;
  auto* receive_cmd = app.add_subcommand(
      "receive", "Generate K candidates from a payload and keep the best");
  receive_cmd->add_option("payload", receive.payload, "Input SMC1 file")
      ->required();
  receive_cmd->add_option("output", receive.output,
                          "Selected image (.ppm or .png)")
      ->required();
  receive_cmd->add_option("--k", receive.k, "Number of candidates")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  receive_cmd->add_option("--seed", receive.seed, "Generation seed")
      ->capture_default_str();
  receive_cmd->add_option("--jobs", receive.jobs,
                          "Worker threads (0 = all cores)")
      ->capture_default_str();
  receive_cmd->add_option("--negative-prompt", receive.negative_prompt,
                          "Negative prompt passed to the generator");
  receive_cmd->add_option("--audit-json", receive.audit_path,
                          "Write one JSON line per candidate");
  add_scoring_options(receive_cmd, receive.scoring);
  add_backend_options(receive_cmd, receive.backend);

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand(
      "score", "Score one candidate image against a payload");
  score_cmd->add_option("payload", score.payload, "Reference SMC1 file")
      ->required();
  score_cmd->add_option("candidate", score.candidate, "Candidate image")
      ->required();
  add_scoring_options(score_cmd, score.scoring);
  add_backend_options(score_cmd, score.backend);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand(
      "bench-sizes", "CSV of transmitted sizes for every image in a directory");
  bench_cmd->add_option("directory", bench.directory, "Image directory")
      ->required();
  bench_cmd->add_flag("--recolor-bg", bench.recolor_bg,
                      "Send the background label as white");
  add_backend_options(bench_cmd, bench.backend);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*extract_cmd) return run_extract(extract);
    if (*render_cmd) return run_render(render);
    if (*receive_cmd) return run_receive(receive);
    if (*score_cmd) return run_score(score);
    if (*bench_cmd) return run_bench_sizes(bench);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
