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

#include <stdexcept>
#include <string>
#include <utility>

namespace semcomm {

// Base class for every failure raised by the library. Messages are stable
// and are part of the CLI contract (they are printed verbatim on exit 1).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value violates a type invariant at construction time.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Two inputs that must share width and height do not.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Malformed or unsupported image bytes (PPM/PNG).
class ImageFormatError : public Error {
 public:
  using Error::Error;
};

// Reading or writing a file/sink failed.
class IoError : public Error {
 public:
  using Error::Error;
};

// SMC1 or RLE bytes are inconsistent.
class CodecError : public Error {
 public:
  using Error::Error;
};

// A model backend failed or broke its contract. `stage()` names the
// pipeline stage ("captioner", "segmenter", ...).
class BackendError : public Error {
 public:
  BackendError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace semcomm
