// Copyright 2026 The ldpn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ldpn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (LTL, JSON, formula files).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)),
        position_(position) {}
  explicit ParseError(const std::string& message)
      : Error(message), position_(std::string::npos) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Well-formed input that violates a structural requirement of the model.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A configured cap (state count, bound, annotation size) was exceeded.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

}  // namespace ldpn
