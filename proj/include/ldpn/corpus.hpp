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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ldpn {

// Bundled example models (*.ldpn.json), formula files (*.ltl) and scheduler
// traces (*.trace), compiled into the library.
struct CorpusFile {
  std::string_view name;
  std::string_view text;
};

const std::vector<CorpusFile>& corpus_files();
std::optional<std::string_view> corpus_file(std::string_view name);

}  // namespace ldpn
