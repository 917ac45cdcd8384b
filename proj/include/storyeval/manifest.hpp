// Copyright 2026 The storyeval Authors.
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

#ifndef STORYEVAL_MANIFEST_HPP_
#define STORYEVAL_MANIFEST_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "storyeval/features.hpp"
#include "storyeval/story.hpp"

namespace storyeval {

enum class Split { kTrain, kVal, kTest };

std::string_view ToString(Split split);
Split ParseSplit(std::string_view text);

// Sample counts of the full VIST release once unavailable images are removed.
std::size_t VistSplitSize(Split split);

struct ManifestItem {
  ImageSequence sequence;
  Story human;
  std::map<std::string, Story> systems;
};

struct Manifest {
  std::string dataset;
  Split split = Split::kTest;
  std::vector<ManifestItem> items;
  // Non-fatal findings from loading, e.g. dropped items.
  std::vector<std::string> warnings;
};

// Parses and validates a manifest JSON-lines file. Items that reference an
// unavailable image are dropped with a warning. Throws Error(kParseError),
// Error(kSchemaVersionMismatch), or Error(kSchemaViolation) for structural
// problems such as a missing human story.
Manifest LoadManifest(const std::filesystem::path& path);
Manifest ParseManifest(const std::vector<nlohmann::json>& lines, const std::string& origin);
void SaveManifest(const std::filesystem::path& path, const Manifest& manifest);

// Sorted union of system names across items.
std::vector<std::string> SystemNames(const Manifest& manifest);

// Bundles keyed by story id, merged from one or more files sharing a dimension.
class BundleIndex {
 public:
  void Add(FeatureBundle bundle);
  void AddFile(const std::filesystem::path& path);
  const FeatureBundle* Find(const std::string& story_id) const;
  std::size_t size() const { return bundles_.size(); }
  const BundleMetadata& metadata() const { return metadata_; }
  void set_metadata(BundleMetadata m) { metadata_ = std::move(m); }

 private:
  BundleMetadata metadata_;
  bool has_file_ = false;
  std::map<std::string, FeatureBundle> bundles_;
};

}  // namespace storyeval

#endif  // STORYEVAL_MANIFEST_HPP_
