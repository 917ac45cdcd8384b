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

#ifndef STORYEVAL_JSON_IO_HPP_
#define STORYEVAL_JSON_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "storyeval/features.hpp"
#include "storyeval/grounding.hpp"
#include "storyeval/judgments.hpp"
#include "storyeval/story.hpp"

namespace storyeval {

using Json = nlohmann::json;

// Schema identifiers carried in the first line of every JSON-lines file.
inline constexpr std::string_view kStoriesSchema = "storyeval.stories/1";
inline constexpr std::string_view kBundleSchema = "storyeval.bundle/1";
inline constexpr std::string_view kManifestSchema = "storyeval.manifest/1";
inline constexpr std::string_view kJudgmentSchema = "storyeval.judgments/1";
inline constexpr std::string_view kThresholdSchema = "storyeval.threshold/1";

// Throws Error(kSchemaVersionMismatch) unless header["schema"] == expected.
void CheckSchema(const Json& header, std::string_view expected);

// One JSON value per non-blank line. Throws Error(kParseError) naming the
// file and line, Error(kIoError) when the file cannot be read.
std::vector<Json> ReadJsonLines(const std::filesystem::path& path);
void WriteJsonLines(const std::filesystem::path& path, const std::vector<Json>& lines);

Json ToJson(const ImageSequence& sequence);
ImageSequence SequenceFromJson(const Json& j);

Json ToJson(const Story& story);
// Sentences and tokens are derived from text when absent.
Story StoryFromJson(const Json& j);

Json ToJson(const BundleMetadata& metadata);
BundleMetadata BundleMetadataFromJson(const Json& j);
Json ToJson(const FeatureBundle& bundle);
FeatureBundle BundleFromJson(const Json& j, std::size_t embedding_dim);

Json ToJson(const Judgment& judgment);
Judgment JudgmentFromJson(const Json& j);

Json ToJson(const CorpusThreshold& threshold);
CorpusThreshold ThresholdFromJson(const Json& j);

struct BundleFile {
  BundleMetadata metadata;
  std::vector<FeatureBundle> bundles;
};

std::vector<Story> LoadStories(const std::filesystem::path& path);
void SaveStories(const std::filesystem::path& path, const std::vector<Story>& stories);
BundleFile LoadBundles(const std::filesystem::path& path);
void SaveBundles(const std::filesystem::path& path, const BundleFile& file);

// Wraps a nlohmann exception raised while decoding `what`.
[[noreturn]] void RethrowAsParseError(const std::exception& e, const std::string& what);

}  // namespace storyeval

#endif  // STORYEVAL_JSON_IO_HPP_
