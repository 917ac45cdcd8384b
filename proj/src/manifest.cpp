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

#include "storyeval/manifest.hpp"

#include <set>

#include "storyeval/errors.hpp"
#include "storyeval/json_io.hpp"

namespace storyeval {
namespace {

Story ReadItemStory(const Json& j, const ImageSequence& sequence, const Author& author,
                    const std::string& where) {
  Json copy = j;
  if (!copy.contains("sequence_id")) copy["sequence_id"] = sequence.sequence_id;
  if (!copy.contains("author")) copy["author"] = author.ToString();
  if (!copy.contains("story_id")) copy["story_id"] = sequence.sequence_id + "/" + author.ToString();
  Story story = StoryFromJson(copy);
  if (story.sequence_id != sequence.sequence_id) {
    throw Error(ErrorCode::kSchemaViolation,
                where + ": story '" + story.story_id + "' belongs to sequence '" +
                    story.sequence_id + "'");
  }
  if (!(story.author == author)) {
    throw Error(ErrorCode::kSchemaViolation,
                where + ": story '" + story.story_id + "' has author '" +
                    story.author.ToString() + "', expected '" + author.ToString() + "'");
  }
  for (const auto& problem : CheckStory(story)) {
    throw Error(ErrorCode::kSchemaViolation, where + ": " + problem);
  }
  return story;
}

void CheckImageCount(const std::string& dataset, const ImageSequence& s, const std::string& where) {
  const std::size_t n = s.images.size();
  bool ok = n > 0;
  if (dataset == "vist") ok = n == 5;
  if (dataset == "vwp") ok = n >= 5 && n <= 10;
  if (!ok) {
    throw Error(ErrorCode::kSchemaViolation, where + ": " + std::to_string(n) +
                                                 " images is not valid for dataset '" +
                                                 dataset + "'");
  }
}

}  // namespace

std::string_view ToString(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "";
}

Split ParseSplit(std::string_view text) {
  if (text == "train") return Split::kTrain;
  if (text == "val") return Split::kVal;
  if (text == "test") return Split::kTest;
  throw Error(ErrorCode::kSchemaViolation, "unknown split '" + std::string(text) + "'");
}

std::size_t VistSplitSize(Split split) {
  switch (split) {
    case Split::kTrain: return 40071;
    case Split::kVal: return 4988;
    case Split::kTest: return 5050;
  }
  return 0;
}

Manifest ParseManifest(const std::vector<Json>& lines, const std::string& origin) {
  if (lines.empty()) throw Error(ErrorCode::kSchemaVersionMismatch, origin + " is empty");
  CheckSchema(lines.front(), kManifestSchema);
  Manifest m;
  try {
    m.dataset = lines.front().at("dataset").get<std::string>();
    m.split = ParseSplit(lines.front().at("split").get<std::string>());
  } catch (const std::exception& e) {
    RethrowAsParseError(e, origin + " header");
  }

  std::set<std::string> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Json& j = lines[i];
    const std::string where = origin + " item " + std::to_string(i);
    if (!j.is_object() || !j.contains("sequence")) {
      throw Error(ErrorCode::kSchemaViolation, where + ": missing image sequence");
    }
    ManifestItem item;
    item.sequence = SequenceFromJson(j["sequence"]);
    if (!seen.insert(item.sequence.sequence_id).second) {
      throw Error(ErrorCode::kSchemaViolation,
                  where + ": duplicate sequence '" + item.sequence.sequence_id + "'");
    }
    CheckImageCount(m.dataset, item.sequence, where);
    for (const auto& problem : CheckSequence(item.sequence)) {
      throw Error(ErrorCode::kSchemaViolation, where + ": " + problem);
    }
    if (!j.contains("human") || !j["human"].is_object()) {
      throw Error(ErrorCode::kSchemaViolation, where + ": item has no human story");
    }
    item.human = ReadItemStory(j["human"], item.sequence, Author::Human(), where);
    if (j.contains("systems")) {
      for (const auto& [name, story] : j["systems"].items()) {
        item.systems.emplace(name, ReadItemStory(story, item.sequence, Author::System(name), where));
      }
    }
    std::string missing;
    for (const auto& image : item.sequence.images) {
      if (!image.available || image.uri.empty()) missing = image.image_id;
    }
    if (!missing.empty()) {
      m.warnings.push_back("excluding sequence '" + item.sequence.sequence_id +
                           "': image '" + missing + "' is unavailable");
      continue;
    }
    m.items.push_back(std::move(item));
  }
  if (m.dataset == "vist" && m.items.size() > VistSplitSize(m.split)) {
    m.warnings.push_back("manifest has more items than the VIST " +
                         std::string(ToString(m.split)) + " split");
  }
  return m;
}

Manifest LoadManifest(const std::filesystem::path& path) {
  return ParseManifest(ReadJsonLines(path), path.string());
}

void SaveManifest(const std::filesystem::path& path, const Manifest& manifest) {
  std::vector<Json> lines{{{"schema", kManifestSchema},
                           {"dataset", manifest.dataset},
                           {"split", ToString(manifest.split)}}};
  for (const auto& item : manifest.items) {
    Json systems = Json::object();
    for (const auto& [name, story] : item.systems) systems[name] = ToJson(story);
    lines.push_back(
        {{"sequence", ToJson(item.sequence)}, {"human", ToJson(item.human)}, {"systems", systems}});
  }
  WriteJsonLines(path, lines);
}

std::vector<std::string> SystemNames(const Manifest& manifest) {
  std::set<std::string> names;
  for (const auto& item : manifest.items) {
    for (const auto& [name, story] : item.systems) names.insert(name);
  }
  return {names.begin(), names.end()};
}

void BundleIndex::Add(FeatureBundle bundle) {
  if (bundles_.count(bundle.story_id) != 0) {
    throw Error(ErrorCode::kSchemaViolation, "duplicate bundle for story '" + bundle.story_id + "'");
  }
  std::string id = bundle.story_id;
  bundles_.emplace(std::move(id), std::move(bundle));
}

void BundleIndex::AddFile(const std::filesystem::path& path) {
  BundleFile file = LoadBundles(path);
  if (has_file_ && file.metadata.embedding_dim != metadata_.embedding_dim) {
    throw Error(ErrorCode::kSchemaViolation, path.string() + " has embedding dimension " +
                                                 std::to_string(file.metadata.embedding_dim) +
                                                 ", expected " +
                                                 std::to_string(metadata_.embedding_dim));
  }
  if (!has_file_) metadata_ = file.metadata;
  has_file_ = true;
  for (auto& b : file.bundles) Add(std::move(b));
}

const FeatureBundle* BundleIndex::Find(const std::string& story_id) const {
  auto it = bundles_.find(story_id);
  return it == bundles_.end() ? nullptr : &it->second;
}

}  // namespace storyeval
