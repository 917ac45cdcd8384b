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

#include "storyeval/json_io.hpp"

#include <algorithm>

#include <fstream>
#include <sstream>

#include "storyeval/errors.hpp"

namespace storyeval {
namespace fs = std::filesystem;

void CheckSchema(const Json& header, std::string_view expected) {
  if (!header.is_object() || !header.contains("schema") || !header["schema"].is_string()) {
    throw Error(ErrorCode::kSchemaVersionMismatch,
                "missing schema header, expected '" + std::string(expected) + "'");
  }
  const auto found = header["schema"].get<std::string>();
  if (found != expected) {
    throw Error(ErrorCode::kSchemaVersionMismatch,
                "schema '" + found + "' does not match '" + std::string(expected) + "'");
  }
}

void RethrowAsParseError(const std::exception& e, const std::string& what) {
  if (auto* err = dynamic_cast<const Error*>(&e)) throw *err;
  throw Error(ErrorCode::kParseError, what + ": " + e.what());
}

std::vector<Json> ReadJsonLines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::vector<Json> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(Json::parse(line));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kParseError,
                  path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void WriteJsonLines(const fs::path& path, const std::vector<Json>& lines) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  for (const auto& j : lines) out << j.dump() << '\n';
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

Json ToJson(const ImageSequence& sequence) {
  Json images = Json::array();
  for (const auto& im : sequence.images) {
    Json boxes = Json::array();
    for (const auto& b : im.boxes) boxes.push_back({{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}});
    Json j = {{"image_id", im.image_id}, {"uri", im.uri}, {"boxes", boxes}};
    if (im.width > 0) j["width"] = im.width;
    if (im.height > 0) j["height"] = im.height;
    if (!im.available) j["available"] = false;
    images.push_back(std::move(j));
  }
  return {{"sequence_id", sequence.sequence_id}, {"images", images}};
}

ImageSequence SequenceFromJson(const Json& j) {
  try {
    ImageSequence s;
    s.sequence_id = j.at("sequence_id").get<std::string>();
    for (const auto& im : j.at("images")) {
      ImageRef r;
      r.image_id = im.at("image_id").get<std::string>();
      r.uri = im.value("uri", "");
      r.width = im.value("width", 0);
      r.height = im.value("height", 0);
      r.available = im.value("available", true);
      for (const auto& b : im.value("boxes", Json::array())) {
        r.boxes.push_back({b.at("x").get<double>(), b.at("y").get<double>(),
                           b.at("w").get<double>(), b.at("h").get<double>()});
      }
      s.images.push_back(std::move(r));
    }
    return s;
  } catch (const std::exception& e) {
    RethrowAsParseError(e, "image sequence");
  }
}

Json ToJson(const Story& story) {
  Json sentences = Json::array();
  for (const auto& s : story.sentences) {
    Json nps = Json::array();
    for (const auto& np : s.nps) nps.push_back({{"begin", np.begin}, {"end", np.end}, {"text", np.text}});
    sentences.push_back({{"text", s.text},
                         {"begin", s.begin},
                         {"end", s.end},
                         {"tokens", s.tokens},
                         {"nps", nps}});
  }
  return {{"story_id", story.story_id},
          {"sequence_id", story.sequence_id},
          {"author", story.author.ToString()},
          {"text", story.text},
          {"sentences", sentences}};
}

Story StoryFromJson(const Json& j) {
  try {
    Story story;
    story.story_id = j.at("story_id").get<std::string>();
    story.sequence_id = j.value("sequence_id", "");
    story.author = Author::Parse(j.value("author", "human"));
    story.text = j.at("text").get<std::string>();
    if (!j.contains("sentences")) {
      story.sentences = SplitSentences(story.text);
      for (const auto& np : j.value("nps", Json::array())) {
        NPSpan span{np.at("begin").get<std::size_t>(), np.at("end").get<std::size_t>(),
                    np.value("text", "")};
        auto it = std::find_if(story.sentences.begin(), story.sentences.end(),
                               [&](const Sentence& s) {
                                 return s.begin <= span.begin && span.end <= s.end &&
                                        span.begin < span.end;
                               });
        if (it == story.sentences.end()) {
          throw Error(ErrorCode::kSchemaViolation,
                      "story '" + story.story_id + "': NP [" + std::to_string(span.begin) + ", " +
                          std::to_string(span.end) + ") is not inside one sentence");
        }
        if (span.text.empty()) span.text = story.text.substr(span.begin, span.end - span.begin);
        it->nps.push_back(std::move(span));
      }
      return story;
    }
    for (const auto& js : j.at("sentences")) {
      Sentence s;
      s.text = js.at("text").get<std::string>();
      s.begin = js.at("begin").get<std::size_t>();
      s.end = js.at("end").get<std::size_t>();
      s.tokens = js.contains("tokens") ? js["tokens"].get<std::vector<std::string>>()
                                       : Tokenize(s.text);
      for (const auto& np : js.value("nps", Json::array())) {
        NPSpan span{np.at("begin").get<std::size_t>(), np.at("end").get<std::size_t>(),
                    np.value("text", "")};
        if (span.text.empty() && span.end <= story.text.size() && span.begin < span.end) {
          span.text = story.text.substr(span.begin, span.end - span.begin);
        }
        s.nps.push_back(std::move(span));
      }
      story.sentences.push_back(std::move(s));
    }
    return story;
  } catch (const std::exception& e) {
    RethrowAsParseError(e, "story");
  }
}

Json ToJson(const BundleMetadata& m) {
  return {{"schema", kBundleSchema},
          {"embedding_dim", m.embedding_dim},
          {"extractor_version", m.extractor_version},
          {"concreteness_lexicon_version", m.concreteness_lexicon_version}};
}

BundleMetadata BundleMetadataFromJson(const Json& j) {
  CheckSchema(j, kBundleSchema);
  try {
    BundleMetadata m;
    m.embedding_dim = j.at("embedding_dim").get<std::size_t>();
    m.extractor_version = j.value("extractor_version", "");
    m.concreteness_lexicon_version = j.value("concreteness_lexicon_version", "");
    return m;
  } catch (const std::exception& e) {
    RethrowAsParseError(e, "bundle metadata");
  }
}

Json ToJson(const FeatureBundle& b) {
  Json nps = Json::array();
  for (const auto& f : b.np_features) {
    nps.push_back({{"np_index", f.np_index},
                   {"embedding", f.embedding},
                   {"concreteness_weight", f.concreteness_weight}});
  }
  Json boxes = Json::array();
  for (const auto& f : b.box_features) {
    boxes.push_back({{"image_id", f.image_id}, {"box_index", f.box_index}, {"embedding", f.embedding}});
  }
  return {{"story_id", b.story_id},
          {"np_features", nps},
          {"box_features", boxes},
          {"follow_probs", b.follow_probs}};
}

FeatureBundle BundleFromJson(const Json& j, std::size_t embedding_dim) {
  try {
    FeatureBundle b;
    b.story_id = j.at("story_id").get<std::string>();
    b.embedding_dim = embedding_dim;
    for (const auto& f : j.value("np_features", Json::array())) {
      b.np_features.push_back({f.at("np_index").get<std::size_t>(),
                               f.at("embedding").get<std::vector<double>>(),
                               f.value("concreteness_weight", 0.5)});
    }
    for (const auto& f : j.value("box_features", Json::array())) {
      b.box_features.push_back({f.at("image_id").get<std::string>(),
                                f.at("box_index").get<std::size_t>(),
                                f.at("embedding").get<std::vector<double>>()});
    }
    b.follow_probs = j.value("follow_probs", std::vector<double>{});
    return b;
  } catch (const std::exception& e) {
    RethrowAsParseError(e, "feature bundle");
  }
}

Json ToJson(const Judgment& j) {
  return {{"annotator_id", j.annotator_id},
          {"sequence_id", j.sequence_id},
          {"system", j.system},
          {"option", ToString(j.option)},
          {"presentation_order", ToString(j.presentation_order)},
          {"timestamp", j.timestamp}};
}

Judgment JudgmentFromJson(const Json& j) {
  try {
    Judgment out;
    out.annotator_id = j.at("annotator_id").get<std::string>();
    out.sequence_id = j.at("sequence_id").get<std::string>();
    out.system = j.at("system").get<std::string>();
    out.option = ParseJudgmentOption(j.at("option").get<std::string>());
    out.presentation_order = ParsePresentationOrder(j.at("presentation_order").get<std::string>());
    out.timestamp = j.value("timestamp", "");
    return out;
  } catch (const std::exception& e) {
    RethrowAsParseError(e, "judgment");
  }
}

Json ToJson(const CorpusThreshold& t) {
  return {{"threshold_id", t.threshold_id},
          {"tau", t.tau},
          {"np_count", t.np_count},
          {"source", t.source}};
}

CorpusThreshold ThresholdFromJson(const Json& j) {
  try {
    return {j.at("threshold_id").get<std::string>(), j.at("tau").get<double>(),
            j.at("np_count").get<std::size_t>(), j.value("source", "")};
  } catch (const std::exception& e) {
    RethrowAsParseError(e, "threshold");
  }
}

std::vector<Story> LoadStories(const fs::path& path) {
  auto lines = ReadJsonLines(path);
  if (lines.empty()) throw Error(ErrorCode::kSchemaVersionMismatch, path.string() + " is empty");
  CheckSchema(lines.front(), kStoriesSchema);
  std::vector<Story> stories;
  for (std::size_t i = 1; i < lines.size(); ++i) stories.push_back(StoryFromJson(lines[i]));
  return stories;
}

void SaveStories(const fs::path& path, const std::vector<Story>& stories) {
  std::vector<Json> lines{{{"schema", kStoriesSchema}}};
  for (const auto& s : stories) lines.push_back(ToJson(s));
  WriteJsonLines(path, lines);
}

BundleFile LoadBundles(const fs::path& path) {
  auto lines = ReadJsonLines(path);
  if (lines.empty()) throw Error(ErrorCode::kSchemaVersionMismatch, path.string() + " is empty");
  BundleFile file;
  file.metadata = BundleMetadataFromJson(lines.front());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    file.bundles.push_back(BundleFromJson(lines[i], file.metadata.embedding_dim));
  }
  return file;
}

void SaveBundles(const fs::path& path, const BundleFile& file) {
  std::vector<Json> lines{ToJson(file.metadata)};
  for (const auto& b : file.bundles) lines.push_back(ToJson(b));
  WriteJsonLines(path, lines);
}

}  // namespace storyeval
