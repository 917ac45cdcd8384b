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

#ifndef STORYEVAL_SERVICE_HPP_
#define STORYEVAL_SERVICE_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "storyeval/judgments.hpp"
#include "storyeval/manifest.hpp"

namespace httplib {
class Server;
}

namespace storyeval {

struct SampleItem {
  std::string system;
  std::string sequence_id;

  bool operator==(const SampleItem&) const = default;
};

inline constexpr std::string_view kSampleSchema = "storyeval.sample/1";

struct SampleFile {
  std::uint64_t seed = 0;
  std::size_t bins = 0;
  std::vector<SampleItem> items;
};

nlohmann::json ToJson(const SampleFile& sample);
SampleFile SampleFromJson(const nlohmann::json& j);
SampleFile LoadSample(const std::filesystem::path& path);

// Opaque task id; reveals neither system nor sequence to the client.
std::string TaskId(std::string_view system, std::string_view sequence_id);

// One blinded comparison. `order` never leaves the server.
struct Task {
  std::string task_id;
  std::string sequence_id;
  std::string system;
  std::vector<std::string> image_uris;
  std::string human_text;
  std::string model_text;
  PresentationOrder order = PresentationOrder::kHumanFirst;
};

// Presentation order is a deterministic coin flip per item from the seed.
// Throws Error(kSchemaViolation) when a sample item is not in the manifest.
std::vector<Task> BuildTasks(const Manifest& manifest, std::span<const SampleItem> sample,
                             std::uint64_t seed);

// What the client sees: no authorship, no presentation order.
struct TaskView {
  std::string task_id;
  std::size_t index = 0;  // 1-based position in the annotator's queue
  std::size_t total = 0;
  std::vector<std::string> image_uris;
  std::string story_a;
  std::string story_b;
};

nlohmann::json ToJson(const TaskView& view);

// Append-only JSON-lines journal. Each record is written with one write(2)
// on an O_APPEND descriptor and fsync'd; appends are serialized in-process.
class JudgmentJournal {
 public:
  explicit JudgmentJournal(std::filesystem::path path);

  void Append(const Judgment& judgment);
  const std::filesystem::path& path() const { return path_; }

  // Empty when the file does not exist. Throws Error(kUnknownOption) for an
  // unrecognised option and Error(kParseError) for malformed lines.
  static std::vector<Judgment> Read(const std::filesystem::path& path);

 private:
  std::filesystem::path path_;
  std::mutex mu_;
};

struct Progress {
  std::size_t total_tasks = 0;
  std::size_t judgments = 0;
  std::map<std::string, std::size_t> done_per_annotator;
};

std::string DefaultInstructions();

class JudgmentService {
 public:
  using Clock = std::function<std::string()>;

  // Replays an existing journal so restarts resume where annotators left off.
  JudgmentService(std::vector<Task> tasks, std::vector<std::string> annotators,
                  std::filesystem::path journal_path,
                  std::string instructions = DefaultInstructions(), Clock clock = {});

  // Throws Error(kUnknownAnnotator) or Error(kExhaustedTasks).
  TaskView NextTask(const std::string& annotator) const;

  // Throws Error(kUnknownAnnotator), Error(kUnknownTask),
  // Error(kUnknownOption), or Error(kDuplicateJudgment).
  Judgment Submit(const std::string& annotator, const std::string& task_id,
                  std::string_view option);

  Progress GetProgress() const;
  nlohmann::json InstructionsJson() const;
  std::size_t task_count() const { return tasks_.size(); }

 private:
  TaskView ViewOf(std::size_t index) const;

  std::vector<Task> tasks_;
  std::map<std::string, std::size_t> task_index_;
  std::set<std::string> annotators_;
  std::string instructions_;
  Clock clock_;
  JudgmentJournal journal_;

  std::mutex writer_mu_;  // one submission at a time
  mutable std::shared_mutex mu_;  // guards done_ and judgment_count_
  std::map<std::string, std::set<std::size_t>> done_;
  std::size_t judgment_count_ = 0;
};

// Registers the /api endpoints on `server`. `service` must outlive it.
void BindRoutes(httplib::Server& server, JudgmentService& service);

}  // namespace storyeval

#endif  // STORYEVAL_SERVICE_HPP_
