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

#include "storyeval/service.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <httplib.h>

#include "storyeval/errors.hpp"
#include "storyeval/json_io.hpp"
#include "storyeval/util.hpp"

namespace storyeval {
namespace fs = std::filesystem;

namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void WriteAll(int fd, const std::string& data, const fs::path& path) {
  std::size_t off = 0;
  while (off < data.size()) {
    ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      throw Error(ErrorCode::kIoError, "append to " + path.string() + " failed: " +
                                           std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
}

int HttpStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownAnnotator: return 403;
    case ErrorCode::kUnknownTask: return 404;
    case ErrorCode::kDuplicateJudgment: return 409;
    case ErrorCode::kExhaustedTasks: return 410;
    case ErrorCode::kUnknownOption:
    case ErrorCode::kParseError: return 400;
    default: return 500;
  }
}

void Reply(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_header("Access-Control-Allow-Origin", "*");
  res.set_content(body.dump(), "application/json");
}

void ReplyError(httplib::Response& res, const Error& e) {
  nlohmann::json body = {{"error", ErrorCodeName(e.code())}, {"message", e.what()}};
  if (e.code() == ErrorCode::kExhaustedTasks) body["done"] = true;
  Reply(res, HttpStatus(e.code()), body);
}

}  // namespace

nlohmann::json ToJson(const SampleFile& sample) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& it : sample.items) items.push_back({{"system", it.system}, {"sequence_id", it.sequence_id}});
  return {{"schema", kSampleSchema}, {"seed", sample.seed}, {"bins", sample.bins}, {"items", items}};
}

SampleFile SampleFromJson(const nlohmann::json& j) {
  CheckSchema(j, kSampleSchema);
  try {
    SampleFile s;
    s.seed = j.value("seed", std::uint64_t{0});
    s.bins = j.value("bins", std::size_t{0});
    for (const auto& it : j.at("items")) {
      s.items.push_back({it.at("system").get<std::string>(), it.at("sequence_id").get<std::string>()});
    }
    return s;
  } catch (const std::exception& e) {
    RethrowAsParseError(e, "sample");
  }
}

SampleFile LoadSample(const fs::path& path) {
  try {
    return SampleFromJson(nlohmann::json::parse(ReadTextFile(path)));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

std::vector<Task> BuildTasks(const Manifest& manifest, std::span<const SampleItem> sample,
                             std::uint64_t seed) {
  std::map<std::string, const ManifestItem*> by_id;
  for (const auto& item : manifest.items) by_id[item.sequence.sequence_id] = &item;
  std::vector<Task> tasks;
  std::set<std::string> ids;
  for (const auto& s : sample) {
    auto it = by_id.find(s.sequence_id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kSchemaViolation,
                  "sampled sequence '" + s.sequence_id + "' is not in the manifest");
    }
    const ManifestItem& item = *it->second;
    Task t;
    t.task_id = TaskId(s.system, s.sequence_id);
    if (!ids.insert(t.task_id).second) {
      throw Error(ErrorCode::kSchemaViolation, "task '" + t.task_id + "' sampled twice");
    }
    t.sequence_id = s.sequence_id;
    t.system = s.system;
    for (const auto& im : item.sequence.images) t.image_uris.push_back(im.uri);
    t.human_text = item.human.text;
    auto sys = item.systems.find(s.system);
    if (sys == item.systems.end()) {
      throw Error(ErrorCode::kSchemaViolation,
                  "system '" + s.system + "' has no story for '" + s.sequence_id + "'");
    }
    t.model_text = sys->second.text;
    t.order = (SplitMix64(seed ^ Fnv1a64(s.system + ":" + s.sequence_id)) & 1) ? PresentationOrder::kModelFirst
                                                         : PresentationOrder::kHumanFirst;
    tasks.push_back(std::move(t));
  }
  return tasks;
}

std::string TaskId(std::string_view system, std::string_view sequence_id) {
  std::string key(system);
  key += '\0';
  key += sequence_id;
  return "t" + Hex64(Fnv1a64(key)).substr(0, 16);
}

nlohmann::json ToJson(const TaskView& v) {
  return {{"task_id", v.task_id},
          {"index", v.index},
          {"total", v.total},
          {"image_uris", v.image_uris},
          {"story_a", v.story_a},
          {"story_b", v.story_b},
          {"options", {"first_better", "second_better", "both_fine", "both_bad"}}};
}

JudgmentJournal::JudgmentJournal(fs::path path) : path_(std::move(path)) {}

void JudgmentJournal::Append(const Judgment& judgment) {
  std::lock_guard lock(mu_);
  const int fd = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
  if (fd < 0) {
    throw Error(ErrorCode::kIoError, "cannot open " + path_.string() + ": " + std::strerror(errno));
  }
  try {
    std::string data;
    if (::lseek(fd, 0, SEEK_END) == 0) {
      data = nlohmann::json{{"schema", kJudgmentSchema}}.dump() + "\n";
    }
    data += ToJson(judgment).dump() + "\n";
    WriteAll(fd, data, path_);
    ::fsync(fd);
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
}

std::vector<Judgment> JudgmentJournal::Read(const fs::path& path) {
  if (!fs::exists(path)) return {};
  const auto lines = ReadJsonLines(path);
  std::vector<Judgment> out;
  if (lines.empty()) return out;
  CheckSchema(lines.front(), kJudgmentSchema);
  for (std::size_t i = 1; i < lines.size(); ++i) out.push_back(JudgmentFromJson(lines[i]));
  return out;
}

std::string DefaultInstructions() {
  return "Each task shows a sequence of images followed by two stories, A and B, written "
         "for that sequence. Read the images in order and then both stories. Pick the option "
         "that best describes how the stories compare as stories about these images: A is "
         "better, B is better, both are fine (similar quality and acceptable), or both are bad "
         "(similar quality and unacceptable). Judge the story as a whole, not single words. "
         "There are no right answers; give your own impression. Keyboard shortcuts 1-4 select "
         "the options.";
}

JudgmentService::JudgmentService(std::vector<Task> tasks, std::vector<std::string> annotators,
                                 fs::path journal_path, std::string instructions, Clock clock)
    : tasks_(std::move(tasks)),
      annotators_(annotators.begin(), annotators.end()),
      instructions_(std::move(instructions)),
      clock_(clock ? std::move(clock) : Clock(UtcTimestamp)),
      journal_(std::move(journal_path)) {
  for (std::size_t i = 0; i < tasks_.size(); ++i) task_index_[tasks_[i].task_id] = i;
  for (const auto& j : JudgmentJournal::Read(journal_.path())) {
    auto it = task_index_.find(TaskId(j.system, j.sequence_id));
    if (it == task_index_.end()) continue;
    done_[j.annotator_id].insert(it->second);
    ++judgment_count_;
  }
}

TaskView JudgmentService::ViewOf(std::size_t index) const {
  const Task& t = tasks_[index];
  TaskView v;
  v.task_id = t.task_id;
  v.index = index + 1;
  v.total = tasks_.size();
  v.image_uris = t.image_uris;
  const bool human_first = t.order == PresentationOrder::kHumanFirst;
  v.story_a = human_first ? t.human_text : t.model_text;
  v.story_b = human_first ? t.model_text : t.human_text;
  return v;
}

TaskView JudgmentService::NextTask(const std::string& annotator) const {
  if (annotators_.count(annotator) == 0) {
    throw Error(ErrorCode::kUnknownAnnotator, "unknown annotator '" + annotator + "'");
  }
  std::shared_lock lock(mu_);
  auto done = done_.find(annotator);
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    if (done == done_.end() || done->second.count(i) == 0) return ViewOf(i);
  }
  throw Error(ErrorCode::kExhaustedTasks, "annotator '" + annotator + "' has judged every task");
}

Judgment JudgmentService::Submit(const std::string& annotator, const std::string& task_id,
                                 std::string_view option) {
  if (annotators_.count(annotator) == 0) {
    throw Error(ErrorCode::kUnknownAnnotator, "unknown annotator '" + annotator + "'");
  }
  auto it = task_index_.find(task_id);
  if (it == task_index_.end()) throw Error(ErrorCode::kUnknownTask, "unknown task '" + task_id + "'");
  const JudgmentOption parsed = ParseJudgmentOption(option);
  const Task& task = tasks_[it->second];

  std::lock_guard writer(writer_mu_);
  {
    std::shared_lock read(mu_);
    auto done = done_.find(annotator);
    if (done != done_.end() && done->second.count(it->second) != 0) {
      throw Error(ErrorCode::kDuplicateJudgment,
                  "annotator '" + annotator + "' already judged '" + task_id + "'");
    }
  }
  Judgment j{annotator, task.sequence_id, task.system, parsed, task.order, clock_()};
  journal_.Append(j);
  std::unique_lock update(mu_);
  done_[annotator].insert(it->second);
  ++judgment_count_;
  return j;
}

Progress JudgmentService::GetProgress() const {
  std::shared_lock lock(mu_);
  Progress p;
  p.total_tasks = tasks_.size();
  p.judgments = judgment_count_;
  for (const auto& a : annotators_) {
    auto it = done_.find(a);
    p.done_per_annotator[a] = it == done_.end() ? 0 : it->second.size();
  }
  return p;
}

nlohmann::json JudgmentService::InstructionsJson() const {
  return {{"text", instructions_},
          {"options",
           {{{"id", "first_better"}, {"label", "Story A is better"},
             {"example", "A follows the images and reads as one story; B lists unrelated events."}},
            {{"id", "second_better"}, {"label", "Story B is better"},
             {"example", "B describes what happens across the images; A repeats one sentence."}},
            {{"id", "both_fine"}, {"label", "Both are similarly fine"},
             {"example", "Both tell a plausible story about the images with minor flaws."}},
            {{"id", "both_bad"}, {"label", "Both are similarly bad"},
             {"example", "Neither story matches the images or makes sense as a story."}}}}};
}

void BindRoutes(httplib::Server& server, JudgmentService& service) {
  server.Get("/api/tasks/next", [&service](const httplib::Request& req, httplib::Response& res) {
    try {
      Reply(res, 200, ToJson(service.NextTask(req.get_param_value("annotator"))));
    } catch (const Error& e) {
      ReplyError(res, e);
    }
  });
  server.Post("/api/judgments", [&service](const httplib::Request& req, httplib::Response& res) {
    try {
      nlohmann::json body;
      try {
        body = nlohmann::json::parse(req.body);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kParseError, e.what());
      }
      if (!body.is_object() || !body.contains("annotator") || !body.contains("task_id") ||
          !body.contains("option")) {
        throw Error(ErrorCode::kParseError, "expected {annotator, task_id, option}");
      }
      const Judgment j = service.Submit(body["annotator"].get<std::string>(),
                                        body["task_id"].get<std::string>(),
                                        body["option"].get<std::string>());
      Reply(res, 201, {{"status", "recorded"}, {"task_id", body["task_id"]}, {"option", ToString(j.option)}});
    } catch (const Error& e) {
      ReplyError(res, e);
    } catch (const nlohmann::json::exception& e) {
      ReplyError(res, Error(ErrorCode::kParseError, e.what()));
    }
  });
  server.Get("/api/progress", [&service](const httplib::Request& req, httplib::Response& res) {
    const Progress p = service.GetProgress();
    nlohmann::json annotators = nlohmann::json::object();
    for (const auto& [a, n] : p.done_per_annotator) annotators[a] = {{"done", n}, {"total", p.total_tasks}};
    nlohmann::json body = {{"total_tasks", p.total_tasks}, {"judgments", p.judgments}, {"annotators", annotators}};
    if (req.has_param("annotator")) {
      const auto a = req.get_param_value("annotator");
      auto it = p.done_per_annotator.find(a);
      if (it == p.done_per_annotator.end()) {
        ReplyError(res, Error(ErrorCode::kUnknownAnnotator, "unknown annotator '" + a + "'"));
        return;
      }
      body["done"] = it->second;
    }
    Reply(res, 200, body);
  });
  server.Get("/api/instructions", [&service](const httplib::Request&, httplib::Response& res) {
    Reply(res, 200, service.InstructionsJson());
  });
}

}  // namespace storyeval
