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

#include "storyeval/run.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <set>
#include <unistd.h>

#include "storyeval/errors.hpp"
#include "storyeval/json_io.hpp"
#include "storyeval/util.hpp"

namespace storyeval {
namespace fs = std::filesystem;

namespace {

constexpr std::string_view kRunSchema = "storyeval.run/1";

template <typename E>
struct EnumName {
  E value;
  std::string_view name;
};

constexpr EnumName<JaccardDenominator> kDenominators[] = {
    {JaccardDenominator::kUnion, "union"}, {JaccardDenominator::kSizeSum, "size_sum"}};
constexpr EnumName<InterSentenceReading> kReadings[] = {
    {InterSentenceReading::kPairwiseMean, "pairwise"}, {InterSentenceReading::kPrefix, "prefix"}};
constexpr EnumName<RepetitionCombine> kCombines[] = {
    {RepetitionCombine::kComponentSum, "component_sum"}, {RepetitionCombine::kPooled, "pooled"}};
constexpr EnumName<ThresholdSource> kSources[] = {{ThresholdSource::kHuman, "human"},
                                                  {ThresholdSource::kAll, "all"}};
constexpr EnumName<TTestKind> kTTests[] = {{TTestKind::kWelch, "welch"},
                                           {TTestKind::kStudent, "student"}};

template <typename E, std::size_t N>
std::string_view NameOf(const EnumName<E> (&table)[N], E value) {
  for (const auto& e : table) {
    if (e.value == value) return e.name;
  }
  return "";
}

template <typename E, std::size_t N>
E ValueOf(const EnumName<E> (&table)[N], const std::string& name, const char* key) {
  for (const auto& e : table) {
    if (e.name == name) return e.value;
  }
  throw Error(ErrorCode::kSchemaViolation,
              std::string("config '") + key + "' has unknown value '" + name + "'");
}

std::string SanitizeName(std::string_view name) {
  std::string out;
  for (char c : name) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out += ok ? c : '_';
  }
  if (out != name || out.empty()) out += "_" + Hex64(Fnv1a64(name)).substr(0, 8);
  return out;
}

struct ScoredStory {
  const Story* story;
  const FeatureBundle* bundle;
  bool human;
};

std::string ThresholdId(const Manifest& manifest, ThresholdSource source,
                        const std::vector<std::string>& story_ids, double tau) {
  std::string key = manifest.dataset + "|" + std::string(ToString(manifest.split)) + "|" +
                    std::string(NameOf(kSources, source));
  for (const auto& id : story_ids) key += "|" + id;
  key += "|" + Hex64(std::bit_cast<std::uint64_t>(tau));
  return "tau-" + Hex64(Fnv1a64(key)).substr(0, 12);
}

std::string ScoresCsv(const std::vector<ScoredStory>& stories,
                      const std::vector<MetricScores>& scores) {
  std::string out =
      "story_id,sequence_id,author,coherence,grounding,repetition,threshold_id,"
      "coherence_degenerate,grounding_degenerate\n";
  for (std::size_t i = 0; i < stories.size(); ++i) {
    const auto& s = scores[i];
    out += CsvRow({stories[i].story->story_id, stories[i].story->sequence_id,
                   stories[i].story->author.ToString(), FormatDouble(s.coherence),
                   FormatDouble(s.grounding), FormatDouble(s.repetition), s.threshold_id,
                   s.coherence_degenerate ? "1" : "0", s.grounding_degenerate ? "1" : "0"});
  }
  return out;
}

nlohmann::json ReportSummary(const CorpusReport& r) {
  return {{"system", r.system},
          {"n", r.n},
          {"mean_d_hm", r.mean_d_hm},
          {"mean_d_c", r.mean_d_c},
          {"mean_d_g", r.mean_d_g},
          {"mean_d_r", r.mean_d_r},
          {"distance_of_means",
           {{"d_c", r.distance_of_means.d_c},
            {"d_g", r.distance_of_means.d_g},
            {"d_r", r.distance_of_means.d_r},
            {"d_hm", r.distance_of_means_hm}}},
          {"file", DistanceCsvName(r.system)}};
}

}  // namespace

nlohmann::json ConfigToJson(const RunConfig& c) {
  nlohmann::json sizes = nlohmann::json::object();
  for (const auto& [k, v] : c.model_sizes) sizes[k] = v;
  return {{"repetition",
           {{"jaccard", NameOf(kDenominators, c.scoring.repetition.denominator)},
            {"inter", NameOf(kReadings, c.scoring.repetition.inter_reading)},
            {"combine", NameOf(kCombines, c.scoring.repetition.combine)}}},
          {"threshold_source", NameOf(kSources, c.threshold_source)},
          {"seed", c.seed},
          {"parallel", c.parallel},
          {"threads", c.threads},
          {"sample_bins", c.sample_bins},
          {"t_test", NameOf(kTTests, c.t_test)},
          {"model_sizes", sizes}};
}

RunConfig ConfigFromJson(const nlohmann::json& j) {
  RunConfig c;
  try {
    if (j.contains("repetition")) {
      const auto& r = j["repetition"];
      if (r.contains("jaccard")) {
        c.scoring.repetition.denominator = ValueOf(kDenominators, r["jaccard"].get<std::string>(), "jaccard");
      }
      if (r.contains("inter")) {
        c.scoring.repetition.inter_reading = ValueOf(kReadings, r["inter"].get<std::string>(), "inter");
      }
      if (r.contains("combine")) {
        c.scoring.repetition.combine = ValueOf(kCombines, r["combine"].get<std::string>(), "combine");
      }
    }
    if (j.contains("threshold_source")) {
      c.threshold_source = ValueOf(kSources, j["threshold_source"].get<std::string>(), "threshold_source");
    }
    c.seed = j.value("seed", c.seed);
    c.parallel = j.value("parallel", c.parallel);
    c.threads = j.value("threads", c.threads);
    c.sample_bins = j.value("sample_bins", c.sample_bins);
    if (j.contains("t_test")) c.t_test = ValueOf(kTTests, j["t_test"].get<std::string>(), "t_test");
    if (j.contains("model_sizes")) {
      for (const auto& [k, v] : j["model_sizes"].items()) c.model_sizes[k] = v.get<double>();
    }
  } catch (const std::exception& e) {
    RethrowAsParseError(e, "config");
  }
  return c;
}

RunConfig LoadConfig(const fs::path& path) {
  try {
    return ConfigFromJson(nlohmann::json::parse(ReadTextFile(path)));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

std::string ConfigHash(const RunConfig& config) {
  auto j = ConfigToJson(config);
  // Execution knobs do not change results.
  j.erase("parallel");
  j.erase("threads");
  return Hex64(Fnv1a64(j.dump()));
}

std::string DistanceCsvName(std::string_view system) {
  return "distances_" + SanitizeName(system) + ".csv";
}

std::string DistanceCsv(const CorpusReport& report) {
  std::string out = std::string(kDistanceCsvHeader) + "\n";
  for (const auto& r : report.per_story) {
    out += CsvRow({r.sequence_id, FormatDouble(r.d_c), FormatDouble(r.d_g), FormatDouble(r.d_r),
                   FormatDouble(r.d_hm)});
  }
  return out;
}

RunResult RunEvaluation(const Manifest& manifest, const BundleIndex& bundles,
                        std::span<const std::string> systems_in, const RunConfig& config,
                        const fs::path& out_dir) {
  std::vector<std::string> systems(systems_in.begin(), systems_in.end());
  if (systems.empty()) systems = SystemNames(manifest);
  std::sort(systems.begin(), systems.end());
  systems.erase(std::unique(systems.begin(), systems.end()), systems.end());

  RunResult result;
  result.warnings = manifest.warnings;

  // Bundle presence and validity for every story in scope.
  std::vector<std::string> missing;
  std::vector<std::string> invalid;
  auto check = [&](const Story& story) {
    const FeatureBundle* b = bundles.Find(story.story_id);
    if (!b) {
      missing.push_back(story.story_id);
      return;
    }
    const auto report = ValidateBundle(story, *b);
    if (!report.ok()) {
      invalid.push_back(story.story_id + " (" + report.violations.front().kind + ": " +
                        report.violations.front().detail + ")");
    }
  };
  for (const auto& item : manifest.items) {
    check(item.human);
    for (const auto& name : systems) {
      auto it = item.systems.find(name);
      if (it != item.systems.end()) check(it->second);
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
    throw Error(ErrorCode::kMissingBundle, "no feature bundle for: " + list);
  }
  if (!invalid.empty()) {
    std::string list;
    for (const auto& id : invalid) list += (list.empty() ? "" : "; ") + id;
    throw Error(ErrorCode::kSchemaViolation, "invalid feature bundles: " + list);
  }

  // Items whose stories have NPs but no boxes cannot be grounded.
  std::vector<const ManifestItem*> items;
  for (const auto& item : manifest.items) {
    bool no_boxes = false;
    auto probe = [&](const Story& s) {
      const auto* b = bundles.Find(s.story_id);
      if (!b->np_features.empty() && b->box_features.empty()) no_boxes = true;
    };
    probe(item.human);
    for (const auto& name : systems) {
      auto it = item.systems.find(name);
      if (it != item.systems.end()) probe(it->second);
    }
    if (no_boxes) {
      result.warnings.push_back("excluding sequence '" + item.sequence.sequence_id +
                                "': no bounding boxes (NoBoxes)");
      continue;
    }
    items.push_back(&item);
  }

  // Stable story order: per item, the human story then systems by name.
  std::vector<ScoredStory> stories;
  std::vector<std::size_t> human_index(items.size());
  std::vector<std::map<std::string, std::size_t>> system_index(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    human_index[i] = stories.size();
    stories.push_back({&items[i]->human, bundles.Find(items[i]->human.story_id), true});
    for (const auto& name : systems) {
      auto it = items[i]->systems.find(name);
      if (it == items[i]->systems.end()) continue;
      system_index[i][name] = stories.size();
      stories.push_back({&it->second, bundles.Find(it->second.story_id), false});
    }
  }
  std::vector<kernels::StoryInput> inputs;
  for (const auto& s : stories) inputs.push_back({s.story, s.bundle});

  if (config.threads > 0) kernels::SetThreads(config.threads);
  const auto max_sims = config.parallel ? kernels::MaxSimilaritiesParallel(inputs)
                                        : kernels::MaxSimilaritiesSerial(inputs);

  std::vector<std::size_t> selected;
  std::vector<std::string> source_ids;
  for (std::size_t k = 0; k < stories.size(); ++k) {
    if (stories[k].human || config.threshold_source == ThresholdSource::kAll) {
      selected.push_back(k);
      source_ids.push_back(stories[k].story->story_id);
    }
  }
  const std::string source_desc =
      std::string(config.threshold_source == ThresholdSource::kHuman ? "human" : "all") +
      " stories of " + manifest.dataset + "/" + std::string(ToString(manifest.split)) + " (" +
      std::to_string(selected.size()) + " stories)";
  CorpusThreshold threshold = kernels::ReduceThreshold(max_sims, selected, "", source_desc);
  threshold.threshold_id =
      ThresholdId(manifest, config.threshold_source, source_ids, threshold.tau);
  result.threshold = threshold;

  const auto scores =
      config.parallel ? kernels::ScoreStoriesParallel(inputs, max_sims, threshold, config.scoring)
                      : kernels::ScoreStoriesSerial(inputs, max_sims, threshold, config.scoring);
  for (std::size_t i = 0; i < items.size(); ++i) result.human_scores.push_back(scores[human_index[i]]);

  for (const auto& name : systems) {
    std::vector<ScoredPair> pairs;
    for (std::size_t i = 0; i < items.size(); ++i) {
      const auto& human = scores[human_index[i]];
      if (name == kHumanControlSystem && items[i]->systems.count(name) == 0) {
        pairs.push_back({items[i]->sequence.sequence_id, human, human});
        continue;
      }
      auto it = system_index[i].find(name);
      if (it == system_index[i].end()) {
        result.warnings.push_back("system '" + name + "' has no story for sequence '" +
                                  items[i]->sequence.sequence_id + "'");
        continue;
      }
      pairs.push_back({items[i]->sequence.sequence_id, human, scores[it->second]});
    }
    result.reports.push_back(CorpusDistance(name, pairs));
  }

  // Stage everything, then move the finished directory into place.
  const fs::path staging =
      out_dir.parent_path() / (out_dir.filename().string() + ".partial-" + std::to_string(getpid()));
  fs::remove_all(staging);
  fs::create_directories(staging);
  try {
    WriteTextFile(staging / "scores.csv", ScoresCsv(stories, scores));
    for (const auto& r : result.reports) WriteTextFile(staging / DistanceCsvName(r.system), DistanceCsv(r));

    const std::string created_at = UtcTimestamp();
    auto threshold_json = ToJson(threshold);
    threshold_json["schema"] = kThresholdSchema;
    threshold_json["created_at"] = created_at;
    WriteTextFile(staging / "threshold.json", threshold_json.dump(2) + "\n");

    nlohmann::json summary = {{"schema", kRunSchema},
                              {"dataset", manifest.dataset},
                              {"split", ToString(manifest.split)},
                              {"threshold_id", threshold.threshold_id},
                              {"config", ConfigToJson(config)},
                              {"systems", nlohmann::json::array()},
                              {"warnings", result.warnings}};
    for (const auto& r : result.reports) summary["systems"].push_back(ReportSummary(r));
    summary["reproducibility"] = {{"seed", config.seed},
                                  {"threshold_id", threshold.threshold_id},
                                  {"config_hash", ConfigHash(config)},
                                  {"tool_version", kToolVersion},
                                  {"created_at", created_at}};
    WriteTextFile(staging / "run.json", summary.dump(2) + "\n");

    if (!out_dir.parent_path().empty()) fs::create_directories(out_dir.parent_path());
    fs::remove_all(out_dir);
    fs::rename(staging, out_dir);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(staging, ec);
    throw;
  }
  result.dir = out_dir;
  return result;
}

const CorpusReport& LoadedRun::Report(const std::string& system) const {
  for (const auto& r : reports) {
    if (r.system == system) return r;
  }
  throw Error(ErrorCode::kIncompleteRun, "run has no system '" + system + "'");
}

LoadedRun LoadRun(const fs::path& run_dir) {
  const fs::path summary_path = run_dir / "run.json";
  if (!fs::exists(summary_path)) {
    throw Error(ErrorCode::kIncompleteRun, run_dir.string() + " has no run.json");
  }
  LoadedRun run;
  try {
    run.summary = nlohmann::json::parse(ReadTextFile(summary_path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, summary_path.string() + ": " + e.what());
  }
  CheckSchema(run.summary, kRunSchema);
  run.config = ConfigFromJson(run.summary.value("config", nlohmann::json::object()));
  const fs::path threshold_path = run_dir / "threshold.json";
  if (!fs::exists(threshold_path)) {
    throw Error(ErrorCode::kIncompleteRun, run_dir.string() + " has no threshold.json");
  }
  run.threshold = ThresholdFromJson(nlohmann::json::parse(ReadTextFile(threshold_path)));

  for (const auto& s : run.summary.value("systems", nlohmann::json::array())) {
    CorpusReport r;
    r.system = s.at("system").get<std::string>();
    r.n = s.at("n").get<std::size_t>();
    r.mean_d_hm = s.at("mean_d_hm").get<double>();
    r.mean_d_c = s.at("mean_d_c").get<double>();
    r.mean_d_g = s.at("mean_d_g").get<double>();
    r.mean_d_r = s.at("mean_d_r").get<double>();
    const auto& dm = s.at("distance_of_means");
    r.distance_of_means = {dm.at("d_c").get<double>(), dm.at("d_g").get<double>(),
                           dm.at("d_r").get<double>()};
    r.distance_of_means_hm = dm.at("d_hm").get<double>();
    r.threshold_id = run.threshold.threshold_id;
    const fs::path csv = run_dir / s.at("file").get<std::string>();
    if (!fs::exists(csv)) throw Error(ErrorCode::kIncompleteRun, csv.string() + " is missing");
    const auto rows = ReadCsv(csv);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto& row = rows[i];
      if (row.size() != 5) throw Error(ErrorCode::kParseError, csv.string() + ": bad row");
      r.per_story.push_back({row[0], r.system, std::stod(row[1]), std::stod(row[2]),
                             std::stod(row[3]), std::stod(row[4])});
    }
    if (r.per_story.size() != r.n) {
      throw Error(ErrorCode::kIncompleteRun, csv.string() + " does not match run.json");
    }
    run.reports.push_back(std::move(r));
  }
  return run;
}

}  // namespace storyeval
