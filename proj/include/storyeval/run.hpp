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

#ifndef STORYEVAL_RUN_HPP_
#define STORYEVAL_RUN_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "storyeval/distance.hpp"
#include "storyeval/grounding.hpp"
#include "storyeval/kernels.hpp"
#include "storyeval/manifest.hpp"
#include "storyeval/stats.hpp"

namespace storyeval {

inline constexpr std::string_view kToolVersion = "storyeval 1.0.0";

// Scoring the human story against itself under this system name gives the
// control run.
inline constexpr std::string_view kHumanControlSystem = "human";

enum class ThresholdSource {
  kHuman,  // NPs of the human stories of the evaluated items
  kAll,    // human and every evaluated system
};

struct RunConfig {
  kernels::ScoringOptions scoring;
  ThresholdSource threshold_source = ThresholdSource::kHuman;
  std::uint64_t seed = 0;
  bool parallel = true;
  int threads = 0;
  std::size_t sample_bins = kDefaultSampleBins;
  TTestKind t_test = TTestKind::kWelch;
  // Parameter counts per system, for the size-vs-distance plot data.
  std::map<std::string, double> model_sizes;
};

nlohmann::json ConfigToJson(const RunConfig& config);
// Missing keys keep their defaults; unknown enum values throw
// Error(kSchemaViolation).
RunConfig ConfigFromJson(const nlohmann::json& j);
RunConfig LoadConfig(const std::filesystem::path& path);
std::string ConfigHash(const RunConfig& config);

struct RunResult {
  std::filesystem::path dir;
  CorpusThreshold threshold;
  std::vector<CorpusReport> reports;
  std::vector<MetricScores> human_scores;
  std::vector<std::string> warnings;
};

// Threshold pass, per-story scoring, distances, and report files. The run
// directory appears only once every file is written (a sibling staging
// directory is renamed into place, replacing any previous run). An empty
// `systems` means every system in the manifest; a manifest without systems
// gives a scores-only run.
// Throws Error(kMissingBundle) listing story ids without bundles and
// Error(kSchemaViolation) for invalid bundles; nothing is written then.
RunResult RunEvaluation(const Manifest& manifest, const BundleIndex& bundles,
                        std::span<const std::string> systems, const RunConfig& config,
                        const std::filesystem::path& out_dir);

// Per-system distance CSV, fixed column order.
inline constexpr std::string_view kDistanceCsvHeader = "sequence_id,d_c,d_g,d_r,d_hm";
std::string DistanceCsvName(std::string_view system);
std::string DistanceCsv(const CorpusReport& report);

struct LoadedRun {
  nlohmann::json summary;
  RunConfig config;
  CorpusThreshold threshold;
  std::vector<CorpusReport> reports;  // per_story restored from the CSVs

  const CorpusReport& Report(const std::string& system) const;
};

// Throws Error(kIncompleteRun) when run.json or a distance file is missing.
LoadedRun LoadRun(const std::filesystem::path& run_dir);

}  // namespace storyeval

#endif  // STORYEVAL_RUN_HPP_
