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

#ifndef STORYEVAL_DISTANCE_HPP_
#define STORYEVAL_DISTANCE_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "storyeval/features.hpp"

namespace storyeval {

// Per-metric absolute human/model differences.
struct MetricDistances {
  double d_c = 0;
  double d_g = 0;
  double d_r = 0;
};

struct DistanceRecord {
  std::string sequence_id;
  std::string system;
  double d_c = 0;
  double d_g = 0;
  double d_r = 0;
  double d_hm = 0;
};

struct CorpusReport {
  std::string system;
  std::size_t n = 0;
  double mean_d_hm = 0;
  double mean_d_c = 0;
  double mean_d_g = 0;
  double mean_d_r = 0;
  std::vector<DistanceRecord> per_story;
  std::string threshold_id;
  // Distance between the corpus-mean metric vectors, reported alongside.
  MetricDistances distance_of_means;
  double distance_of_means_hm = 0;
};

struct ScoredPair {
  std::string sequence_id;
  MetricScores human;
  MetricScores model;
};

// Throws Error(kThresholdMismatch) when the two scores use different
// grounding thresholds.
MetricDistances ComputeMetricDistances(const MetricScores& human, const MetricScores& model);

double AggregateDistance(double d_c, double d_g, double d_r);
inline double AggregateDistance(const MetricDistances& d) {
  return AggregateDistance(d.d_c, d.d_g, d.d_r);
}

// Mean of per-story distances. Throws Error(kEmptyCorpus) or
// Error(kThresholdMismatch).
CorpusReport CorpusDistance(std::string system, std::span<const ScoredPair> pairs);

// Fieldwise mean of corpus means across prompt variants; per_story is left
// empty. Throws Error(kArityMismatch) when the reports differ in n and
// Error(kEmptyCorpus) for an empty list.
CorpusReport PromptVariantAverage(std::span<const CorpusReport> reports);

}  // namespace storyeval

#endif  // STORYEVAL_DISTANCE_HPP_
