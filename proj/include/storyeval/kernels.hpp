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

#ifndef STORYEVAL_KERNELS_HPP_
#define STORYEVAL_KERNELS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "storyeval/features.hpp"
#include "storyeval/grounding.hpp"
#include "storyeval/repetition.hpp"
#include "storyeval/story.hpp"

// Corpus-scale scoring loops. Each *Parallel kernel has a *Serial reference
// twin and returns bit-identical results; reductions run in index order.
namespace storyeval::kernels {

// Row-wise max of the dense similarity matrix nps · boxesᵀ. Both inputs are
// row-major with `dim` columns; out has one entry per NP row.
void MaxAlignmentSerial(std::span<const double> nps, std::span<const double> boxes,
                        std::size_t dim, std::span<double> out);
void MaxAlignmentParallel(std::span<const double> nps, std::span<const double> boxes,
                          std::size_t dim, std::span<double> out);

struct StoryInput {
  const Story* story = nullptr;
  const FeatureBundle* bundle = nullptr;
};

// Per-story NP max similarities (bundle NP order).
std::vector<std::vector<double>> MaxSimilaritiesSerial(std::span<const StoryInput> inputs);
std::vector<std::vector<double>> MaxSimilaritiesParallel(std::span<const StoryInput> inputs);

// Flattens the selected stories' similarities in index order and publishes
// their mean. Throws Error(kEmptyCorpus) when no NP is selected.
CorpusThreshold ReduceThreshold(const std::vector<std::vector<double>>& max_sims,
                                std::span<const std::size_t> selected,
                                std::string threshold_id, std::string source);

struct ScoringOptions {
  RepetitionOptions repetition;
};

std::vector<MetricScores> ScoreStoriesSerial(std::span<const StoryInput> inputs,
                                             const std::vector<std::vector<double>>& max_sims,
                                             const CorpusThreshold& threshold,
                                             const ScoringOptions& options);
std::vector<MetricScores> ScoreStoriesParallel(std::span<const StoryInput> inputs,
                                               const std::vector<std::vector<double>>& max_sims,
                                               const CorpusThreshold& threshold,
                                               const ScoringOptions& options);

// Thread count used by the parallel kernels; 0 restores the runtime default.
void SetThreads(int threads);
int MaxThreads();

}  // namespace storyeval::kernels

#endif  // STORYEVAL_KERNELS_HPP_
