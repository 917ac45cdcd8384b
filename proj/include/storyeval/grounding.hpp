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

#ifndef STORYEVAL_GROUNDING_HPP_
#define STORYEVAL_GROUNDING_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "storyeval/features.hpp"
#include "storyeval/story.hpp"

namespace storyeval {

// Dataset-level mean of per-NP max alignment scores. Immutable once
// published; every score computed against it carries threshold_id.
struct CorpusThreshold {
  std::string threshold_id;
  double tau = 0;
  std::size_t np_count = 0;
  std::string source;

  bool operator==(const CorpusThreshold&) const = default;
};

struct NpContribution {
  std::size_t np_index = 0;
  double max_sim = 0;
  double weight = 0;
  double contribution = 0;  // weight * (max_sim - tau)
};

struct GroundingBreakdown {
  std::vector<NpContribution> per_np;
  double final = 0;
  // Story without NPs: final is 0.
  bool degenerate = false;
};

// Max dot product of the NP embedding over all boxes. Unit vectors make this
// the max cosine similarity. Throws Error(kNoBoxes) for an empty box list.
double NpAlignment(std::span<const double> np_embedding,
                   std::span<const BoxFeature> boxes);

// NpAlignment for every NP feature, in bundle order.
std::vector<double> NpMaxSimilarities(const FeatureBundle& bundle);

// tau = mean(all_max_sims). Throws Error(kEmptyCorpus) for an empty list.
CorpusThreshold ComputeCorpusThreshold(std::span<const double> all_max_sims,
                                       std::string threshold_id = {},
                                       std::string source = {});

// Throws Error(kThresholdMissing) when no threshold is bound, Error(kNoBoxes)
// when the bundle has NPs but no box features, and Error(kIdMismatch) when a
// box references an image or box index absent from the sequence.
GroundingBreakdown GroundingScore(const FeatureBundle& bundle, const ImageSequence& sequence,
                                  const std::optional<CorpusThreshold>& threshold);

// Scoring step alone, from precomputed max similarities (bundle order).
GroundingBreakdown GroundingFromSimilarities(const FeatureBundle& bundle,
                                             std::span<const double> max_sims,
                                             const CorpusThreshold& threshold);

}  // namespace storyeval

#endif  // STORYEVAL_GROUNDING_HPP_
