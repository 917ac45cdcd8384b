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

#ifndef STORYEVAL_FEATURES_HPP_
#define STORYEVAL_FEATURES_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "storyeval/story.hpp"

namespace storyeval {

inline constexpr std::size_t kDefaultEmbeddingDim = 512;
inline constexpr double kUnitNormTolerance = 1e-4;

struct BundleMetadata {
  std::size_t embedding_dim = kDefaultEmbeddingDim;
  std::string extractor_version;
  std::string concreteness_lexicon_version;

  bool operator==(const BundleMetadata&) const = default;
};

struct NpFeature {
  std::size_t np_index = 0;
  std::vector<double> embedding;
  double concreteness_weight = 0.5;

  bool operator==(const NpFeature&) const = default;
};

struct BoxFeature {
  std::string image_id;
  std::size_t box_index = 0;
  std::vector<double> embedding;

  bool operator==(const BoxFeature&) const = default;
};

// Precomputed per-story features produced by the extraction sidecar.
// follow_probs[k] is the probability that sentence k+2 follows the
// concatenation of sentences 1..k+1.
struct FeatureBundle {
  std::string story_id;
  std::size_t embedding_dim = kDefaultEmbeddingDim;
  std::vector<NpFeature> np_features;
  std::vector<BoxFeature> box_features;
  std::vector<double> follow_probs;

  bool operator==(const FeatureBundle&) const = default;
};

struct Violation {
  std::string kind;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool Has(const std::string& kind) const;
};

// Checks the bundle invariants against its story. Violation kinds:
// "non-unit embedding", "dimension mismatch", "prob arity", "prob range",
// "weight range", "np bijection", "story structure".
// Throws Error(kIdMismatch) when the story ids differ.
ValidationReport ValidateBundle(const Story& story, const FeatureBundle& bundle);

struct MetricScores {
  double coherence = 0;
  double grounding = 0;
  double repetition = 0;
  std::string threshold_id;
  bool coherence_degenerate = false;
  bool grounding_degenerate = false;

  bool operator==(const MetricScores&) const = default;
};

}  // namespace storyeval

#endif  // STORYEVAL_FEATURES_HPP_
