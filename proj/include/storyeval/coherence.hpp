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

#ifndef STORYEVAL_COHERENCE_HPP_
#define STORYEVAL_COHERENCE_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "storyeval/features.hpp"

namespace storyeval {

struct CoherenceInput {
  std::string story_id;
  std::size_t sentence_count = 0;
  // Probability that sentence i follows the concatenated prefix, i = 2..n.
  std::vector<double> follow_probs;
};

struct CoherenceResult {
  double score = 1.0;
  // Single-sentence story: no probabilities exist and the score is 1.
  bool degenerate = false;
};

// Mean of the follow probabilities. Throws Error(kArityMismatch) when the
// list length is not sentence_count - 1 and Error(kSchemaViolation) for a
// probability outside [0, 1].
CoherenceResult CoherenceScore(const CoherenceInput& input);

CoherenceInput MakeCoherenceInput(const Story& story, const FeatureBundle& bundle);

}  // namespace storyeval

#endif  // STORYEVAL_COHERENCE_HPP_
