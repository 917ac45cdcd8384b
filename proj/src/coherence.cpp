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

#include "storyeval/coherence.hpp"

#include "storyeval/errors.hpp"

namespace storyeval {

CoherenceResult CoherenceScore(const CoherenceInput& input) {
  const std::size_t expected = input.sentence_count > 0 ? input.sentence_count - 1 : 0;
  if (input.follow_probs.size() != expected) {
    throw Error(ErrorCode::kArityMismatch,
                "story '" + input.story_id + "' has " +
                    std::to_string(input.sentence_count) + " sentences but " +
                    std::to_string(input.follow_probs.size()) + " follow probabilities");
  }
  if (input.follow_probs.empty()) return {1.0, true};
  double sum = 0;
  for (double p : input.follow_probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::kSchemaViolation,
                  "story '" + input.story_id + "' has a follow probability outside [0,1]");
    }
    sum += p;
  }
  return {sum / static_cast<double>(input.follow_probs.size()), false};
}

CoherenceInput MakeCoherenceInput(const Story& story, const FeatureBundle& bundle) {
  return {story.story_id, story.sentences.size(), bundle.follow_probs};
}

}  // namespace storyeval
