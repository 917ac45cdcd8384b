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

#include "storyeval/grounding.hpp"

#include <algorithm>
#include <limits>

#include "storyeval/errors.hpp"

namespace storyeval {

double NpAlignment(std::span<const double> np_embedding,
                   std::span<const BoxFeature> boxes) {
  if (boxes.empty()) throw Error(ErrorCode::kNoBoxes, "no bounding boxes to align against");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& box : boxes) {
    if (box.embedding.size() != np_embedding.size()) {
      throw Error(ErrorCode::kSchemaViolation, "embedding dimensions differ");
    }
    double dot = 0;
    for (std::size_t k = 0; k < np_embedding.size(); ++k) {
      dot += np_embedding[k] * box.embedding[k];
    }
    best = std::max(best, dot);
  }
  return best;
}

std::vector<double> NpMaxSimilarities(const FeatureBundle& bundle) {
  std::vector<double> sims;
  sims.reserve(bundle.np_features.size());
  for (const auto& np : bundle.np_features) {
    sims.push_back(NpAlignment(np.embedding, bundle.box_features));
  }
  return sims;
}

CorpusThreshold ComputeCorpusThreshold(std::span<const double> all_max_sims,
                                       std::string threshold_id, std::string source) {
  if (all_max_sims.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "no NP alignment scores to threshold");
  }
  double sum = 0;
  for (double s : all_max_sims) sum += s;
  return {std::move(threshold_id), sum / static_cast<double>(all_max_sims.size()),
          all_max_sims.size(), std::move(source)};
}

GroundingBreakdown GroundingFromSimilarities(const FeatureBundle& bundle,
                                             std::span<const double> max_sims,
                                             const CorpusThreshold& threshold) {
  GroundingBreakdown out;
  if (bundle.np_features.empty()) {
    out.degenerate = true;
    return out;
  }
  double sum = 0;
  for (std::size_t i = 0; i < bundle.np_features.size(); ++i) {
    const auto& np = bundle.np_features[i];
    const double c = np.concreteness_weight * (max_sims[i] - threshold.tau);
    out.per_np.push_back({np.np_index, max_sims[i], np.concreteness_weight, c});
    sum += c;
  }
  out.final = sum / static_cast<double>(out.per_np.size());
  return out;
}

GroundingBreakdown GroundingScore(const FeatureBundle& bundle, const ImageSequence& sequence,
                                  const std::optional<CorpusThreshold>& threshold) {
  if (!threshold) {
    throw Error(ErrorCode::kThresholdMissing,
                "no corpus threshold bound for story '" + bundle.story_id + "'");
  }
  for (const auto& box : bundle.box_features) {
    auto image = std::find_if(sequence.images.begin(), sequence.images.end(),
                              [&](const ImageRef& r) { return r.image_id == box.image_id; });
    if (image == sequence.images.end() ||
        (!image->boxes.empty() && box.box_index >= image->boxes.size())) {
      throw Error(ErrorCode::kIdMismatch, "box " + box.image_id + "#" +
                                              std::to_string(box.box_index) +
                                              " is not part of sequence '" +
                                              sequence.sequence_id + "'");
    }
  }
  if (bundle.np_features.empty()) return GroundingFromSimilarities(bundle, {}, *threshold);
  const auto sims = NpMaxSimilarities(bundle);
  return GroundingFromSimilarities(bundle, sims, *threshold);
}

}  // namespace storyeval
