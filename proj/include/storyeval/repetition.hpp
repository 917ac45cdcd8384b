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

#ifndef STORYEVAL_REPETITION_HPP_
#define STORYEVAL_REPETITION_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "storyeval/story.hpp"

namespace storyeval {

// Non-redundancy score R: 1 minus the inter- and intra-sentence Jaccard
// similarity of a story's word sets. 1 means no repetition.

enum class JaccardDenominator {
  kUnion,    // |A ∩ B| / |A ∪ B|
  kSizeSum,  // |A ∩ B| / (|A| + |B|)
};

enum class InterSentenceReading {
  kPairwiseMean,  // mean of JS(s_i, s_j) over j < i
  kPrefix,        // JS(s_i, s_1 ⊕ ... ⊕ s_{i-1})
};

enum class RepetitionCombine {
  // R = 1 - mean(inter) - mean(intra), an absent component counting as 0,
  // clamped to [0, 1].
  kComponentSum,
  // R = 1 - mean(inter ∪ intra).
  kPooled,
};

inline constexpr std::size_t kIntraChunkSize = 4;

struct RepetitionOptions {
  JaccardDenominator denominator = JaccardDenominator::kUnion;
  InterSentenceReading inter_reading = InterSentenceReading::kPairwiseMean;
  RepetitionCombine combine = RepetitionCombine::kComponentSum;

  bool operator==(const RepetitionOptions&) const = default;
};

struct RepetitionBreakdown {
  std::vector<double> inter_scores;  // one per sentence i >= 2
  std::vector<double> intra_scores;  // one per sentence with >= 2 full chunks
  double final = 1.0;
};

// Set semantics; 0 when both inputs are empty.
double JaccardSimilarity(std::span<const std::string> a, std::span<const std::string> b,
                         JaccardDenominator denominator = JaccardDenominator::kUnion);

std::vector<double> InterSentenceScores(const Story& story,
                                        const RepetitionOptions& options = {});

// Mean JS over all pairs of consecutive non-overlapping 4-token chunks; the
// trailing remainder is dropped. Empty when fewer than two chunks exist.
std::optional<double> IntraSentenceScore(const Sentence& sentence,
                                         const RepetitionOptions& options = {});

RepetitionBreakdown RepetitionScore(const Story& story,
                                    const RepetitionOptions& options = {});

// Combines already computed inter and intra scores into R.
double CombineRepetition(std::span<const double> inter, std::span<const double> intra,
                         RepetitionCombine combine);

}  // namespace storyeval

#endif  // STORYEVAL_REPETITION_HPP_
