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

#include "storyeval/repetition.hpp"

#include <algorithm>
#include <numeric>

namespace storyeval {
namespace {

std::vector<std::string> ToSet(std::span<const std::string> tokens) {
  std::vector<std::string> set(tokens.begin(), tokens.end());
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  return set;
}

double SortedSetJaccard(const std::vector<std::string>& a,
                        const std::vector<std::string>& b,
                        JaccardDenominator denominator) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  const double denom = denominator == JaccardDenominator::kUnion
                           ? static_cast<double>(a.size() + b.size() - common)
                           : static_cast<double>(a.size() + b.size());
  return static_cast<double>(common) / denom;
}

double Mean(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

}  // namespace

double JaccardSimilarity(std::span<const std::string> a, std::span<const std::string> b,
                         JaccardDenominator denominator) {
  return SortedSetJaccard(ToSet(a), ToSet(b), denominator);
}

std::vector<double> InterSentenceScores(const Story& story,
                                        const RepetitionOptions& options) {
  std::vector<std::vector<std::string>> sets;
  sets.reserve(story.sentences.size());
  for (const auto& s : story.sentences) sets.push_back(ToSet(s.tokens));

  std::vector<double> scores;
  for (std::size_t i = 1; i < sets.size(); ++i) {
    if (options.inter_reading == InterSentenceReading::kPrefix) {
      std::vector<std::string> prefix;
      for (std::size_t j = 0; j < i; ++j) {
        prefix.insert(prefix.end(), sets[j].begin(), sets[j].end());
      }
      scores.push_back(SortedSetJaccard(sets[i], ToSet(prefix), options.denominator));
      continue;
    }
    double sum = 0;
    for (std::size_t j = 0; j < i; ++j) {
      sum += SortedSetJaccard(sets[i], sets[j], options.denominator);
    }
    scores.push_back(sum / static_cast<double>(i));
  }
  return scores;
}

std::optional<double> IntraSentenceScore(const Sentence& sentence,
                                         const RepetitionOptions& options) {
  const auto& tokens = sentence.tokens;
  const std::size_t chunks = tokens.size() / kIntraChunkSize;
  if (chunks < 2) return std::nullopt;
  std::vector<std::vector<std::string>> sets;
  for (std::size_t c = 0; c < chunks; ++c) {
    sets.push_back(ToSet(std::span(tokens).subspan(c * kIntraChunkSize, kIntraChunkSize)));
  }
  double sum = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < chunks; ++i) {
    for (std::size_t j = i + 1; j < chunks; ++j) {
      sum += SortedSetJaccard(sets[i], sets[j], options.denominator);
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

double CombineRepetition(std::span<const double> inter, std::span<const double> intra,
                         RepetitionCombine combine) {
  if (inter.empty() && intra.empty()) return 1.0;
  if (combine == RepetitionCombine::kPooled) {
    double sum = std::accumulate(inter.begin(), inter.end(), 0.0);
    sum = std::accumulate(intra.begin(), intra.end(), sum);
    return 1.0 - sum / static_cast<double>(inter.size() + intra.size());
  }
  double r = 1.0;
  if (!inter.empty()) r -= Mean(inter);
  if (!intra.empty()) r -= Mean(intra);
  return std::clamp(r, 0.0, 1.0);
}

RepetitionBreakdown RepetitionScore(const Story& story, const RepetitionOptions& options) {
  RepetitionBreakdown out;
  out.inter_scores = InterSentenceScores(story, options);
  for (const auto& s : story.sentences) {
    if (auto score = IntraSentenceScore(s, options)) out.intra_scores.push_back(*score);
  }
  out.final = CombineRepetition(out.inter_scores, out.intra_scores, options.combine);
  return out;
}

}  // namespace storyeval
