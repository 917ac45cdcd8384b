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

#ifndef STORYEVAL_JUDGMENTS_HPP_
#define STORYEVAL_JUDGMENTS_HPP_

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "storyeval/distance.hpp"

namespace storyeval {

// What the annotator clicked, relative to the on-screen order.
enum class JudgmentOption { kFirstBetter, kSecondBetter, kBothFine, kBothBad };

enum class PresentationOrder { kHumanFirst, kModelFirst };

// Authorship-resolved verdict.
enum class Verdict { kHumanBetter, kModelBetter, kBothFine, kBothBad };

inline constexpr std::array<Verdict, 4> kAllVerdicts = {
    Verdict::kHumanBetter, Verdict::kModelBetter, Verdict::kBothFine, Verdict::kBothBad};

std::string_view ToString(JudgmentOption option);
std::string_view ToString(PresentationOrder order);
std::string_view ToString(Verdict verdict);

// Throw Error(kUnknownOption) on unrecognised text.
JudgmentOption ParseJudgmentOption(std::string_view text);
PresentationOrder ParsePresentationOrder(std::string_view text);

struct Judgment {
  std::string annotator_id;
  std::string sequence_id;
  std::string system;
  JudgmentOption option = JudgmentOption::kBothFine;
  PresentationOrder presentation_order = PresentationOrder::kHumanFirst;
  std::string timestamp;

  bool operator==(const Judgment&) const = default;
};

Verdict Canonicalize(JudgmentOption option, PresentationOrder order);
inline Verdict Canonicalize(const Judgment& j) {
  return Canonicalize(j.option, j.presentation_order);
}

struct SystemTally {
  std::size_t total = 0;
  std::array<std::size_t, 4> counts{};  // indexed by Verdict
  std::array<double, 4> percent{};

  std::size_t count(Verdict v) const { return counts[static_cast<std::size_t>(v)]; }
  double percentage(Verdict v) const { return percent[static_cast<std::size_t>(v)]; }
};

struct JudgmentTally {
  std::map<std::string, SystemTally> per_system;
};

JudgmentTally TallyJudgments(std::span<const Judgment> judgments);

// d_hm of the judged story, one entry per judgment, grouped by verdict.
// Judgments for other systems or for sequences absent from the report are
// skipped.
std::map<Verdict, std::vector<double>> SplitDistancesByVerdict(
    std::span<const Judgment> judgments, const CorpusReport& report);

}  // namespace storyeval

#endif  // STORYEVAL_JUDGMENTS_HPP_
