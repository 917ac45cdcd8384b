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

#include "storyeval/judgments.hpp"

#include <unordered_map>

#include "storyeval/errors.hpp"

namespace storyeval {

std::string_view ToString(JudgmentOption option) {
  switch (option) {
    case JudgmentOption::kFirstBetter: return "first_better";
    case JudgmentOption::kSecondBetter: return "second_better";
    case JudgmentOption::kBothFine: return "both_fine";
    case JudgmentOption::kBothBad: return "both_bad";
  }
  return "";
}

std::string_view ToString(PresentationOrder order) {
  return order == PresentationOrder::kHumanFirst ? "human_first" : "model_first";
}

std::string_view ToString(Verdict verdict) {
  switch (verdict) {
    case Verdict::kHumanBetter: return "human_better";
    case Verdict::kModelBetter: return "model_better";
    case Verdict::kBothFine: return "both_fine";
    case Verdict::kBothBad: return "both_bad";
  }
  return "";
}

JudgmentOption ParseJudgmentOption(std::string_view text) {
  for (auto o : {JudgmentOption::kFirstBetter, JudgmentOption::kSecondBetter,
                 JudgmentOption::kBothFine, JudgmentOption::kBothBad}) {
    if (ToString(o) == text) return o;
  }
  throw Error(ErrorCode::kUnknownOption, "unknown judgment option '" + std::string(text) + "'");
}

PresentationOrder ParsePresentationOrder(std::string_view text) {
  if (text == "human_first") return PresentationOrder::kHumanFirst;
  if (text == "model_first") return PresentationOrder::kModelFirst;
  throw Error(ErrorCode::kUnknownOption,
              "unknown presentation order '" + std::string(text) + "'");
}

Verdict Canonicalize(JudgmentOption option, PresentationOrder order) {
  const bool human_first = order == PresentationOrder::kHumanFirst;
  switch (option) {
    case JudgmentOption::kFirstBetter:
      return human_first ? Verdict::kHumanBetter : Verdict::kModelBetter;
    case JudgmentOption::kSecondBetter:
      return human_first ? Verdict::kModelBetter : Verdict::kHumanBetter;
    case JudgmentOption::kBothFine: return Verdict::kBothFine;
    case JudgmentOption::kBothBad: return Verdict::kBothBad;
  }
  throw Error(ErrorCode::kUnknownOption, "invalid judgment option");
}

JudgmentTally TallyJudgments(std::span<const Judgment> judgments) {
  JudgmentTally tally;
  for (const auto& j : judgments) {
    auto& t = tally.per_system[j.system];
    ++t.counts[static_cast<std::size_t>(Canonicalize(j))];
    ++t.total;
  }
  for (auto& [system, t] : tally.per_system) {
    for (std::size_t v = 0; v < t.counts.size(); ++v) {
      t.percent[v] = 100.0 * static_cast<double>(t.counts[v]) / static_cast<double>(t.total);
    }
  }
  return tally;
}

std::map<Verdict, std::vector<double>> SplitDistancesByVerdict(
    std::span<const Judgment> judgments, const CorpusReport& report) {
  std::unordered_map<std::string, double> d_hm;
  for (const auto& r : report.per_story) d_hm.emplace(r.sequence_id, r.d_hm);
  std::map<Verdict, std::vector<double>> out;
  for (Verdict v : kAllVerdicts) out[v];
  for (const auto& j : judgments) {
    if (j.system != report.system) continue;
    auto it = d_hm.find(j.sequence_id);
    if (it == d_hm.end()) continue;
    out[Canonicalize(j)].push_back(it->second);
  }
  return out;
}

}  // namespace storyeval
