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

#include "storyeval/distance.hpp"

#include <cmath>

#include "storyeval/errors.hpp"

namespace storyeval {

MetricDistances ComputeMetricDistances(const MetricScores& human, const MetricScores& model) {
  if (human.threshold_id != model.threshold_id) {
    throw Error(ErrorCode::kThresholdMismatch, "grounding thresholds '" + human.threshold_id +
                                                   "' and '" + model.threshold_id +
                                                   "' are not comparable");
  }
  return {std::abs(human.coherence - model.coherence),
          std::abs(human.grounding - model.grounding),
          std::abs(human.repetition - model.repetition)};
}

double AggregateDistance(double d_c, double d_g, double d_r) {
  return (d_c + d_g + d_r) / 3.0;
}

CorpusReport CorpusDistance(std::string system, std::span<const ScoredPair> pairs) {
  if (pairs.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "no scored pairs for system '" + system + "'");
  }
  CorpusReport report;
  report.system = std::move(system);
  report.threshold_id = pairs.front().human.threshold_id;
  double sum_c = 0, sum_g = 0, sum_r = 0, sum_hm = 0;
  double h_c = 0, h_g = 0, h_r = 0, m_c = 0, m_g = 0, m_r = 0;
  for (const auto& pair : pairs) {
    if (pair.human.threshold_id != report.threshold_id) {
      throw Error(ErrorCode::kThresholdMismatch, "corpus mixes grounding thresholds");
    }
    const MetricDistances d = ComputeMetricDistances(pair.human, pair.model);
    DistanceRecord record{pair.sequence_id, report.system, d.d_c, d.d_g, d.d_r,
                          AggregateDistance(d)};
    sum_c += record.d_c;
    sum_g += record.d_g;
    sum_r += record.d_r;
    sum_hm += record.d_hm;
    h_c += pair.human.coherence;
    h_g += pair.human.grounding;
    h_r += pair.human.repetition;
    m_c += pair.model.coherence;
    m_g += pair.model.grounding;
    m_r += pair.model.repetition;
    report.per_story.push_back(std::move(record));
  }
  const double n = static_cast<double>(pairs.size());
  report.n = pairs.size();
  report.mean_d_c = sum_c / n;
  report.mean_d_g = sum_g / n;
  report.mean_d_r = sum_r / n;
  report.mean_d_hm = sum_hm / n;
  report.distance_of_means = {std::abs(h_c - m_c) / n, std::abs(h_g - m_g) / n,
                              std::abs(h_r - m_r) / n};
  report.distance_of_means_hm = AggregateDistance(report.distance_of_means);
  return report;
}

CorpusReport PromptVariantAverage(std::span<const CorpusReport> reports) {
  if (reports.empty()) throw Error(ErrorCode::kEmptyCorpus, "no reports to average");
  CorpusReport out;
  out.system = reports.front().system;
  out.n = reports.front().n;
  out.threshold_id = reports.front().threshold_id;
  for (const auto& r : reports) {
    if (r.n != out.n) {
      throw Error(ErrorCode::kArityMismatch, "prompt variants cover different story counts (" +
                                                 std::to_string(out.n) + " vs " +
                                                 std::to_string(r.n) + ")");
    }
    out.mean_d_hm += r.mean_d_hm;
    out.mean_d_c += r.mean_d_c;
    out.mean_d_g += r.mean_d_g;
    out.mean_d_r += r.mean_d_r;
    out.distance_of_means.d_c += r.distance_of_means.d_c;
    out.distance_of_means.d_g += r.distance_of_means.d_g;
    out.distance_of_means.d_r += r.distance_of_means.d_r;
    out.distance_of_means_hm += r.distance_of_means_hm;
  }
  const double k = static_cast<double>(reports.size());
  out.mean_d_hm /= k;
  out.mean_d_c /= k;
  out.mean_d_g /= k;
  out.mean_d_r /= k;
  out.distance_of_means.d_c /= k;
  out.distance_of_means.d_g /= k;
  out.distance_of_means.d_r /= k;
  out.distance_of_means_hm /= k;
  return out;
}

}  // namespace storyeval
