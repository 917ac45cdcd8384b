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

#ifndef STORYEVAL_STATS_HPP_
#define STORYEVAL_STATS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "storyeval/distance.hpp"

namespace storyeval {

struct TTestResult {
  double t = 0;
  double p = 1;  // two-sided
  double dof = 0;
};

enum class TTestKind { kWelch, kStudent };

// Unequal-variance t test with Welch–Satterthwaite degrees of freedom.
// Throws Error(kDegenerateSample) when a sample has fewer than two values or
// both samples have zero variance.
TTestResult WelchTTest(std::span<const double> a, std::span<const double> b);

// Pooled-variance t test, same error contract.
TTestResult StudentTTest(std::span<const double> a, std::span<const double> b);

TTestResult TTest(std::span<const double> a, std::span<const double> b, TTestKind kind);

inline constexpr std::size_t kDefaultSampleBins = 10;

// Equal-width bin index of every value over [min, max]; the maximum falls in
// the last bin. All values land in bin 0 when min == max.
std::vector<std::size_t> AssignBins(std::span<const double> values, std::size_t bins);

// Per-bin quotas summing to n: floor(n * count / total) plus one extra slot
// for the largest remainders (ties to the lower bin).
std::vector<std::size_t> AllocateProportional(std::span<const std::size_t> bin_counts,
                                              std::size_t n);

// Stratified sample of sequence ids following the report's d_hm histogram;
// uniform without replacement inside each bin. Deterministic for a seed.
// Throws Error(kSampleTooLarge) when n > report.n.
std::vector<std::string> SampleByDistance(const CorpusReport& report, std::size_t n,
                                          std::size_t bins, std::uint64_t seed);

}  // namespace storyeval

#endif  // STORYEVAL_STATS_HPP_
