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

#include "storyeval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <boost/math/distributions/students_t.hpp>

#include "storyeval/errors.hpp"

namespace storyeval {
namespace {

struct Moments {
  double n = 0;
  double mean = 0;
  double var = 0;  // unbiased
};

Moments Describe(std::span<const double> xs) {
  Moments m;
  m.n = static_cast<double>(xs.size());
  m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / m.n;
  double ss = 0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.var = ss / (m.n - 1);
  return m;
}

void CheckSamples(std::span<const double> a, std::span<const double> b,
                  const Moments& ma, const Moments& mb) {
  if (a.size() < 2 || b.size() < 2) {
    throw Error(ErrorCode::kDegenerateSample, "each sample needs at least two values");
  }
  if (ma.var == 0 && mb.var == 0) {
    throw Error(ErrorCode::kDegenerateSample, "both samples have zero variance");
  }
}

TTestResult Finish(double diff, double se, double dof) {
  TTestResult r;
  r.dof = dof;
  r.t = diff / se;
  if (r.t == 0) {
    r.p = 1;
    return r;
  }
  boost::math::students_t dist(dof);
  r.p = std::min(1.0, 2 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t))));
  return r;
}

// Uniform integer in [0, bound) by rejection, independent of the standard
// library's distribution implementation.
std::uint64_t UniformBelow(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

TTestResult WelchTTest(std::span<const double> a, std::span<const double> b) {
  const Moments ma = a.size() > 1 ? Describe(a) : Moments{};
  const Moments mb = b.size() > 1 ? Describe(b) : Moments{};
  CheckSamples(a, b, ma, mb);
  const double va = ma.var / ma.n;
  const double vb = mb.var / mb.n;
  const double dof =
      (va + vb) * (va + vb) / (va * va / (ma.n - 1) + vb * vb / (mb.n - 1));
  return Finish(ma.mean - mb.mean, std::sqrt(va + vb), dof);
}

TTestResult StudentTTest(std::span<const double> a, std::span<const double> b) {
  const Moments ma = a.size() > 1 ? Describe(a) : Moments{};
  const Moments mb = b.size() > 1 ? Describe(b) : Moments{};
  CheckSamples(a, b, ma, mb);
  const double dof = ma.n + mb.n - 2;
  const double pooled = ((ma.n - 1) * ma.var + (mb.n - 1) * mb.var) / dof;
  return Finish(ma.mean - mb.mean, std::sqrt(pooled * (1 / ma.n + 1 / mb.n)), dof);
}

TTestResult TTest(std::span<const double> a, std::span<const double> b, TTestKind kind) {
  return kind == TTestKind::kWelch ? WelchTTest(a, b) : StudentTTest(a, b);
}

std::vector<std::size_t> AssignBins(std::span<const double> values, std::size_t bins) {
  std::vector<std::size_t> out(values.size(), 0);
  if (values.empty() || bins <= 1) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo;
  const double range = *hi - min;
  if (range <= 0) return out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double pos = (values[i] - min) / range * static_cast<double>(bins);
    out[i] = std::min(bins - 1, static_cast<std::size_t>(std::floor(pos)));
  }
  return out;
}

std::vector<std::size_t> AllocateProportional(std::span<const std::size_t> bin_counts,
                                              std::size_t n) {
  const std::size_t total = std::accumulate(bin_counts.begin(), bin_counts.end(), std::size_t{0});
  std::vector<std::size_t> quota(bin_counts.size(), 0);
  if (total == 0 || n == 0) return quota;
  std::vector<std::pair<std::size_t, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t b = 0; b < bin_counts.size(); ++b) {
    // Exact integer arithmetic: n * count = quota * total + remainder.
    const std::size_t scaled = n * bin_counts[b];
    quota[b] = scaled / total;
    assigned += quota[b];
    remainders.emplace_back(scaled % total, b);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++quota[remainders[k].second];
  return quota;
}

std::vector<std::string> SampleByDistance(const CorpusReport& report, std::size_t n,
                                          std::size_t bins, std::uint64_t seed) {
  if (n > report.per_story.size()) {
    throw Error(ErrorCode::kSampleTooLarge, "requested " + std::to_string(n) +
                                                " stories from a report of " +
                                                std::to_string(report.per_story.size()));
  }
  bins = std::max<std::size_t>(bins, 1);
  std::vector<const DistanceRecord*> records;
  for (const auto& r : report.per_story) records.push_back(&r);
  std::sort(records.begin(), records.end(), [](const auto* x, const auto* y) {
    return x->sequence_id < y->sequence_id;
  });
  std::vector<double> values;
  for (const auto* r : records) values.push_back(r->d_hm);
  const auto bin_of = AssignBins(values, bins);

  std::vector<std::vector<const DistanceRecord*>> members(bins);
  for (std::size_t i = 0; i < records.size(); ++i) members[bin_of[i]].push_back(records[i]);
  std::vector<std::size_t> counts;
  for (const auto& m : members) counts.push_back(m.size());
  const auto quota = AllocateProportional(counts, n);

  std::mt19937_64 rng(seed);
  std::vector<std::string> sample;
  for (std::size_t b = 0; b < bins; ++b) {
    auto& pool = members[b];
    for (std::size_t k = 0; k < quota[b]; ++k) {
      const std::size_t j = k + UniformBelow(rng, pool.size() - k);
      std::swap(pool[k], pool[j]);
      sample.push_back(pool[k]->sequence_id);
    }
  }
  return sample;
}

}  // namespace storyeval
