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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "storyeval/coherence.hpp"
#include "storyeval/distance.hpp"
#include "storyeval/grounding.hpp"
#include "storyeval/manifest.hpp"
#include "storyeval/repetition.hpp"
#include "storyeval/run.hpp"
#include "storyeval/stats.hpp"
#include "storyeval/util.hpp"
#include "support/campfire.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"
#include "support/tempdir.hpp"

using namespace storyeval;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

void Fail(Outcome& o, const std::string& why) {
  if (o.pass) o.detail = why;
  o.pass = false;
}

MetricScores Scores(double c, double g, double r) {
  MetricScores s;
  s.coherence = c;
  s.grounding = g;
  s.repetition = r;
  s.threshold_id = "t";
  return s;
}

Outcome DistanceArithmetic() {
  const auto start = Clock::now();
  const std::map<std::string_view, double> expected = {
      {"LLaVA", 0.164}, {"TAPM", 0.367 / 3}, {"GLAC Net", 0.208},
      {"AREL", 0.438}, {"BLIP-2", 0.874 / 3}};
  Outcome o;
  std::string values;
  const auto human = Scores(campfire::kHuman.c, campfire::kHuman.g, campfire::kHuman.r);
  for (const auto& m : campfire::kModels) {
    const double d = AggregateDistance(ComputeMetricDistances(human, Scores(m.c, m.g, m.r)));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%s=%.7f", values.empty() ? "" : " ",
                  std::string(m.system).c_str(), d);
    values += buf;
    if (!(std::abs(d - expected.at(m.system)) <= 1e-9)) Fail(o, std::string(m.system) + " off");
  }
  const double secs = Seconds(start);
  if (secs >= 1.0) Fail(o, "took " + std::to_string(secs) + " s");
  if (o.pass) o.detail = values;
  return o;
}

Outcome RepetitionDeskCheck() {
  Outcome o;
  auto r = [](std::string_view system) {
    const Story s = MakeStory("s", "q", Author::System(std::string(system)),
                              std::string(campfire::Model(system).text));
    return RepetitionScore(s).final;
  };
  const double glac = r("GLAC Net");
  const double arel = r("AREL");
  char buf[128];
  std::snprintf(buf, sizeof buf, "GLAC Net R=%.3f (target 0.960), AREL R=%.3f (target 0.670)",
                glac, arel);
  o.detail = buf;
  if (!(std::abs(glac - 0.960) <= 0.05)) Fail(o, std::string("GLAC Net out of band: ") + buf);
  if (!(std::abs(arel - 0.670) <= 0.05)) Fail(o, std::string("AREL out of band: ") + buf);
  return o;
}

void CheckBoundsAndSelfDistance(Outcome& o, std::mt19937_64& rng) {
  synthetic::Options opt;
  opt.items = 200;
  opt.max_sentences = 6;
  opt.max_words = 16;
  const auto corpus = synthetic::MakeCorpus(opt, rng());
  for (const auto& item : corpus.manifest.items) {
    std::vector<const Story*> stories = {&item.human};
    for (const auto& [n, s] : item.systems) stories.push_back(&s);
    for (const Story* s : stories) {
      const double rr = RepetitionScore(*s).final;
      const double c = CoherenceScore(MakeCoherenceInput(*s, *corpus.bundles.Find(s->story_id))).score;
      if (!(rr >= 0 && rr <= 1)) Fail(o, "R out of [0,1]");
      if (!(c >= 0 && c <= 1)) Fail(o, "C out of [0,1]");
    }
  }
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 10000; ++i) {
    const auto x = Scores(u(rng), u(rng), u(rng));
    if (AggregateDistance(ComputeMetricDistances(x, x)) != 0.0) Fail(o, "d_HM(x,x) != 0");
  }
}

void CheckJaccardOracle(Outcome& o, std::mt19937_64& rng) {
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "the", "was", "fire"};
  for (int c = 0; c < 10000; ++c) {
    std::vector<std::vector<std::string>> lists(1 + rng() % 4);
    Story st;
    for (auto& t : lists) {
      t.resize(rng() % 13);
      for (auto& w : t) w = vocab[rng() % vocab.size()];
      Sentence s;
      s.tokens = t;
      st.sentences.push_back(s);
    }
    const auto ref = oracle::Score(lists);
    const auto got = RepetitionScore(st);
    if (got.inter_scores.size() != ref.inter.size() || got.intra_scores.size() != ref.intra.size() ||
        !(std::abs(got.final - ref.component_sum) <= 1e-12)) {
      Fail(o, "repetition differs from the brute-force oracle");
      return;
    }
    RepetitionOptions pooled;
    pooled.combine = RepetitionCombine::kPooled;
    if (!(std::abs(RepetitionScore(st, pooled).final - ref.pooled) <= 1e-12)) {
      Fail(o, "pooled repetition differs from the brute-force oracle");
      return;
    }
  }
}

void CheckGrounding(Outcome& o, std::mt19937_64& rng) {
  synthetic::Options opt;
  opt.items = 150;
  opt.systems = {};
  const auto corpus = synthetic::MakeCorpus(opt, rng());
  std::vector<double> all;
  for (const auto& item : corpus.manifest.items) {
    const auto s = NpMaxSimilarities(*corpus.bundles.Find(item.human.story_id));
    all.insert(all.end(), s.begin(), s.end());
  }
  const auto t = ComputeCorpusThreshold(all, "t", "human");
  double total = 0;
  std::size_t count = 0;
  std::vector<std::pair<double, std::size_t>> base, scaled;
  for (std::size_t i = 0; i < corpus.manifest.items.size(); ++i) {
    const auto& item = corpus.manifest.items[i];
    FeatureBundle b = *corpus.bundles.Find(item.human.story_id);
    base.emplace_back(GroundingScore(b, item.sequence, t).final, i);
    for (auto& f : b.np_features) f.concreteness_weight *= 0.37;
    scaled.emplace_back(GroundingScore(b, item.sequence, t).final, i);
    for (auto& f : b.np_features) f.concreteness_weight = 1.0;
    for (const auto& np : GroundingScore(b, item.sequence, t).per_np) total += np.contribution;
    count += b.np_features.size();
  }
  if (!(std::abs(total / count) <= 1e-10)) Fail(o, "threshold-centred mean is not zero");
  std::sort(base.begin(), base.end());
  std::sort(scaled.begin(), scaled.end());
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (base[i].second != scaled[i].second) Fail(o, "weight rescaling changed the G ranking");
  }
}

void CheckCorpusMeans(Outcome& o, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0, 1), g(-1, 1.7);
  for (int c = 0; c < 100; ++c) {
    std::vector<ScoredPair> pairs(1 + rng() % 500);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      pairs[i] = {std::to_string(i), Scores(unit(rng), g(rng), unit(rng)),
                  Scores(unit(rng), g(rng), unit(rng))};
    }
    const auto r = CorpusDistance("m", pairs);
    long double sum = 0;
    for (const auto& rec : r.per_story) sum += rec.d_hm;
    if (!(std::abs(static_cast<double>(sum / pairs.size()) - r.mean_d_hm) <= 1e-12)) {
      Fail(o, "corpus mean disagrees with the recomputed mean");
    }
  }
}

void CheckSampling(Outcome& o, std::mt19937_64& rng) {
  std::gamma_distribution<double> skew(2.0, 0.1);
  for (int c = 0; c < 300; ++c) {
    CorpusReport report;
    report.n = 5 + rng() % 300;
    for (std::size_t i = 0; i < report.n; ++i) {
      const double d = skew(rng);
      report.per_story.push_back({"s" + std::to_string(i), "m", d, 0, 0, d});
    }
    const std::size_t bins = 1 + rng() % 12;
    const std::size_t n = rng() % (report.n + 1);
    const auto sample = SampleByDistance(report, n, bins, rng());
    double lo = 1e300, hi = -1e300;
    for (const auto& r : report.per_story) {
      lo = std::min(lo, r.d_hm);
      hi = std::max(hi, r.d_hm);
    }
    auto bin_of = [&](double v) {
      return hi == lo ? std::size_t{0}
                      : std::min(bins - 1, std::size_t(std::floor((v - lo) / (hi - lo) * bins)));
    };
    std::map<std::string, double> by_id;
    std::vector<double> mass(bins, 0), got(bins, 0);
    for (const auto& r : report.per_story) {
      by_id[r.sequence_id] = r.d_hm;
      mass[bin_of(r.d_hm)] += 1;
    }
    for (const auto& id : sample) got[bin_of(by_id.at(id))] += 1;
    for (std::size_t b = 0; b < bins; ++b) {
      if (!(std::abs(got[b] - double(n) * mass[b] / report.n) <= 1.0)) {
        Fail(o, "stratified sample deviates by more than one in a bin");
      }
    }
  }
}

void CheckWelch(Outcome& o) {
  struct Ref {
    std::vector<double> a, b;
    double t, p, dof;
  };
  const std::vector<Ref> refs = {
      {{1, 2, 3, 4, 5}, {2, 3, 4, 5, 6}, -1.0, 0.34659350708733416, 8.0},
      {{27.5, 21.0, 19.0, 23.6, 17.0, 17.9, 16.9, 20.1, 21.9, 22.6, 23.1, 19.6, 19.0, 21.7, 21.4},
       {27.1, 22.0, 20.8, 23.4, 23.4, 23.5, 25.8, 22.0, 24.8, 20.2, 21.9, 22.1, 22.9, 20.5, 24.4},
       -2.455356398286006, 0.021378001462866985, 24.988529290231416},
      {{0.31, 0.12, 0.45, 0.22, 0.39, 0.28, 0.51},
       {0.19, 0.21, 0.2, 0.23, 0.18, 0.22, 0.2, 0.21, 0.19, 0.24, 0.17}, 2.3738811891289187,
       0.05396859658156727, 6.187164289553313},
      {{1.5, 2.5}, {10.0, 12.0, 14.5}, -7.2908945169398, 0.009308677415500025, 2.523821787277878},
  };
  for (const auto& r : refs) {
    const auto w = WelchTTest(r.a, r.b);
    if (!(std::abs(w.t - r.t) <= 1e-6 && std::abs(w.p - r.p) <= 1e-6 &&
          std::abs(w.dof - r.dof) <= 1e-6)) {
      Fail(o, "Welch t differs from the reference fixtures");
    }
  }
}

Outcome PropertySuites() {
  const auto start = Clock::now();
  Outcome o;
  std::mt19937_64 rng(20261016);
  CheckBoundsAndSelfDistance(o, rng);
  CheckJaccardOracle(o, rng);
  CheckGrounding(o, rng);
  CheckCorpusMeans(o, rng);
  CheckSampling(o, rng);
  CheckWelch(o);
  const double secs = Seconds(start);
  if (secs >= 60.0) Fail(o, "took " + std::to_string(secs) + " s");
  if (o.pass) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "all properties hold (%.2f s)", secs);
    o.detail = buf;
  }
  return o;
}

synthetic::Corpus LargerCorpus(std::uint64_t seed) {
  synthetic::Options opt;
  opt.items = 120;
  opt.dataset = "vist";
  opt.systems = {"alpha", "beta", "gamma"};
  return synthetic::MakeCorpus(opt, seed);
}

Outcome Determinism() {
  Outcome o;
  testing::TempDir tmp("acceptance-determinism");
  const Manifest fixture = LoadManifest(testing::Fixture("manifest.jsonl"));
  BundleIndex fixture_bundles;
  fixture_bundles.AddFile(testing::Fixture("bundles.jsonl"));
  const auto corpus = LargerCorpus(1);
  RunConfig config;
  config.seed = 1234;
  std::size_t compared = 0;
  auto compare = [&](const Manifest& m, const BundleIndex& b, const std::string& tag) {
    RunEvaluation(m, b, {}, config, tmp / (tag + "-1"));
    RunEvaluation(m, b, {}, config, tmp / (tag + "-2"));
    for (const auto& entry : std::filesystem::directory_iterator(tmp / (tag + "-1"))) {
      if (entry.path().extension() != ".csv") continue;
      const auto name = entry.path().filename().string();
      ++compared;
      if (ReadTextFile(entry.path()) != ReadTextFile(tmp / (tag + "-2") / name)) {
        Fail(o, tag + "/" + name + " differs between runs");
      }
    }
  };
  compare(fixture, fixture_bundles, "fixture");
  compare(corpus.manifest, corpus.bundles, "synthetic");
  if (o.pass) o.detail = std::to_string(compared) + " report CSVs byte-identical across reruns";
  return o;
}

Outcome HumanControl() {
  Outcome o;
  testing::TempDir tmp("acceptance-control");
  const std::vector<std::string> control = {std::string(kHumanControlSystem)};
  const Manifest fixture = LoadManifest(testing::Fixture("manifest.jsonl"));
  BundleIndex fixture_bundles;
  fixture_bundles.AddFile(testing::Fixture("bundles.jsonl"));
  std::size_t stories = 0;
  auto check = [&](const Manifest& m, const BundleIndex& b, const std::string& tag) {
    const RunResult r = RunEvaluation(m, b, control, {}, tmp / tag);
    if (r.reports.size() != 1 || r.reports[0].mean_d_hm != 0.0) {
      Fail(o, tag + ": mean d_HM is not exactly 0");
    }
    stories += r.reports.empty() ? 0 : r.reports[0].n;
  };
  check(fixture, fixture_bundles, "fixture");
  for (std::uint64_t seed : {2u, 3u, 4u}) {
    const auto corpus = LargerCorpus(seed);
    check(corpus.manifest, corpus.bundles, "synthetic" + std::to_string(seed));
  }
  if (o.pass) o.detail = "mean d_HM = 0 exactly over " + std::to_string(stories) + " stories";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"distance arithmetic from reference metric values", DistanceArithmetic},
      {"repetition desk check on verbatim stories", RepetitionDeskCheck},
      {"property suites on synthetic bundles", PropertySuites},
      {"determinism of report CSVs", Determinism},
      {"human-vs-human control", HumanControl},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}
