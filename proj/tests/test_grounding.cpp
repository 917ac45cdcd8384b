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

#include <doctest.h>

#include <algorithm>
#include <random>

#include "storyeval/errors.hpp"
#include "storyeval/grounding.hpp"
#include "support/synthetic.hpp"

using namespace storyeval;

namespace {

std::vector<double> Axis(std::size_t i, double scale = 1.0) {
  std::vector<double> v(4, 0.0);
  v[i] = scale;
  return v;
}

ImageSequence OneImage(std::size_t boxes) {
  ImageSequence seq{"q", {{"img", "img.jpg", 0, 0, true, {}}}};
  seq.images[0].boxes.resize(boxes, BoundingBox{0, 0, 1, 1});
  return seq;
}

ErrorCode CodeOf(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error");
  return ErrorCode::kIoError;
}

}  // namespace

TEST_CASE("np_alignment examples") {
  const std::vector<BoxFeature> one = {{"img", 0, Axis(0)}};
  CHECK(NpAlignment(Axis(0), one) == 1.0);
  const std::vector<BoxFeature> two = {{"img", 0, Axis(1)}, {"img", 1, Axis(0, -1.0)}};
  CHECK(NpAlignment(Axis(0), two) == 0.0);
  const std::vector<BoxFeature> tilted = {{"img", 0, {0.6, 0.8, 0.0, 0.0}}};
  CHECK(NpAlignment(Axis(0), tilted) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(CodeOf([] { NpAlignment(Axis(0), {}); }) == ErrorCode::kNoBoxes);
}

TEST_CASE("corpus_threshold examples") {
  CHECK(ComputeCorpusThreshold(std::vector<double>{0.5}).tau == 0.5);
  const auto t = ComputeCorpusThreshold(std::vector<double>{0.2, 0.4, 0.6}, "t1", "human");
  CHECK(t.tau == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(t.np_count == 3);
  CHECK(t.threshold_id == "t1");
  CHECK(ComputeCorpusThreshold(std::vector<double>(7, 0.37)).tau == doctest::Approx(0.37));
  CHECK(CodeOf([] { ComputeCorpusThreshold(std::vector<double>{}); }) == ErrorCode::kEmptyCorpus);
}

TEST_CASE("grounding_score examples") {
  const CorpusThreshold tau06{"t", 0.6, 10, "human"};
  FeatureBundle b;
  b.story_id = "s";
  b.embedding_dim = 4;
  b.box_features = {{"img", 0, Axis(0)}};

  SUBCASE("NP at the threshold contributes nothing") {
    b.np_features = {{0, {0.6, 0.8, 0, 0}, 0.9}};
    const auto g = GroundingScore(b, OneImage(1), tau06);
    CHECK(g.final == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(g.per_np.size() == 1);
  }
  SUBCASE("two NPs, hand arithmetic") {
    const double s9 = std::sqrt(1 - 0.81);
    const double s5 = std::sqrt(1 - 0.25);
    b.np_features = {{0, {0.9, s9, 0, 0}, 1.0}, {1, {0.5, 0, s5, 0}, 0.5}};
    const auto g = GroundingScore(b, OneImage(1), tau06);
    CHECK(g.final == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(g.per_np[0].contribution == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(g.per_np[1].contribution == doctest::Approx(-0.05).epsilon(1e-12));
  }
  SUBCASE("replay of a reference human-story grounding value") {
    const std::vector<double> tilted = {0.6, 0, 0.8, 0};
    for (double w : {0.97, 0.94, 0.88, 0.8525, 0.8}) {
      b.np_features.push_back({b.np_features.size(), Axis(0), w});
    }
    for (double w : {0.7, 0.8}) b.np_features.push_back({b.np_features.size(), tilted, w});
    const auto g = GroundingScore(b, OneImage(1), CorpusThreshold{"t", -0.2, 100, "human"});
    CHECK(g.final == doctest::Approx(0.933).epsilon(1e-12));
  }
  SUBCASE("no NPs is degenerate") {
    const auto g = GroundingScore(b, OneImage(1), tau06);
    CHECK(g.final == 0.0);
    CHECK(g.degenerate);
  }
  SUBCASE("scores above 1 are not clamped") {
    b.np_features = {{0, Axis(0), 1.0}};
    CHECK(GroundingScore(b, OneImage(1), CorpusThreshold{"t", -0.5, 1, ""}).final == 1.5);
  }
  SUBCASE("errors") {
    b.np_features = {{0, Axis(0), 1.0}};
    CHECK(CodeOf([&] { GroundingScore(b, OneImage(1), std::nullopt); }) ==
          ErrorCode::kThresholdMissing);
    FeatureBundle nobox = b;
    nobox.box_features.clear();
    CHECK(CodeOf([&] { GroundingScore(nobox, OneImage(0), tau06); }) == ErrorCode::kNoBoxes);
    FeatureBundle stray = b;
    stray.box_features[0].image_id = "elsewhere";
    CHECK(CodeOf([&] { GroundingScore(stray, OneImage(1), tau06); }) == ErrorCode::kIdMismatch);
    FeatureBundle past = b;
    past.box_features[0].box_index = 3;
    CHECK(CodeOf([&] { GroundingScore(past, OneImage(1), tau06); }) == ErrorCode::kIdMismatch);
  }
}

namespace {

struct Scored {
  synthetic::Corpus corpus;
  std::vector<const FeatureBundle*> human;
  std::vector<const ImageSequence*> sequences;
};

Scored HumanCorpus(std::uint64_t seed) {
  synthetic::Options opt;
  opt.items = 60;
  opt.systems = {};
  Scored s{synthetic::MakeCorpus(opt, seed), {}, {}};
  for (const auto& item : s.corpus.manifest.items) {
    s.human.push_back(s.corpus.bundles.Find(item.human.story_id));
    s.sequences.push_back(&item.sequence);
  }
  return s;
}

}  // namespace

TEST_CASE("threshold centering: unweighted contributions average to zero") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    Scored s = HumanCorpus(seed);
    std::vector<double> all;
    for (const auto* b : s.human) {
      const auto sims = NpMaxSimilarities(*b);
      all.insert(all.end(), sims.begin(), sims.end());
    }
    const CorpusThreshold t = ComputeCorpusThreshold(all, "t", "human");
    double total = 0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < s.human.size(); ++i) {
      FeatureBundle unweighted = *s.human[i];
      for (auto& f : unweighted.np_features) f.concreteness_weight = 1.0;
      const auto g = GroundingScore(unweighted, *s.sequences[i], t);
      for (const auto& np : g.per_np) total += np.contribution;
      count += g.per_np.size();
    }
    CHECK(count == t.np_count);
    CHECK(std::abs(total / count) <= 1e-10);
  }
}

TEST_CASE("global weight rescaling scales G and keeps the ranking") {
  Scored s = HumanCorpus(42);
  const CorpusThreshold t{"t", 0.05, 1, "human"};
  for (double k : {0.5, 0.25, 0.9}) {
    std::vector<std::pair<double, std::size_t>> base, scaled;
    for (std::size_t i = 0; i < s.human.size(); ++i) {
      FeatureBundle b = *s.human[i];
      const double g = GroundingScore(b, *s.sequences[i], t).final;
      for (auto& f : b.np_features) f.concreteness_weight *= k;
      const double gk = GroundingScore(b, *s.sequences[i], t).final;
      CHECK(gk == doctest::Approx(k * g).epsilon(1e-12));
      base.emplace_back(g, i);
      scaled.emplace_back(gk, i);
    }
    std::sort(base.begin(), base.end());
    std::sort(scaled.begin(), scaled.end());
    for (std::size_t i = 0; i < base.size(); ++i) CHECK(base[i].second == scaled[i].second);
  }
}

TEST_CASE("G is invariant to NP and box order") {
  Scored s = HumanCorpus(9);
  std::mt19937_64 rng(9);
  const CorpusThreshold t{"t", 0.1, 1, "human"};
  for (std::size_t i = 0; i < s.human.size(); ++i) {
    FeatureBundle b = *s.human[i];
    const double g = GroundingScore(b, *s.sequences[i], t).final;
    std::shuffle(b.np_features.begin(), b.np_features.end(), rng);
    std::shuffle(b.box_features.begin(), b.box_features.end(), rng);
    CHECK(GroundingScore(b, *s.sequences[i], t).final == doctest::Approx(g).epsilon(1e-12));
  }
}
