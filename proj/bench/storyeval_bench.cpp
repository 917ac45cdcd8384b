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

// Serial reference kernels vs their OpenMP twins on a synthetic corpus.

#include <chrono>
#include <cstdio>
#include <vector>

#include <CLI11.hpp>

#include "storyeval/kernels.hpp"
#include "../tests/support/synthetic.hpp"

using namespace storyeval;

namespace {

template <typename F>
double BestOf(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"storyeval kernel benchmark"};
  synthetic::Options opt;
  opt.items = 2000;
  opt.dim = 512;
  opt.boxes_per_image = 4;
  opt.max_words = 14;
  int reps = 3, threads = 0;
  app.add_option("--items", opt.items);
  app.add_option("--dim", opt.dim);
  app.add_option("--boxes", opt.boxes_per_image, "Boxes per image");
  app.add_option("--reps", reps);
  app.add_option("--threads", threads);
  CLI11_PARSE(app, argc, argv);
  kernels::SetThreads(threads);

  const auto corpus = synthetic::MakeCorpus(opt, 42);
  std::vector<kernels::StoryInput> inputs;
  std::vector<std::size_t> humans;
  for (const auto& item : corpus.manifest.items) {
    humans.push_back(inputs.size());
    inputs.push_back({&item.human, corpus.bundles.Find(item.human.story_id)});
    for (const auto& [name, story] : item.systems) {
      inputs.push_back({&story, corpus.bundles.Find(story.story_id)});
    }
  }

  std::vector<std::vector<double>> sims_s, sims_p;
  const double t_sims_s = BestOf(reps, [&] { sims_s = kernels::MaxSimilaritiesSerial(inputs); });
  const double t_sims_p = BestOf(reps, [&] { sims_p = kernels::MaxSimilaritiesParallel(inputs); });
  const auto tau = kernels::ReduceThreshold(sims_s, humans, "bench", "human");
  kernels::ScoringOptions scoring;
  std::vector<MetricScores> sc_s, sc_p;
  const double t_sc_s = BestOf(reps, [&] { sc_s = kernels::ScoreStoriesSerial(inputs, sims_s, tau, scoring); });
  const double t_sc_p = BestOf(reps, [&] { sc_p = kernels::ScoreStoriesParallel(inputs, sims_s, tau, scoring); });

  std::printf("stories=%zu dim=%zu threads=%d\n", inputs.size(), opt.dim, kernels::MaxThreads());
  std::printf("%-18s %12s %12s %8s %s\n", "kernel", "serial_ms", "parallel_ms", "speedup", "identical");
  std::printf("%-18s %12.3f %12.3f %8.2f %s\n", "max_similarities", t_sims_s, t_sims_p,
              t_sims_s / t_sims_p, sims_s == sims_p ? "yes" : "NO");
  std::printf("%-18s %12.3f %12.3f %8.2f %s\n", "score_stories", t_sc_s, t_sc_p,
              t_sc_s / t_sc_p, sc_s == sc_p ? "yes" : "NO");
  return sims_s == sims_p && sc_s == sc_p ? 0 : 1;
}
