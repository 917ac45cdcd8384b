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

#include "storyeval/kernels.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "storyeval/coherence.hpp"
#include "storyeval/errors.hpp"

namespace storyeval::kernels {
namespace {

double RowMax(const double* np, std::span<const double> boxes, std::size_t dim) {
  double best = -std::numeric_limits<double>::infinity();
  const std::size_t n_box = boxes.size() / dim;
  for (std::size_t b = 0; b < n_box; ++b) {
    const double* box = boxes.data() + b * dim;
    double dot = 0;
    for (std::size_t k = 0; k < dim; ++k) dot += np[k] * box[k];
    best = std::max(best, dot);
  }
  return best;
}

void CheckShapes(std::span<const double> nps, std::span<const double> boxes, std::size_t dim,
                 std::span<double> out) {
  if (dim == 0 || nps.size() != out.size() * dim || boxes.size() % dim != 0) {
    throw Error(ErrorCode::kSchemaViolation, "similarity kernel shape mismatch");
  }
  if (boxes.empty() && !out.empty()) throw Error(ErrorCode::kNoBoxes, "no box embeddings");
}

std::vector<double> StoryMaxSims(const FeatureBundle& bundle) {
  std::vector<double> sims(bundle.np_features.size());
  if (sims.empty()) return sims;
  if (bundle.box_features.empty()) {
    throw Error(ErrorCode::kNoBoxes, "story '" + bundle.story_id + "' has no box features");
  }
  const std::size_t dim = bundle.embedding_dim;
  std::vector<double> boxes;
  boxes.reserve(bundle.box_features.size() * dim);
  for (const auto& b : bundle.box_features) {
    if (b.embedding.size() != dim) throw Error(ErrorCode::kSchemaViolation, "box dimension");
    boxes.insert(boxes.end(), b.embedding.begin(), b.embedding.end());
  }
  for (std::size_t i = 0; i < sims.size(); ++i) {
    const auto& e = bundle.np_features[i].embedding;
    if (e.size() != dim) throw Error(ErrorCode::kSchemaViolation, "np dimension");
    sims[i] = RowMax(e.data(), boxes, dim);
  }
  return sims;
}

MetricScores ScoreOne(const StoryInput& in, const std::vector<double>& sims,
                      const CorpusThreshold& threshold, const ScoringOptions& options) {
  MetricScores s;
  s.threshold_id = threshold.threshold_id;
  const auto coherence = CoherenceScore(MakeCoherenceInput(*in.story, *in.bundle));
  s.coherence = coherence.score;
  s.coherence_degenerate = coherence.degenerate;
  const auto grounding = GroundingFromSimilarities(*in.bundle, sims, threshold);
  s.grounding = grounding.final;
  s.grounding_degenerate = grounding.degenerate;
  s.repetition = RepetitionScore(*in.story, options.repetition).final;
  return s;
}

// Captures the first exception thrown inside a parallel region.
class FirstError {
 public:
  void Capture() {
    std::lock_guard lock(mu_);
    if (!error_) error_ = std::current_exception();
  }
  void Rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mu_;
  std::exception_ptr error_;
};

}  // namespace

void MaxAlignmentSerial(std::span<const double> nps, std::span<const double> boxes,
                        std::size_t dim, std::span<double> out) {
  CheckShapes(nps, boxes, dim, out);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = RowMax(nps.data() + i * dim, boxes, dim);
}

void MaxAlignmentParallel(std::span<const double> nps, std::span<const double> boxes,
                          std::size_t dim, std::span<double> out) {
  CheckShapes(nps, boxes, dim, out);
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = RowMax(nps.data() + i * dim, boxes, dim);
  }
}

std::vector<std::vector<double>> MaxSimilaritiesSerial(std::span<const StoryInput> inputs) {
  std::vector<std::vector<double>> out;
  out.reserve(inputs.size());
  for (const auto& in : inputs) out.push_back(StoryMaxSims(*in.bundle));
  return out;
}

std::vector<std::vector<double>> MaxSimilaritiesParallel(std::span<const StoryInput> inputs) {
  std::vector<std::vector<double>> out(inputs.size());
  FirstError error;
  const auto n = static_cast<std::ptrdiff_t>(inputs.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = StoryMaxSims(*inputs[static_cast<std::size_t>(i)].bundle);
    } catch (...) {
      error.Capture();
    }
  }
  error.Rethrow();
  return out;
}

CorpusThreshold ReduceThreshold(const std::vector<std::vector<double>>& max_sims,
                                std::span<const std::size_t> selected,
                                std::string threshold_id, std::string source) {
  std::vector<double> flat;
  for (std::size_t i : selected) flat.insert(flat.end(), max_sims[i].begin(), max_sims[i].end());
  return ComputeCorpusThreshold(flat, std::move(threshold_id), std::move(source));
}

std::vector<MetricScores> ScoreStoriesSerial(std::span<const StoryInput> inputs,
                                             const std::vector<std::vector<double>>& max_sims,
                                             const CorpusThreshold& threshold,
                                             const ScoringOptions& options) {
  std::vector<MetricScores> out;
  out.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    out.push_back(ScoreOne(inputs[i], max_sims[i], threshold, options));
  }
  return out;
}

std::vector<MetricScores> ScoreStoriesParallel(std::span<const StoryInput> inputs,
                                               const std::vector<std::vector<double>>& max_sims,
                                               const CorpusThreshold& threshold,
                                               const ScoringOptions& options) {
  std::vector<MetricScores> out(inputs.size());
  FirstError error;
  const auto n = static_cast<std::ptrdiff_t>(inputs.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = ScoreOne(inputs[k], max_sims[k], threshold, options);
    } catch (...) {
      error.Capture();
    }
  }
  error.Rethrow();
  return out;
}

void SetThreads(int threads) {
#ifdef _OPENMP
  static const int default_threads = omp_get_max_threads();
  omp_set_num_threads(threads > 0 ? threads : default_threads);
#else
  (void)threads;
#endif
}

int MaxThreads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace storyeval::kernels
