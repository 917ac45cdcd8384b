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

#include "storyeval/features.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "storyeval/errors.hpp"

namespace storyeval {
namespace {

double Norm(const std::vector<double>& v) {
  double sum = 0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

}  // namespace

bool ValidationReport::Has(const std::string& kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.kind == kind; });
}

ValidationReport ValidateBundle(const Story& story, const FeatureBundle& bundle) {
  if (story.story_id != bundle.story_id) {
    throw Error(ErrorCode::kIdMismatch, "bundle '" + bundle.story_id +
                                            "' does not belong to story '" +
                                            story.story_id + "'");
  }
  ValidationReport report;
  auto add = [&](std::string kind, std::string detail) {
    report.violations.push_back({std::move(kind), std::move(detail)});
  };

  for (const auto& problem : CheckStory(story)) add("story structure", problem);

  auto check_embedding = [&](const std::vector<double>& e, const std::string& what) {
    if (e.size() != bundle.embedding_dim) {
      add("dimension mismatch", what + " has dimension " + std::to_string(e.size()) +
                                    ", expected " + std::to_string(bundle.embedding_dim));
      return;
    }
    double norm = Norm(e);
    if (!(std::abs(norm - 1.0) <= kUnitNormTolerance)) {
      add("non-unit embedding", what + " has norm " + std::to_string(norm));
    }
  };

  std::set<std::size_t> seen;
  const std::size_t nps = story.np_count();
  for (const auto& f : bundle.np_features) {
    const std::string what = "np " + std::to_string(f.np_index);
    check_embedding(f.embedding, what);
    if (!(f.concreteness_weight >= 0.0 && f.concreteness_weight <= 1.0)) {
      add("weight range", what + " weight outside [0,1]");
    }
    if (f.np_index >= nps || !seen.insert(f.np_index).second) {
      add("np bijection", what + " is out of range or duplicated");
    }
  }
  if (seen.size() != nps) {
    add("np bijection", "story has " + std::to_string(nps) + " NP spans, bundle covers " +
                            std::to_string(seen.size()));
  }
  for (const auto& f : bundle.box_features) {
    check_embedding(f.embedding,
                    "box " + f.image_id + "#" + std::to_string(f.box_index));
  }

  const std::size_t n = story.sentences.size();
  const std::size_t expected = n > 0 ? n - 1 : 0;
  if (bundle.follow_probs.size() != expected) {
    add("prob arity", "expected " + std::to_string(expected) + " follow probabilities, got " +
                          std::to_string(bundle.follow_probs.size()));
  }
  for (double p : bundle.follow_probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      add("prob range", "follow probability " + std::to_string(p) + " outside [0,1]");
    }
  }
  return report;
}

}  // namespace storyeval
