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

#ifndef STORYEVAL_REPORT_HPP_
#define STORYEVAL_REPORT_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "storyeval/distance.hpp"

namespace storyeval {

struct ReportArtifacts {
  std::filesystem::path bars_csv;
  std::filesystem::path bars_svg;
  // Only when model sizes are configured for at least one system.
  std::optional<std::filesystem::path> size_csv;
};

// Grouped bars (d_c, d_g, d_r, d_hm per system) as CSV rows.
std::string GroupedBarsCsv(std::span<const CorpusReport> reports);

// Self-contained SVG: one group of four bars per system, no external assets.
std::string GroupedBarsSvg(std::span<const CorpusReport> reports);

std::string SizeVsDistanceCsv(std::span<const CorpusReport> reports,
                              const std::map<std::string, double>& model_sizes);

// Writes report/ inside a completed run directory. Throws
// Error(kIncompleteRun) when the run is missing files or has no systems.
ReportArtifacts RenderReport(const std::filesystem::path& run_dir);

}  // namespace storyeval

#endif  // STORYEVAL_REPORT_HPP_
