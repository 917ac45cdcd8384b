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

#include "storyeval/report.hpp"

#include <algorithm>
#include <cstdio>

#include "storyeval/errors.hpp"
#include "storyeval/run.hpp"
#include "storyeval/util.hpp"

namespace storyeval {
namespace fs = std::filesystem;

namespace {

struct Series {
  const char* name;
  const char* color;
  double CorpusReport::*field;
};

constexpr Series kSeries[] = {
    {"d_c", "#4e79a7", &CorpusReport::mean_d_c},
    {"d_g", "#f28e2b", &CorpusReport::mean_d_g},
    {"d_r", "#59a14f", &CorpusReport::mean_d_r},
    {"d_hm", "#e15759", &CorpusReport::mean_d_hm},
};

std::string Fixed(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string XmlEscape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string GroupedBarsCsv(std::span<const CorpusReport> reports) {
  std::string out = "system,n,d_c,d_g,d_r,d_hm\n";
  for (const auto& r : reports) {
    out += CsvRow({r.system, std::to_string(r.n), FormatDouble(r.mean_d_c),
                   FormatDouble(r.mean_d_g), FormatDouble(r.mean_d_r), FormatDouble(r.mean_d_hm)});
  }
  return out;
}

std::string GroupedBarsSvg(std::span<const CorpusReport> reports) {
  constexpr double kBar = 18, kGap = 30, kLeft = 60, kTop = 40, kPlotH = 240, kBottom = 60;
  const double group_w = 4 * kBar + kGap;
  const double width = kLeft + group_w * static_cast<double>(reports.size()) + kGap;
  const double height = kTop + kPlotH + kBottom;
  double ymax = 0.05;
  for (const auto& r : reports) {
    for (const auto& s : kSeries) ymax = std::max(ymax, r.*(s.field));
  }
  ymax *= 1.1;
  auto y_of = [&](double v) { return kTop + kPlotH * (1.0 - v / ymax); };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + Fixed(width, 0) +
                    "\" height=\"" + Fixed(height, 0) + "\" viewBox=\"0 0 " + Fixed(width, 0) +
                    " " + Fixed(height, 0) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<title>Human-model distance per system</title>\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + Fixed(width, 0) + "\" height=\"" + Fixed(height, 0) +
         "\" fill=\"#ffffff\"/>\n";
  svg += "<line x1=\"" + Fixed(kLeft, 0) + "\" y1=\"" + Fixed(kTop + kPlotH, 1) + "\" x2=\"" +
         Fixed(width - 10, 0) + "\" y2=\"" + Fixed(kTop + kPlotH, 1) + "\" stroke=\"#333\"/>\n";
  svg += "<line x1=\"" + Fixed(kLeft, 0) + "\" y1=\"" + Fixed(kTop, 0) + "\" x2=\"" +
         Fixed(kLeft, 0) + "\" y2=\"" + Fixed(kTop + kPlotH, 1) + "\" stroke=\"#333\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double v = ymax * tick / 4.0;
    svg += "<text x=\"" + Fixed(kLeft - 6, 0) + "\" y=\"" + Fixed(y_of(v) + 4, 1) +
           "\" text-anchor=\"end\">" + Fixed(v, 2) + "</text>\n";
  }
  for (std::size_t g = 0; g < reports.size(); ++g) {
    const auto& r = reports[g];
    const double x0 = kLeft + kGap + group_w * static_cast<double>(g);
    svg += "<g class=\"system\" data-system=\"" + XmlEscape(r.system) + "\">\n";
    for (std::size_t s = 0; s < std::size(kSeries); ++s) {
      const double v = r.*(kSeries[s].field);
      const double x = x0 + kBar * static_cast<double>(s);
      svg += "  <rect class=\"bar\" data-metric=\"" + std::string(kSeries[s].name) +
             "\" data-value=\"" + FormatDouble(v) + "\" x=\"" + Fixed(x, 1) + "\" y=\"" +
             Fixed(y_of(v), 2) + "\" width=\"" + Fixed(kBar - 2, 0) + "\" height=\"" +
             Fixed(kTop + kPlotH - y_of(v), 2) + "\" fill=\"" + kSeries[s].color + "\"/>\n";
      svg += "  <text x=\"" + Fixed(x + (kBar - 2) / 2, 1) + "\" y=\"" + Fixed(y_of(v) - 3, 1) +
             "\" text-anchor=\"middle\" font-size=\"8\">" + Fixed(v) + "</text>\n";
    }
    svg += "  <text x=\"" + Fixed(x0 + 2 * kBar, 1) + "\" y=\"" + Fixed(kTop + kPlotH + 16, 1) +
           "\" text-anchor=\"middle\">" + XmlEscape(r.system) + "</text>\n";
    svg += "</g>\n";
  }
  double lx = kLeft;
  for (const auto& s : kSeries) {
    svg += "<rect x=\"" + Fixed(lx, 0) + "\" y=\"12\" width=\"10\" height=\"10\" fill=\"" +
           s.color + "\"/><text x=\"" + Fixed(lx + 14, 0) + "\" y=\"21\">" + s.name + "</text>\n";
    lx += 60;
  }
  svg += "</svg>\n";
  return svg;
}

std::string SizeVsDistanceCsv(std::span<const CorpusReport> reports,
                              const std::map<std::string, double>& model_sizes) {
  std::string out = "system,parameters,d_hm,d_c,d_g,d_r\n";
  for (const auto& r : reports) {
    auto it = model_sizes.find(r.system);
    if (it == model_sizes.end()) continue;
    out += CsvRow({r.system, FormatDouble(it->second), FormatDouble(r.mean_d_hm),
                   FormatDouble(r.mean_d_c), FormatDouble(r.mean_d_g), FormatDouble(r.mean_d_r)});
  }
  return out;
}

ReportArtifacts RenderReport(const fs::path& run_dir) {
  const LoadedRun run = LoadRun(run_dir);
  if (run.reports.empty()) throw Error(ErrorCode::kIncompleteRun, "run has no systems");
  const fs::path out = run_dir / "report";
  fs::create_directories(out);
  ReportArtifacts artifacts{out / "bars.csv", out / "bars.svg", std::nullopt};
  WriteTextFile(artifacts.bars_csv, GroupedBarsCsv(run.reports));
  WriteTextFile(artifacts.bars_svg, GroupedBarsSvg(run.reports));
  const bool any_size = std::any_of(run.reports.begin(), run.reports.end(), [&](const auto& r) {
    return run.config.model_sizes.count(r.system) != 0;
  });
  if (any_size) {
    artifacts.size_csv = out / "size_vs_dhm.csv";
    WriteTextFile(*artifacts.size_csv, SizeVsDistanceCsv(run.reports, run.config.model_sizes));
  }
  return artifacts;
}

}  // namespace storyeval
