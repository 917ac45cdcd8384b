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

// storyeval: score, compare, sample and collect judgments for visual stories.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <httplib.h>

#include "storyeval/distance.hpp"
#include "storyeval/errors.hpp"
#include "storyeval/json_io.hpp"
#include "storyeval/judgments.hpp"
#include "storyeval/kernels.hpp"
#include "storyeval/manifest.hpp"
#include "storyeval/report.hpp"
#include "storyeval/run.hpp"
#include "storyeval/service.hpp"
#include "storyeval/stats.hpp"
#include "storyeval/util.hpp"

namespace fs = std::filesystem;
using namespace storyeval;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string data_dir;
};

fs::path Input(const Globals& g, const std::string& path) {
  fs::path p(path);
  if (p.is_relative() && !g.data_dir.empty()) return fs::path(g.data_dir) / p;
  return p;
}

RunConfig Config(const Globals& g) {
  RunConfig c = g.config.empty() ? RunConfig{} : LoadConfig(Input(g, g.config));
  if (g.seed) c.seed = *g.seed;
  return c;
}

std::vector<double> ParseTriple(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      v.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParseError, "not a number: '" + part + "'");
    }
  }
  if (v.size() != 3) throw Error(ErrorCode::kParseError, "expected C,G,R but got '" + text + "'");
  return v;
}

std::vector<double> ReadNumbers(const fs::path& path) {
  std::vector<double> out;
  std::istringstream in(ReadTextFile(path));
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(std::stod(line));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParseError, path.string() + ": not a number: '" + line + "'");
    }
  }
  return out;
}

void PrintTTest(const std::string& label, const TTestResult& r) {
  std::cout << label << " t=" << FormatDouble(r.t) << " p=" << FormatDouble(r.p)
            << " dof=" << FormatDouble(r.dof) << "\n";
}

int Validate(const Globals& g, const std::string& manifest_path,
             const std::vector<std::string>& bundle_paths) {
  const Manifest m = LoadManifest(Input(g, manifest_path));
  for (const auto& w : m.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "manifest: " << m.items.size() << " items, dataset " << m.dataset << "/"
            << ToString(m.split) << "\n";
  if (bundle_paths.empty()) return 0;
  BundleIndex index;
  for (const auto& b : bundle_paths) index.AddFile(Input(g, b));
  std::size_t bad = 0, missing = 0;
  auto check = [&](const Story& s) {
    const FeatureBundle* b = index.Find(s.story_id);
    if (b == nullptr) {
      ++missing;
      std::cout << s.story_id << ": missing bundle\n";
      return;
    }
    const ValidationReport r = ValidateBundle(s, *b);
    if (!r.ok()) ++bad;
    for (const auto& v : r.violations) std::cout << s.story_id << ": " << v.kind << ": " << v.detail << "\n";
  };
  for (const auto& item : m.items) {
    check(item.human);
    for (const auto& [name, story] : item.systems) check(story);
  }
  std::cout << "bundles: " << index.size() << " loaded, " << bad << " invalid, " << missing
            << " missing\n";
  return bad + missing == 0 ? 0 : 1;
}

int Score(const Globals& g, const std::string& manifest_path,
          const std::vector<std::string>& bundle_paths, const std::vector<std::string>& systems,
          const std::string& out, bool serial, int threads) {
  RunConfig config = Config(g);
  if (serial) config.parallel = false;
  if (threads > 0) config.threads = threads;
  const Manifest m = LoadManifest(Input(g, manifest_path));
  BundleIndex index;
  for (const auto& b : bundle_paths) index.AddFile(Input(g, b));
  const RunResult r = RunEvaluation(m, index, systems, config, out);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "threshold " << r.threshold.threshold_id << " tau=" << FormatDouble(r.threshold.tau)
            << "\n";
  for (const auto& rep : r.reports) {
    std::cout << rep.system << " n=" << rep.n << " d_hm=" << FormatDouble(rep.mean_d_hm)
              << " d_c=" << FormatDouble(rep.mean_d_c) << " d_g=" << FormatDouble(rep.mean_d_g)
              << " d_r=" << FormatDouble(rep.mean_d_r) << "\n";
  }
  std::cout << "wrote " << r.dir.string() << "\n";
  return 0;
}

int Distance(const std::string& human, const std::string& model,
             const std::vector<std::string>& runs, const std::string& system) {
  if (!runs.empty()) {
    if (system.empty()) throw Error(ErrorCode::kParseError, "--average needs --system");
    std::vector<CorpusReport> reports;
    for (const auto& dir : runs) reports.push_back(LoadRun(dir).Report(system));
    const CorpusReport avg = PromptVariantAverage(reports);
    std::cout << CsvRow({"system", "n", "d_c", "d_g", "d_r", "d_hm"})
              << CsvRow({avg.system, std::to_string(avg.n), FormatDouble(avg.mean_d_c),
                         FormatDouble(avg.mean_d_g), FormatDouble(avg.mean_d_r),
                         FormatDouble(avg.mean_d_hm)});
    return 0;
  }
  if (human.empty() || model.empty()) {
    throw Error(ErrorCode::kParseError, "give --human and --model, or --average with --system");
  }
  const auto h = ParseTriple(human);
  const auto mo = ParseTriple(model);
  MetricScores hs{h[0], h[1], h[2]};
  MetricScores ms{mo[0], mo[1], mo[2]};
  const MetricDistances d = ComputeMetricDistances(hs, ms);
  std::cout << CsvRow({"d_c", "d_g", "d_r", "d_hm"})
            << CsvRow({FormatDouble(d.d_c), FormatDouble(d.d_g), FormatDouble(d.d_r),
                       FormatDouble(AggregateDistance(d))});
  return 0;
}

int Report(const std::string& run) {
  const ReportArtifacts a = RenderReport(run);
  std::cout << "wrote " << a.bars_csv.string() << "\n" << "wrote " << a.bars_svg.string() << "\n";
  if (a.size_csv) std::cout << "wrote " << a.size_csv->string() << "\n";
  return 0;
}

int Sample(const Globals& g, const std::string& run, const std::vector<std::string>& systems,
           std::size_t n, std::size_t bins, const std::string& out) {
  const LoadedRun loaded = LoadRun(run);
  const RunConfig config = Config(g);
  SampleFile sample;
  sample.seed = g.seed ? *g.seed : (g.config.empty() ? loaded.config.seed : config.seed);
  sample.bins = bins > 0 ? bins : loaded.config.sample_bins;
  std::vector<std::string> names = systems;
  if (names.empty()) {
    for (const auto& r : loaded.reports) {
      if (r.system != kHumanControlSystem) names.push_back(r.system);
    }
  }
  for (const auto& name : names) {
    const std::uint64_t seed = sample.seed ^ Fnv1a64(name);
    for (auto& id : SampleByDistance(loaded.Report(name), n, sample.bins, seed)) {
      sample.items.push_back({name, std::move(id)});
    }
  }
  WriteTextFile(out, ToJson(sample).dump(2) + "\n");
  std::cout << "sampled " << sample.items.size() << " items into " << out << "\n";
  return 0;
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

int Serve(const Globals& g, const std::string& manifest_path, const std::string& sample_path,
          const std::string& journal, const std::string& annotators, const std::string& host,
          int port, const std::string& instructions_path, const std::string& ui_dir) {
  const Manifest m = LoadManifest(Input(g, manifest_path));
  const SampleFile sample = LoadSample(Input(g, sample_path));
  const std::uint64_t seed = g.seed ? *g.seed : sample.seed;
  std::string instructions =
      instructions_path.empty() ? DefaultInstructions() : ReadTextFile(Input(g, instructions_path));
  JudgmentService service(BuildTasks(m, sample.items, seed), SplitList(annotators), journal,
                          std::move(instructions));
  httplib::Server server;
  BindRoutes(server, service);
  if (!ui_dir.empty() && !server.set_mount_point("/", ui_dir)) {
    throw Error(ErrorCode::kIoError, "cannot serve " + ui_dir);
  }
  const int bound = port == 0 ? server.bind_to_any_port(host)
                              : (server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(ErrorCode::kIoError, "cannot listen on port " + std::to_string(port));
  std::cout << "serving " << service.task_count() << " tasks on http://" << host << ":" << bound
            << "\n"
            << std::flush;
  return server.listen_after_bind() ? 0 : 1;
}

int Stats(const Globals& g, const std::string& judgments_path, const std::string& run,
          const std::string& a_path, const std::string& b_path) {
  const RunConfig config = Config(g);
  if (!a_path.empty() || !b_path.empty()) {
    if (a_path.empty() || b_path.empty()) throw Error(ErrorCode::kParseError, "--a and --b go together");
    PrintTTest(config.t_test == TTestKind::kWelch ? "welch" : "student",
               TTest(ReadNumbers(Input(g, a_path)), ReadNumbers(Input(g, b_path)), config.t_test));
    return 0;
  }
  if (judgments_path.empty()) throw Error(ErrorCode::kParseError, "--judgments is required");
  const auto judgments = JudgmentJournal::Read(Input(g, judgments_path));
  const JudgmentTally tally = TallyJudgments(judgments);
  std::cout << CsvRow({"system", "total", "human_better", "model_better", "both_fine", "both_bad"});
  for (const auto& [system, t] : tally.per_system) {
    std::vector<std::string> row{system, std::to_string(t.total)};
    for (Verdict v : kAllVerdicts) row.push_back(FormatDouble(t.percentage(v)));
    std::cout << CsvRow(row);
  }
  if (run.empty()) return 0;
  const LoadedRun loaded = LoadRun(run);
  for (const auto& [system, t] : tally.per_system) {
    const auto split = SplitDistancesByVerdict(judgments, loaded.Report(system));
    const auto& better = split.at(Verdict::kHumanBetter);
    std::vector<double> similar = split.at(Verdict::kBothFine);
    const auto& bad = split.at(Verdict::kBothBad);
    similar.insert(similar.end(), bad.begin(), bad.end());
    try {
      PrintTTest(system + " human_better vs similar", TTest(better, similar, config.t_test));
    } catch (const Error& e) {
      std::cout << system << " " << e.what() << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reference-free evaluation of visual stories against human stories"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config, "Run configuration (JSON)");
  auto* seed_opt = app.add_option("--seed", seed, "Random seed, overrides the config");
  app.add_option("--data-dir", g.data_dir, "Base directory for relative input paths")
      ->envname("STORYEVAL_DATA_DIR");

  std::string manifest, out, run, system, sample_path, journal, annotators, judgments, a_path, b_path;
  std::string human, model, host = "127.0.0.1", instructions, ui_dir;
  std::vector<std::string> bundles, systems, runs;
  bool serial = false;
  int threads = 0, port = 8080;
  std::size_t n = 100, bins = 0;

  auto* validate = app.add_subcommand("validate", "Check a manifest and its feature bundles");
  validate->add_option("--manifest", manifest)->required();
  validate->add_option("--bundles", bundles);

  auto* score = app.add_subcommand("score", "Score a manifest into a run directory");
  score->add_option("--manifest", manifest)->required();
  score->add_option("--bundles", bundles)->required();
  score->add_option("--systems", systems, "Systems to score (default: all)")->delimiter(',');
  score->add_option("--out", out)->required();
  score->add_flag("--serial", serial, "Use the serial reference kernels");
  score->add_option("--threads", threads);

  auto* distance = app.add_subcommand("distance", "Human/model distance from metric triples or runs");
  distance->add_option("--human", human, "C,G,R of the human story");
  distance->add_option("--model", model, "C,G,R of the model story");
  distance->add_option("--average", runs, "Run directories to average (prompt variants)");
  distance->add_option("--system", system);

  auto* report = app.add_subcommand("report", "Render bar chart data and SVG for a run");
  report->add_option("--run", run)->required();

  auto* sample = app.add_subcommand("sample", "Draw a d_hm-stratified sample for annotation");
  sample->add_option("--run", run)->required();
  sample->add_option("--systems", systems)->delimiter(',');
  sample->add_option("--n", n, "Items per system");
  sample->add_option("--bins", bins);
  sample->add_option("--out", out)->required();

  auto* serve = app.add_subcommand("serve", "Run the judgment collection service");
  serve->add_option("--manifest", manifest)->required();
  serve->add_option("--sample", sample_path)->required();
  serve->add_option("--journal", journal)->required();
  serve->add_option("--annotators", annotators, "Comma-separated annotator ids")->required();
  serve->add_option("--host", host);
  serve->add_option("--port", port, "0 picks a free port");
  serve->add_option("--instructions", instructions, "Text file replacing the default instructions");
  serve->add_option("--ui-dir", ui_dir, "Static files served at /");

  auto* stats = app.add_subcommand("stats", "Tally judgments and run t tests");
  stats->add_option("--judgments", judgments);
  stats->add_option("--run", run);
  stats->add_option("--a", a_path, "First sample, one number per line");
  stats->add_option("--b", b_path, "Second sample, one number per line");

  CLI11_PARSE(app, argc, argv);
  if (*seed_opt) g.seed = seed;

  try {
    if (*validate) return Validate(g, manifest, bundles);
    if (*score) return Score(g, manifest, bundles, systems, out, serial, threads);
    if (*distance) return Distance(human, model, runs, system);
    if (*report) return Report(run);
    if (*sample) return Sample(g, run, systems, n, bins, out);
    if (*serve) {
      return Serve(g, manifest, sample_path, journal, annotators, host, port, instructions, ui_dir);
    }
    if (*stats) return Stats(g, judgments, run, a_path, b_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
