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

#include <regex>

#include "storyeval/errors.hpp"
#include "storyeval/json_io.hpp"
#include "storyeval/manifest.hpp"
#include "storyeval/report.hpp"
#include "storyeval/run.hpp"
#include "storyeval/util.hpp"
#include "support/campfire.hpp"
#include "support/synthetic.hpp"
#include "support/tempdir.hpp"

using namespace storyeval;
using storyeval::testing::Fixture;
using storyeval::testing::TempDir;
namespace fs = std::filesystem;

namespace {

ErrorCode CodeOf(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error");
  return ErrorCode::kIoError;
}

BundleIndex FixtureBundles() {
  BundleIndex index;
  index.AddFile(Fixture("bundles.jsonl"));
  return index;
}

std::size_t Count(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + 1)) {
    ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("fixture manifest loads") {
  const Manifest m = LoadManifest(Fixture("manifest.jsonl"));
  CHECK(m.items.size() == 3);
  CHECK(m.dataset == "vist");
  CHECK(m.split == Split::kTest);
  CHECK(m.warnings.empty());
  CHECK(SystemNames(m) == std::vector<std::string>{"LLaVA", "TAPM"});
  const Story& h = m.items[0].human;
  CHECK(h.story_id == "seq-001/human");
  CHECK(h.sentences.size() == 5);
  CHECK(h.np_count() == 7);
  CHECK(h.sentences[1].nps[0].text == "the fire pit");
}

TEST_CASE("fixture bundles validate against their stories") {
  const Manifest m = LoadManifest(Fixture("manifest.jsonl"));
  const BundleIndex index = FixtureBundles();
  CHECK(index.size() == 9);
  CHECK(index.metadata().embedding_dim == 8);
  for (const auto& item : m.items) {
    CHECK(ValidateBundle(item.human, *index.Find(item.human.story_id)).ok());
    for (const auto& [name, s] : item.systems) {
      CHECK(ValidateBundle(s, *index.Find(s.story_id)).ok());
    }
  }
}

TEST_CASE("manifest errors and warnings") {
  const auto no_human = CodeOf([] { LoadManifest(Fixture("manifest_no_human.jsonl")); });
  CHECK(IsSchemaError(no_human));
  CHECK(CodeOf([] { LoadManifest(Fixture("manifest_bad_schema.jsonl")); }) ==
        ErrorCode::kSchemaVersionMismatch);
  const Manifest m = LoadManifest(Fixture("manifest_unavailable.jsonl"));
  CHECK(m.items.size() == 3);
  REQUIRE(m.warnings.size() == 1);
  CHECK(m.warnings[0].find("seq-004") != std::string::npos);

  TempDir tmp("manifest");
  WriteTextFile(tmp / "broken.jsonl", "{\"schema\": \"storyeval.manifest/1\"\n");
  CHECK(CodeOf([&] { LoadManifest(tmp / "broken.jsonl"); }) == ErrorCode::kParseError);
  CHECK(CodeOf([&] { LoadManifest(tmp / "absent.jsonl"); }) == ErrorCode::kIoError);
}

TEST_CASE("vist items need five images") {
  auto lines = ReadJsonLines(Fixture("manifest.jsonl"));
  lines[1]["sequence"]["images"].erase(0);
  CHECK(IsSchemaError(CodeOf([&] { ParseManifest(lines, "test"); })));
  lines[0]["dataset"] = "vwp";
  CHECK(CodeOf([&] { ParseManifest(lines, "test"); }) == ErrorCode::kSchemaViolation);
}

TEST_CASE("manifest and bundles survive save and load") {
  synthetic::Options opt;
  opt.items = 12;
  const auto corpus = synthetic::MakeCorpus(opt, 3);
  TempDir tmp("roundtrip");
  SaveManifest(tmp / "m.jsonl", corpus.manifest);
  const Manifest back = LoadManifest(tmp / "m.jsonl");
  REQUIRE(back.items.size() == corpus.manifest.items.size());
  for (std::size_t i = 0; i < back.items.size(); ++i) {
    CHECK(back.items[i].sequence == corpus.manifest.items[i].sequence);
    CHECK(back.items[i].human == corpus.manifest.items[i].human);
    CHECK(back.items[i].systems == corpus.manifest.items[i].systems);
  }
  BundleFile file;
  file.metadata = corpus.bundles.metadata();
  const auto* b = corpus.bundles.Find(corpus.manifest.items[0].human.story_id);
  file.bundles.push_back(*b);
  SaveBundles(tmp / "b.jsonl", file);
  const BundleFile loaded = LoadBundles(tmp / "b.jsonl");
  CHECK(loaded.metadata == file.metadata);
  CHECK(loaded.bundles == file.bundles);
}

TEST_CASE("one system, two items gives two records and one report") {
  Manifest m = LoadManifest(Fixture("manifest.jsonl"));
  m.items.pop_back();
  TempDir tmp("run");
  const std::vector<std::string> systems = {"TAPM"};
  const RunResult r = RunEvaluation(m, FixtureBundles(), systems, {}, tmp / "run");
  REQUIRE(r.reports.size() == 1);
  CHECK(r.reports[0].per_story.size() == 2);
  CHECK(r.reports[0].n == 2);
  CHECK(fs::exists(tmp / "run" / "run.json"));
  CHECK(fs::exists(tmp / "run" / "scores.csv"));
  CHECK(fs::exists(tmp / "run" / "distances_TAPM.csv"));
  CHECK(fs::exists(tmp / "run" / "threshold.json"));
  const auto rows = ReadCsv(tmp / "run" / "distances_TAPM.csv");
  CHECK(rows[0] == std::vector<std::string>{"sequence_id", "d_c", "d_g", "d_r", "d_hm"});
  CHECK(rows.size() == 3);
  const Json summary = Json::parse(ReadTextFile(tmp / "run" / "run.json"));
  const Json& repro = summary.at("reproducibility");
  CHECK(repro.at("threshold_id") == r.threshold.threshold_id);
  CHECK(repro.contains("seed"));
  CHECK(repro.contains("config_hash"));
  CHECK(repro.at("tool_version") == kToolVersion);
  for (const auto& entry : fs::directory_iterator(tmp.path())) {
    CHECK(entry.path().filename().string().find(".partial-") == std::string::npos);
  }
}

TEST_CASE("human control run has mean distance exactly zero") {
  const Manifest m = LoadManifest(Fixture("manifest.jsonl"));
  TempDir tmp("control");
  const std::vector<std::string> systems = {std::string(kHumanControlSystem), "LLaVA"};
  const RunResult r = RunEvaluation(m, FixtureBundles(), systems, {}, tmp / "run");
  REQUIRE(r.reports.size() == 2);
  const auto& control = r.reports[0].system == "human" ? r.reports[0] : r.reports[1];
  const auto& llava = r.reports[0].system == "human" ? r.reports[1] : r.reports[0];
  CHECK(control.system == "human");
  CHECK(control.n == 3);
  CHECK(control.mean_d_hm == 0.0);
  for (const auto& rec : control.per_story) CHECK(rec.d_hm == 0.0);
  CHECK(llava.mean_d_hm > 0.0);
}

TEST_CASE("runs are byte-identical across repeats and kernel choice") {
  const Manifest m = LoadManifest(Fixture("manifest.jsonl"));
  TempDir tmp("determinism");
  RunConfig serial;
  serial.parallel = false;
  RunEvaluation(m, FixtureBundles(), {}, {}, tmp / "a");
  RunEvaluation(m, FixtureBundles(), {}, {}, tmp / "b");
  RunEvaluation(m, FixtureBundles(), {}, serial, tmp / "c");
  for (const auto* name : {"scores.csv", "distances_TAPM.csv", "distances_LLaVA.csv"}) {
    const auto a = ReadTextFile(tmp / "a" / name);
    CHECK(a == ReadTextFile(tmp / "b" / name));
    CHECK(a == ReadTextFile(tmp / "c" / name));
  }
}

TEST_CASE("rerunning into the same directory replaces it") {
  const Manifest m = LoadManifest(Fixture("manifest.jsonl"));
  TempDir tmp("replace");
  fs::create_directories(tmp / "run");
  WriteTextFile(tmp / "run" / "stale.txt", "old");
  RunEvaluation(m, FixtureBundles(), {}, {}, tmp / "run");
  CHECK_FALSE(fs::exists(tmp / "run" / "stale.txt"));
  CHECK(fs::exists(tmp / "run" / "run.json"));
}

TEST_CASE("missing bundles abort the run before anything is written") {
  const Manifest m = LoadManifest(Fixture("manifest.jsonl"));
  BundleIndex partial;
  const BundleFile file = LoadBundles(Fixture("bundles.jsonl"));
  partial.set_metadata(file.metadata);
  for (const auto& b : file.bundles) {
    if (b.story_id != "seq-002/TAPM") partial.Add(b);
  }
  TempDir tmp("missing");
  try {
    RunEvaluation(m, partial, {}, {}, tmp / "run");
    FAIL("expected MissingBundle");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingBundle);
    CHECK(std::string(e.what()).find("seq-002/TAPM") != std::string::npos);
  }
  CHECK_FALSE(fs::exists(tmp / "run"));
}

TEST_CASE("invalid bundles abort the run") {
  const Manifest m = LoadManifest(Fixture("manifest.jsonl"));
  BundleFile file = LoadBundles(Fixture("bundles.jsonl"));
  file.bundles[0].follow_probs.push_back(0.5);
  BundleIndex index;
  index.set_metadata(file.metadata);
  for (auto& b : file.bundles) index.Add(b);
  TempDir tmp("invalid");
  CHECK(CodeOf([&] { RunEvaluation(m, index, {}, {}, tmp / "run"); }) ==
        ErrorCode::kSchemaViolation);
}

TEST_CASE("items without boxes are excluded with a warning") {
  Manifest m = LoadManifest(Fixture("manifest.jsonl"));
  BundleFile file = LoadBundles(Fixture("bundles.jsonl"));
  BundleIndex index;
  index.set_metadata(file.metadata);
  for (auto& b : file.bundles) {
    if (b.story_id.rfind("seq-003", 0) == 0) b.box_features.clear();
    index.Add(b);
  }
  TempDir tmp("noboxes");
  const RunResult r = RunEvaluation(m, index, {}, {}, tmp / "run");
  CHECK(r.reports[0].n == 2);
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].find("NoBoxes") != std::string::npos);
}

TEST_CASE("loaded runs match the in-memory result") {
  const Manifest m = LoadManifest(Fixture("manifest.jsonl"));
  TempDir tmp("load");
  RunConfig config;
  config.seed = 99;
  const RunResult r = RunEvaluation(m, FixtureBundles(), {}, config, tmp / "run");
  const LoadedRun loaded = LoadRun(tmp / "run");
  CHECK(loaded.config.seed == 99);
  CHECK(loaded.threshold == r.threshold);
  REQUIRE(loaded.reports.size() == r.reports.size());
  for (std::size_t i = 0; i < r.reports.size(); ++i) {
    CHECK(loaded.reports[i].system == r.reports[i].system);
    CHECK(loaded.reports[i].mean_d_hm == r.reports[i].mean_d_hm);
    REQUIRE(loaded.reports[i].per_story.size() == r.reports[i].per_story.size());
    for (std::size_t k = 0; k < r.reports[i].per_story.size(); ++k) {
      CHECK(loaded.reports[i].per_story[k].d_hm == r.reports[i].per_story[k].d_hm);
    }
  }
  fs::remove(tmp / "run" / "distances_TAPM.csv");
  CHECK(CodeOf([&] { LoadRun(tmp / "run"); }) == ErrorCode::kIncompleteRun);
  CHECK(CodeOf([&] { LoadRun(tmp / "nowhere"); }) == ErrorCode::kIncompleteRun);
}

TEST_CASE("config JSON round trip and hash") {
  RunConfig c;
  c.scoring.repetition.denominator = JaccardDenominator::kSizeSum;
  c.scoring.repetition.combine = RepetitionCombine::kPooled;
  c.threshold_source = ThresholdSource::kAll;
  c.seed = 12345;
  c.t_test = TTestKind::kStudent;
  c.model_sizes = {{"LLaVA", 7e9}};
  const RunConfig back = ConfigFromJson(ConfigToJson(c));
  CHECK(back.scoring.repetition == c.scoring.repetition);
  CHECK(back.threshold_source == c.threshold_source);
  CHECK(back.seed == c.seed);
  CHECK(back.t_test == c.t_test);
  CHECK(back.model_sizes == c.model_sizes);
  CHECK(ConfigHash(back) == ConfigHash(c));
  RunConfig threads = c;
  threads.threads = 7;
  threads.parallel = false;
  CHECK(ConfigHash(threads) == ConfigHash(c));
  CHECK(ConfigHash(RunConfig{}) != ConfigHash(c));
  CHECK(CodeOf([] { ConfigFromJson(Json{{"repetition", {{"jaccard", "cosine"}}}}); }) ==
        ErrorCode::kSchemaViolation);
}

TEST_CASE("report renders grouped bars") {
  const Manifest m = LoadManifest(Fixture("manifest.jsonl"));
  TempDir tmp("report");
  RunConfig config;
  config.model_sizes = {{"LLaVA", 7e9}, {"TAPM", 1.2e8}};
  RunEvaluation(m, FixtureBundles(), {}, config, tmp / "run");
  const ReportArtifacts a = RenderReport(tmp / "run");
  const std::string svg = ReadTextFile(a.bars_svg);
  CHECK(Count(svg, "class=\"system\"") == 2);
  CHECK(Count(svg, "class=\"bar\"") == 8);
  CHECK(svg.find("http://www.w3.org/2000/svg") != std::string::npos);
  CHECK(svg.find("href") == std::string::npos);
  const auto rows = ReadCsv(a.bars_csv);
  CHECK(rows[0] == std::vector<std::string>{"system", "n", "d_c", "d_g", "d_r", "d_hm"});
  CHECK(rows.size() == 3);
  REQUIRE(a.size_csv.has_value());
  CHECK(ReadCsv(*a.size_csv).size() == 3);
}

TEST_CASE("report bars from reference metric values") {
  std::vector<CorpusReport> reports;
  for (const auto* name : {"LLaVA", "TAPM"}) {
    const auto& e = campfire::Model(name);
    MetricScores h{campfire::kHuman.c, campfire::kHuman.g, campfire::kHuman.r, "t"};
    MetricScores s{e.c, e.g, e.r, "t"};
    reports.push_back(CorpusDistance(name, std::vector<ScoredPair>{{"seq", h, s}}));
  }
  const std::string csv = GroupedBarsCsv(reports);
  std::regex row(R"((LLaVA|TAPM),1,[^,]+,[^,]+,[^,]+,([0-9.e-]+))");
  std::map<std::string, double> d_hm;
  for (std::sregex_iterator it(csv.begin(), csv.end(), row), end; it != end; ++it) {
    d_hm[(*it)[1]] = std::stod((*it)[2]);
  }
  CHECK(std::abs(d_hm.at("LLaVA") - 0.164) <= 1e-9);
  CHECK(std::abs(d_hm.at("TAPM") - 0.367 / 3) <= 1e-9);
  const std::string svg = GroupedBarsSvg(reports);
  CHECK(Count(svg, "class=\"bar\"") == 8);
}

TEST_CASE("an empty-system run cannot be reported") {
  Manifest m = LoadManifest(Fixture("manifest.jsonl"));
  for (auto& item : m.items) item.systems.clear();
  TempDir tmp("empty");
  RunEvaluation(m, FixtureBundles(), {}, {}, tmp / "run");
  CHECK(CodeOf([&] { RenderReport(tmp / "run"); }) == ErrorCode::kIncompleteRun);
}
