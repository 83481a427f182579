// Copyright 2026 The confset Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "confset/bench.h"
#include "confset/errors.h"
#include "confset/ingest.h"
#include "confset/report.h"
#include "confset/synth.h"

namespace confset {
namespace {

const std::filesystem::path kData = CONFSET_TEST_DATA_DIR;
const std::filesystem::path kGolden = CONFSET_GOLDEN_DIR;

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  EXPECT_TRUE(in) << p;
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path TempDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("confset_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

BenchmarkConfig FixtureConfig() {
  return LoadBenchmarkConfig(kData / "fixture_config.json");
}

TEST(BenchmarkConfigTest, DefaultsFollowTheProtocol) {
  const BenchmarkConfig cfg;
  EXPECT_EQ(cfg.alphas, std::vector<double>{0.1});
  EXPECT_EQ(cfg.calibration_fraction, 0.5);
  EXPECT_EQ(cfg.seeds.size(), 1u);
  EXPECT_EQ(cfg.score_functions.size(), 3u);
  EXPECT_EQ(cfg.formats.size(), 3u);
}

TEST(BenchmarkConfigTest, ParseResolvesInputsAndRejectsUnknownKeys) {
  const auto cfg = ParseBenchmarkConfig(
      R"({"inputs": ["a.jsonl", "/abs/b.jsonl"], "seeds": [1, 2],
          "score_functions": ["lac", "MS"], "formats": ["csv", "plot"]})",
      "/base");
  ASSERT_EQ(cfg.inputs.size(), 2u);
  EXPECT_EQ(cfg.inputs[0], std::filesystem::path("/base/a.jsonl"));
  EXPECT_EQ(cfg.inputs[1], std::filesystem::path("/abs/b.jsonl"));
  EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{1, 2}));
  EXPECT_EQ(cfg.score_functions[1], ScoreFunction::kMarginLabel);
  EXPECT_EQ(cfg.formats[1], ReportFormat::kPlotData);
  EXPECT_EQ(cfg.alphas, std::vector<double>{0.1});
  for (const char* bad :
       {R"({"inputs": ["a"], "alpha": 0.1})", R"({"inputs": ["a"], "seeds": []})",
        R"({"inputs": [], "seeds": [0]})",
        R"({"inputs": ["a"], "alphas": [1.5]})",
        R"({"inputs": ["a"], "score_functions": ["XYZ"]})", "[1]", "{"}) {
    try {
      ValidateBenchmarkConfig(ParseBenchmarkConfig(bad, "/base"));
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidConfig) << bad;
    }
  }
}

TEST(RunBenchmarkTest, OneFileOneFunctionTwoSeedsGivesTwoRows) {
  BenchmarkConfig cfg;
  cfg.inputs = {kData / "synth_fixture.jsonl"};
  cfg.score_functions = {ScoreFunction::kLac};
  cfg.seeds = {0, 1};
  const auto report = RunBenchmark(cfg);
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_EQ(report.rows[0].seed, 0u);
  EXPECT_EQ(report.rows[1].seed, 1u);
}

TEST(RunBenchmarkTest, FixtureCoverageInBand) {
  BenchmarkConfig cfg;
  cfg.inputs = {kData / "synth_fixture.jsonl"};
  cfg.score_functions = {ScoreFunction::kLac};
  const auto report = RunBenchmark(cfg);
  ASSERT_EQ(report.rows.size(), 1u);
  const auto& row = report.rows[0];
  ASSERT_TRUE(row.ok());
  EXPECT_EQ(row.n_cal, 1000u);
  EXPECT_EQ(row.n_test, 1000u);
  EXPECT_GE(row.metrics.coverage, 0.88);
  EXPECT_LE(row.metrics.coverage, 0.93);
}

TEST(RunBenchmarkTest, CompletenessAcrossTheGrid) {
  auto cfg = FixtureConfig();
  cfg.alphas = {0.05, 0.1, 0.2};
  cfg.score_functions = {ScoreFunction::kLac, ScoreFunction::kAps,
                         ScoreFunction::kMarginPaper,
                         ScoreFunction::kMarginLabel};
  cfg.seeds = {0, 1};
  cfg.inputs.push_back(kData / "missing.jsonl");
  cfg.workers = 3;
  const auto report = RunBenchmark(cfg);
  EXPECT_EQ(report.rows.size(), 3u * 3u * 4u * 2u);
  std::size_t errors = 0;
  for (const auto& r : report.rows) errors += !r.ok();
  EXPECT_EQ(errors, 3u * 4u * 2u);
  EXPECT_TRUE(std::is_sorted(report.rows.begin(), report.rows.end(), RowOrder));
}

TEST(RunBenchmarkTest, WorkerCountDoesNotChangeOutput) {
  auto cfg = FixtureConfig();
  cfg.seeds = {3, 1, 2};
  cfg.workers = 1;
  const auto serial = RunBenchmark(cfg);
  cfg.workers = 4;
  EXPECT_EQ(RunBenchmark(cfg), serial);
  EXPECT_EQ(ReportJson(RunBenchmark(cfg)), ReportJson(serial));
}

TEST(RunBenchmarkTest, SharedPartitionAcrossScoreFunctions) {
  auto cfg = FixtureConfig();
  const auto report = RunBenchmark(cfg);
  // Accuracy depends only on the test split, so it agrees across functions.
  for (const auto& r : report.rows) {
    EXPECT_EQ(r.metrics.accuracy, report.rows[0].metrics.accuracy);
  }
}

TEST(RunBenchmarkTest, MixedFileIsGroupedAndMultiImageExcluded) {
  SynthConfig a;
  a.n = 200;
  a.model_id = "ma";
  SynthConfig b = a;
  b.model_id = "mb";
  b.seed = 9;
  auto records = GenerateSynthetic(a);
  auto more = GenerateSynthetic(b);
  records.insert(records.end(), more.begin(), more.end());
  records[5].multi_image = true;
  std::vector<Corpus> corpora = {{"mixed", records, std::nullopt}};
  BenchmarkConfig cfg;
  cfg.inputs = {"mixed"};
  cfg.score_functions = {ScoreFunction::kLac};
  const auto report = RunBenchmark(cfg, corpora);
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_EQ(report.excluded_multi_image, 1u);
  EXPECT_EQ(report.rows[0].model_id, "ma");
  EXPECT_EQ(report.rows[0].n_cal + report.rows[0].n_test, 199u);
  EXPECT_EQ(report.rows[1].n_cal + report.rows[1].n_test, 200u);
}

TEST(RunBenchmarkTest, TooFewRecordsBecomesAnErrorRow) {
  SynthConfig s;
  s.n = 2;
  std::vector<Corpus> corpora = {{"tiny", GenerateSynthetic(s), std::nullopt}};
  BenchmarkConfig cfg;
  cfg.inputs = {"tiny"};
  cfg.calibration_fraction = 0.2;
  const auto report = RunBenchmark(cfg, corpora);
  ASSERT_EQ(report.rows.size(), 3u);
  for (const auto& r : report.rows) EXPECT_FALSE(r.ok());
  const auto csv = ReportCsv(report);
  EXPECT_NE(csv.find("synth,synthetic,APS,0.1,0,,,,,,,,"), std::string::npos)
      << csv;
}

BenchmarkReport HandReport() {
  BenchmarkReport report;
  auto row = [&](std::string m, std::string d, double acc, double ss,
                 double cov, double ent) {
    ReportRow r;
    r.model_id = std::move(m);
    r.dataset_id = std::move(d);
    r.alpha = 0.1;
    r.n_cal = 10;
    r.n_test = 10;
    r.qhat = 0.5;
    r.metrics = {ss, acc, cov, ent, 10, 0};
    report.rows.push_back(r);
  };
  row("m1", "d1", 0.2, 1.5, 0.90, 0.4);
  row("m2", "d1", 0.3, 2.5, 0.92, 0.6);
  row("m1", "d2", 0.5, 3.0, 0.88, 0.5);
  row("m2", "d2", 0.6, 1.0, 0.94, 0.7);
  ReportRow bad;
  bad.model_id = "m3";
  bad.dataset_id = "d2";
  bad.alpha = 0.1;
  bad.error = "MalformedRecord (line 3): boom";
  report.rows.push_back(bad);
  std::stable_sort(report.rows.begin(), report.rows.end(), RowOrder);
  return report;
}

TEST(AggregateTest, ByDatasetMatchesHandComputation) {
  const std::vector<Dimension> by = {Dimension::kDataset};
  const auto rows = Aggregate(HandReport(), by);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_DOUBLE_EQ(rows[0].accuracy, 0.25);
  EXPECT_EQ(rows[1].error_rows, 1u);
  EXPECT_EQ(SummaryCsv(rows, by), Slurp(kGolden / "summary_by_dataset.csv"));
}

TEST(AggregateTest, NoDimensionsGivesOneGlobalRow) {
  const auto rows = Aggregate(HandReport(), {});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].group_size, 4u);
  EXPECT_EQ(SummaryCsv(rows, {}), Slurp(kGolden / "summary_global.csv"));
}

TEST(AggregateTest, Errors) {
  EXPECT_THROW(Aggregate(BenchmarkReport{}, {}), Error);
  try {
    ParseDimension("colour");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidConfig);
  }
  EXPECT_EQ(ParseDimension("dataset"), Dimension::kDataset);
  EXPECT_EQ(ParseDimension("fn"), Dimension::kScoreFn);
}

TEST(AggregateProperty, GlobalMeanIsWeightedMeanOfGroupMeans) {
  auto cfg = FixtureConfig();
  cfg.seeds = {0, 1, 2, 3};
  cfg.alphas = {0.1, 0.2};
  const auto report = RunBenchmark(cfg);
  for (Dimension dim : {Dimension::kModel, Dimension::kScoreFn,
                        Dimension::kAlpha, Dimension::kSeed}) {
    const std::vector<Dimension> by = {dim};
    const auto groups = Aggregate(report, by);
    const auto global = Aggregate(report, {})[0];
    double acc = 0, ss = 0, cov = 0;
    std::size_t n = 0;
    for (const auto& g : groups) {
      acc += g.accuracy * g.group_size;
      ss += g.set_size * g.group_size;
      cov += g.coverage * g.group_size;
      n += g.group_size;
    }
    EXPECT_EQ(n, global.group_size);
    EXPECT_NEAR(acc / n, global.accuracy, 1e-12);
    EXPECT_NEAR(ss / n, global.set_size, 1e-12);
    EXPECT_NEAR(cov / n, global.coverage, 1e-12);
  }
}

TEST(EmitReportTest, OneRowGivesThreeFilesAndTwoCsvLines) {
  BenchmarkReport report = HandReport();
  report.rows.resize(1);
  BenchmarkConfig cfg;
  cfg.output_dir = TempDir("emit_one");
  const auto paths = EmitReport(report, cfg);
  ASSERT_EQ(paths.size(), 3u);
  for (const auto& p : paths) EXPECT_TRUE(std::filesystem::exists(p));
  const auto csv = Slurp(cfg.output_dir / "report.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  EXPECT_EQ(csv.substr(0, kCsvHeader.size()), kCsvHeader);
  std::filesystem::remove_all(cfg.output_dir);
}

TEST(EmitReportTest, JsonRoundTripAndPlotData) {
  const auto report = RunBenchmark(FixtureConfig());
  EXPECT_EQ(ParseReportJson(ReportJson(report)), report);
  const auto hand = HandReport();
  EXPECT_EQ(ParseReportJson(ReportJson(hand)), hand);
  const auto plot = PlotDataCsv(hand);
  EXPECT_EQ(std::count(plot.begin(), plot.end(), '\n'), 5);
  EXPECT_THROW(ParseReportJson(R"([{"model_id": 1}])"), Error);
}

TEST(EmitReportTest, FixtureMarkdownMatchesGolden) {
  const auto cfg = FixtureConfig();
  EXPECT_EQ(ReportMarkdown(RunBenchmark(cfg), cfg),
            Slurp(kGolden / "fixture_report.md"));
}

TEST(EmitReportTest, IdenticalConfigGivesByteIdenticalFiles) {
  auto cfg = FixtureConfig();
  cfg.formats.push_back(ReportFormat::kPlotData);
  cfg.output_dir = TempDir("det_a");
  const auto a = EmitReport(RunBenchmark(cfg), cfg);
  cfg.output_dir = TempDir("det_b");
  const auto b = EmitReport(RunBenchmark(cfg), cfg);
  ASSERT_EQ(a.size(), 4u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].filename(), b[i].filename());
    EXPECT_EQ(Slurp(a[i]), Slurp(b[i])) << a[i];
  }
  std::filesystem::remove_all(a[0].parent_path());
  std::filesystem::remove_all(b[0].parent_path());
}

TEST(EmitReportTest, MultiSeedRunsAreFlagged) {
  auto cfg = FixtureConfig();
  cfg.seeds = {0, 1};
  const auto md = ReportMarkdown(RunBenchmark(cfg), cfg);
  EXPECT_NE(md.find("seeds | 0, 1"), std::string::npos) << md;
}

}  // namespace
}  // namespace confset
