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

#ifndef CONFSET_BENCH_H_
#define CONFSET_BENCH_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "confset/metrics.h"
#include "confset/scoring.h"
#include "confset/types.h"

namespace confset {

enum class ReportFormat { kCsv, kJson, kMarkdown, kPlotData };

std::string_view ReportFormatName(ReportFormat format);
// "csv", "json", "markdown" (or "md"), "plot".
std::optional<ReportFormat> ParseReportFormat(std::string_view name);

struct BenchmarkConfig {
  std::vector<std::filesystem::path> inputs;
  std::vector<double> alphas = {0.1};
  std::vector<ScoreFunction> score_functions = {
      ScoreFunction::kLac, ScoreFunction::kAps, ScoreFunction::kMarginLabel};
  std::vector<std::uint64_t> seeds = {0};
  double calibration_fraction = 0.5;
  std::filesystem::path output_dir = "confset-report";
  std::vector<ReportFormat> formats = {ReportFormat::kCsv, ReportFormat::kJson,
                                       ReportFormat::kMarkdown};
  // Upper bound on concurrently evaluated (corpus, seed) tasks.
  int workers = 1;
  bool entropy_normalized = true;
  EntropyScope entropy_scope = EntropyScope::kAllRecords;
  PredictionSource prediction_source = PredictionSource::kRecord;
  // Pad records of built-in datasets to the dataset's full option range.
  bool pad_to_profile = false;
};

// Throws InvalidConfig naming the offending field.
void ValidateBenchmarkConfig(const BenchmarkConfig& config);

// JSON object whose keys match the BenchmarkConfig field names; absent keys
// keep their defaults. Relative inputs are resolved against `base_dir`.
// Unknown keys are rejected.
BenchmarkConfig ParseBenchmarkConfig(std::string_view json_text,
                                     const std::filesystem::path& base_dir);
BenchmarkConfig LoadBenchmarkConfig(const std::filesystem::path& path);

struct ReportRow {
  std::string model_id;
  std::string dataset_id;
  ScoreFunction fn = ScoreFunction::kLac;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::size_t n_cal = 0;
  std::size_t n_test = 0;
  // Empty for an include-all threshold.
  std::optional<double> qhat;
  EvalMetrics metrics;
  // Mean entropy in bits regardless of the configured normalization.
  double mean_entropy_bits = 0.0;
  // Set on rows whose tuple failed; metrics are then meaningless.
  std::optional<std::string> error;

  bool ok() const { return !error.has_value(); }
  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

// Lexicographic on (model_id, dataset_id, score_fn name, alpha, seed).
bool RowOrder(const ReportRow& a, const ReportRow& b);

struct BenchmarkReport {
  std::vector<ReportRow> rows;
  // Records dropped because they were flagged multi_image.
  std::size_t excluded_multi_image = 0;

  friend bool operator==(const BenchmarkReport&,
                         const BenchmarkReport&) = default;
};

// Records from one input. `load_error` is set when the source failed to
// parse; every tuple of such a corpus becomes an error row.
struct Corpus {
  std::string source;
  std::vector<EvalRecord> records;
  std::optional<std::string> load_error;
};

// Loads each input file, then runs every (dataset, model) group it holds
// against every alpha, score function, and seed. One calibration/test
// partition is drawn per (group, seed) and shared by all score functions and
// alphas. Failures become error rows; the sweep never aborts on data errors.
BenchmarkReport RunBenchmark(const BenchmarkConfig& config);
BenchmarkReport RunBenchmark(const BenchmarkConfig& config,
                             std::span<const Corpus> corpora);

enum class Dimension { kModel, kDataset, kScoreFn, kAlpha, kSeed };

std::string_view DimensionName(Dimension dim);
// Accepts "model", "model_id", "dataset", "dataset_id", "score_fn", "fn",
// "alpha", "seed". Throws InvalidConfig otherwise.
Dimension ParseDimension(std::string_view name);

struct SummaryRow {
  // One value per group_by dimension, in group_by order.
  std::vector<std::string> key;
  // Successful rows averaged into this summary.
  std::size_t group_size = 0;
  std::size_t error_rows = 0;
  double accuracy = 0.0;
  double set_size = 0.0;
  double coverage = 0.0;
  double mean_entropy = 0.0;
};

// Unweighted means of successful rows per distinct key, keys in sorted
// order. An empty group_by yields one global row. Throws InvalidConfig on an
// empty report.
std::vector<SummaryRow> Aggregate(const BenchmarkReport& report,
                                  std::span<const Dimension> group_by);

}  // namespace confset

#endif  // CONFSET_BENCH_H_
