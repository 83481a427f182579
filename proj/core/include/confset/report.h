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

#ifndef CONFSET_REPORT_H_
#define CONFSET_REPORT_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "confset/bench.h"

namespace confset {

inline constexpr std::string_view kCsvHeader =
    "model_id,dataset_id,score_fn,alpha,seed,n_cal,n_test,qhat,accuracy,"
    "set_size,coverage,mean_entropy,empty_sets";

// Printed in place of qhat for include-all thresholds.
inline constexpr std::string_view kIncludeAllToken = "INCLUDE_ALL";

// Six significant digits, "%.6g".
std::string FormatNumber(double value);

// Header plus one line per row. Error rows keep their identifying columns and
// leave the metric columns empty.
std::string ReportCsv(const BenchmarkReport& report);

// Canonical machine format: an array of row objects carrying the CSV keys
// plus "mean_entropy_bits" and "error". Numbers use shortest round-trip
// formatting, so parsing gives back bit-identical values.
std::string ReportJson(const BenchmarkReport& report);
// Throws MalformedRecord on a document that ReportJson could not have made.
BenchmarkReport ParseReportJson(std::string_view json_text);

// Tables with models as rows: accuracy and entropy per dataset, set
// size and coverage per dataset x score function, one block per alpha. Cells
// are means over seeds.
std::string ReportMarkdown(const BenchmarkReport& report,
                           const BenchmarkConfig& config);

// (accuracy, set size) pairs of successful rows, for scatter plots.
std::string PlotDataCsv(const BenchmarkReport& report);

std::string SummaryCsv(std::span<const SummaryRow> rows,
                       std::span<const Dimension> group_by);

// Writes one file per requested format into config.output_dir (created if
// missing) and returns the paths in format order: report.csv, report.json,
// report.md, accuracy_vs_set_size.csv. Throws IoError.
std::vector<std::filesystem::path> EmitReport(const BenchmarkReport& report,
                                              const BenchmarkConfig& config);

}  // namespace confset

#endif  // CONFSET_REPORT_H_
