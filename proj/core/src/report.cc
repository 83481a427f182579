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

#include "confset/report.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "confset/errors.h"
#include "json.hpp"

namespace confset {
namespace {

using nlohmann::json;

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string MarkdownCell(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += (c == '\n' || c == '\r') ? ' ' : c;
  }
  return out;
}

std::string QhatText(const ReportRow& row) {
  return row.qhat ? FormatNumber(*row.qhat) : std::string(kIncludeAllToken);
}

// Mean of one metric over the successful rows that `match` accepts, or "ERR"
// when only error rows matched, or "-" when nothing matched.
template <typename Match, typename Get>
std::string MeanCell(const BenchmarkReport& report, Match match, Get get) {
  double total = 0.0;
  std::size_t ok = 0;
  std::size_t failed = 0;
  for (const ReportRow& row : report.rows) {
    if (!match(row)) continue;
    if (row.ok()) {
      total += get(row);
      ++ok;
    } else {
      ++failed;
    }
  }
  if (ok > 0) return FormatNumber(total / static_cast<double>(ok));
  return failed > 0 ? "ERR" : "-";
}

void TableHeader(std::ostringstream& out,
                 const std::vector<std::string>& columns) {
  out << "| Model |";
  for (const std::string& c : columns) out << ' ' << MarkdownCell(c) << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < columns.size(); ++i) out << "---|";
  out << '\n';
}

std::string Join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ", ";
    out += parts[i];
  }
  return out;
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

[[noreturn]] void BadReport(const std::string& message) {
  throw Error(ErrorCode::kMalformedRecord, "report JSON: " + message);
}

}  // namespace

std::string FormatNumber(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

std::string ReportCsv(const BenchmarkReport& report) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const ReportRow& row : report.rows) {
    out << CsvField(row.model_id) << ',' << CsvField(row.dataset_id) << ','
        << ScoreFunctionName(row.fn) << ',' << FormatNumber(row.alpha) << ','
        << row.seed << ',';
    if (row.ok()) {
      const EvalMetrics& m = row.metrics;
      out << row.n_cal << ',' << row.n_test << ',' << QhatText(row) << ','
          << FormatNumber(m.accuracy) << ',' << FormatNumber(m.set_size) << ','
          << FormatNumber(m.coverage) << ',' << FormatNumber(m.mean_entropy)
          << ',' << m.empty_set_count;
    } else {
      out << ",,,,,,,";
    }
    out << '\n';
  }
  return out.str();
}

std::string ReportJson(const BenchmarkReport& report) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const ReportRow& row : report.rows) {
    nlohmann::ordered_json r;
    r["model_id"] = row.model_id;
    r["dataset_id"] = row.dataset_id;
    r["score_fn"] = ScoreFunctionName(row.fn);
    r["alpha"] = row.alpha;
    r["seed"] = row.seed;
    if (row.ok()) {
      const EvalMetrics& m = row.metrics;
      r["n_cal"] = row.n_cal;
      r["n_test"] = row.n_test;
      if (row.qhat) {
        r["qhat"] = *row.qhat;
      } else {
        r["qhat"] = kIncludeAllToken;
      }
      r["accuracy"] = m.accuracy;
      r["set_size"] = m.set_size;
      r["coverage"] = m.coverage;
      r["mean_entropy"] = m.mean_entropy;
      r["empty_sets"] = m.empty_set_count;
      r["mean_entropy_bits"] = row.mean_entropy_bits;
      r["error"] = nullptr;
    } else {
      for (const char* key :
           {"n_cal", "n_test", "qhat", "accuracy", "set_size", "coverage",
            "mean_entropy", "empty_sets", "mean_entropy_bits"}) {
        r[key] = nullptr;
      }
      r["error"] = *row.error;
    }
    rows.push_back(std::move(r));
  }
  return rows.dump(2) + "\n";
}

BenchmarkReport ParseReportJson(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::exception& e) {
    BadReport(e.what());
  }
  if (!doc.is_array()) BadReport("top level must be an array");
  BenchmarkReport report;
  try {
    for (const json& r : doc) {
      ReportRow row;
      row.model_id = r.at("model_id").get<std::string>();
      row.dataset_id = r.at("dataset_id").get<std::string>();
      const auto fn = ParseScoreFunction(r.at("score_fn").get<std::string>());
      if (!fn) BadReport("unknown score_fn");
      row.fn = *fn;
      row.alpha = r.at("alpha").get<double>();
      row.seed = r.at("seed").get<std::uint64_t>();
      if (!r.at("error").is_null()) {
        row.error = r.at("error").get<std::string>();
        report.rows.push_back(std::move(row));
        continue;
      }
      row.n_cal = r.at("n_cal").get<std::size_t>();
      row.n_test = r.at("n_test").get<std::size_t>();
      const json& qhat = r.at("qhat");
      if (qhat.is_string()) {
        if (qhat.get<std::string>() != kIncludeAllToken) BadReport("bad qhat");
      } else {
        row.qhat = qhat.get<double>();
      }
      row.metrics.accuracy = r.at("accuracy").get<double>();
      row.metrics.set_size = r.at("set_size").get<double>();
      row.metrics.coverage = r.at("coverage").get<double>();
      row.metrics.mean_entropy = r.at("mean_entropy").get<double>();
      row.metrics.empty_set_count = r.at("empty_sets").get<std::size_t>();
      row.metrics.n_test = row.n_test;
      row.mean_entropy_bits = r.at("mean_entropy_bits").get<double>();
      report.rows.push_back(std::move(row));
    }
  } catch (const json::exception& e) {
    BadReport(e.what());
  }
  return report;
}

std::string ReportMarkdown(const BenchmarkReport& report,
                           const BenchmarkConfig& config) {
  std::set<std::string> model_set;
  std::set<std::string> dataset_set;
  std::set<ScoreFunction> fn_set;
  std::size_t errors = 0;
  for (const ReportRow& row : report.rows) {
    model_set.insert(row.model_id);
    dataset_set.insert(row.dataset_id);
    fn_set.insert(row.fn);
    if (!row.ok()) ++errors;
  }
  std::vector<ScoreFunction> fns;
  for (ScoreFunction fn : config.score_functions) {
    if (fn_set.contains(fn) &&
        std::find(fns.begin(), fns.end(), fn) == fns.end()) {
      fns.push_back(fn);
    }
  }
  const std::vector<std::string> datasets(dataset_set.begin(),
                                          dataset_set.end());

  std::vector<std::string> alpha_text;
  for (double a : config.alphas) alpha_text.push_back(FormatNumber(a));
  std::vector<std::string> seed_text;
  for (std::uint64_t s : config.seeds) seed_text.push_back(std::to_string(s));
  std::vector<std::string> fn_text;
  for (ScoreFunction fn : config.score_functions) {
    fn_text.emplace_back(ScoreFunctionName(fn));
  }

  std::ostringstream out;
  out << "# Conformal prediction benchmark\n\n";
  out << "| Setting | Value |\n|---|---|\n";
  out << "| alpha | " << Join(alpha_text) << " |\n";
  out << "| calibration fraction | "
      << FormatNumber(config.calibration_fraction) << " |\n";
  out << "| seeds | " << Join(seed_text) << " |\n";
  out << "| score functions | " << Join(fn_text) << " |\n";
  out << "| prediction source | "
      << PredictionSourceName(config.prediction_source) << " |\n";
  out << "| entropy | "
      << (config.entropy_normalized ? "normalized (bits / log2 K)" : "bits")
      << ", " << EntropyScopeName(config.entropy_scope) << " records |\n";
  out << "| rows | " << report.rows.size() << " (" << errors << " errors) |\n";
  out << "| excluded multi-image records | " << report.excluded_multi_image
      << " |\n";
  if (config.seeds.size() > 1) {
    out << "\nCells average " << config.seeds.size()
        << " independent calibration/test splits. A single split is the "
           "reference protocol; the extra seeds only estimate split-to-split "
           "variance.\n";
  }

  auto by_model_dataset = [&](const std::string& title, auto get) {
    out << "\n## " << title << "\n\n";
    TableHeader(out, datasets);
    for (const std::string& model : model_set) {
      out << "| " << MarkdownCell(model) << " |";
      for (const std::string& ds : datasets) {
        out << ' '
            << MeanCell(
                   report,
                   [&](const ReportRow& r) {
                     return r.model_id == model && r.dataset_id == ds;
                   },
                   get)
            << " |";
      }
      out << '\n';
    }
  };

  auto by_dataset_fn = [&](const std::string& title, double alpha, auto get) {
    out << "\n## " << title << " (alpha = " << FormatNumber(alpha) << ")\n\n";
    std::vector<std::string> columns;
    for (const std::string& ds : datasets) {
      for (ScoreFunction fn : fns) {
        columns.push_back(ds + " " + std::string(ScoreFunctionName(fn)));
      }
    }
    TableHeader(out, columns);
    for (const std::string& model : model_set) {
      out << "| " << MarkdownCell(model) << " |";
      for (const std::string& ds : datasets) {
        for (ScoreFunction fn : fns) {
          out << ' '
              << MeanCell(
                     report,
                     [&](const ReportRow& r) {
                       return r.model_id == model && r.dataset_id == ds &&
                              r.fn == fn && r.alpha == alpha;
                     },
                     get)
              << " |";
        }
      }
      out << '\n';
    }
  };

  by_model_dataset("Accuracy",
                   [](const ReportRow& r) { return r.metrics.accuracy; });
  for (double alpha : config.alphas) {
    by_dataset_fn("Set size", alpha,
                  [](const ReportRow& r) { return r.metrics.set_size; });
    by_dataset_fn("Coverage", alpha,
                  [](const ReportRow& r) { return r.metrics.coverage; });
    by_dataset_fn("Empty prediction sets", alpha, [](const ReportRow& r) {
      return static_cast<double>(r.metrics.empty_set_count);
    });
  }
  by_model_dataset(
      config.entropy_normalized ? "Mean entropy (normalized)"
                                : "Mean entropy (bits)",
      [](const ReportRow& r) { return r.metrics.mean_entropy; });
  if (config.entropy_normalized) {
    by_model_dataset("Mean entropy (bits)",
                     [](const ReportRow& r) { return r.mean_entropy_bits; });
  }

  if (errors > 0) {
    out << "\n## Errors\n\n";
    for (const ReportRow& row : report.rows) {
      if (row.ok()) continue;
      out << "- " << MarkdownCell(row.model_id) << " / "
          << MarkdownCell(row.dataset_id) << " / " << ScoreFunctionName(row.fn)
          << " / alpha " << FormatNumber(row.alpha) << " / seed " << row.seed
          << ": " << MarkdownCell(*row.error) << '\n';
    }
  }
  return out.str();
}

std::string PlotDataCsv(const BenchmarkReport& report) {
  std::ostringstream out;
  out << "model_id,dataset_id,score_fn,alpha,seed,accuracy,set_size\n";
  for (const ReportRow& row : report.rows) {
    if (!row.ok()) continue;
    out << CsvField(row.model_id) << ',' << CsvField(row.dataset_id) << ','
        << ScoreFunctionName(row.fn) << ',' << FormatNumber(row.alpha) << ','
        << row.seed << ',' << FormatNumber(row.metrics.accuracy) << ','
        << FormatNumber(row.metrics.set_size) << '\n';
  }
  return out.str();
}

std::string SummaryCsv(std::span<const SummaryRow> rows,
                       std::span<const Dimension> group_by) {
  std::ostringstream out;
  for (Dimension dim : group_by) out << DimensionName(dim) << ',';
  out << "group_size,error_rows,accuracy,set_size,coverage,mean_entropy\n";
  for (const SummaryRow& s : rows) {
    for (const std::string& k : s.key) out << CsvField(k) << ',';
    out << s.group_size << ',' << s.error_rows << ',';
    if (s.group_size > 0) {
      out << FormatNumber(s.accuracy) << ',' << FormatNumber(s.set_size) << ','
          << FormatNumber(s.coverage) << ',' << FormatNumber(s.mean_entropy);
    } else {
      out << ",,,";
    }
    out << '\n';
  }
  return out.str();
}

std::vector<std::filesystem::path> EmitReport(const BenchmarkReport& report,
                                              const BenchmarkConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIoError, "cannot create " +
                                         config.output_dir.string() + ": " +
                                         ec.message());
  }
  std::vector<std::filesystem::path> written;
  for (ReportFormat format : config.formats) {
    std::filesystem::path path;
    std::string text;
    switch (format) {
      case ReportFormat::kCsv:
        path = config.output_dir / "report.csv";
        text = ReportCsv(report);
        break;
      case ReportFormat::kJson:
        path = config.output_dir / "report.json";
        text = ReportJson(report);
        break;
      case ReportFormat::kMarkdown:
        path = config.output_dir / "report.md";
        text = ReportMarkdown(report, config);
        break;
      case ReportFormat::kPlotData:
        path = config.output_dir / "accuracy_vs_set_size.csv";
        text = PlotDataCsv(report);
        break;
    }
    if (std::find(written.begin(), written.end(), path) != written.end()) {
      continue;
    }
    WriteFile(path, text);
    written.push_back(path);
  }
  return written;
}

}  // namespace confset
