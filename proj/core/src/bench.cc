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

#include "confset/bench.h"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>
#include <utility>

#include "confset/conformal.h"
#include "confset/errors.h"
#include "confset/ingest.h"
#include "confset/profiles.h"
#include "confset/report.h"
#include "json.hpp"

namespace confset {
namespace {

using nlohmann::json;

[[noreturn]] void BadConfig(const std::string& message) {
  throw Error(ErrorCode::kInvalidConfig, message);
}

// Records of one (dataset, model) pair from one source, ready to split.
struct Group {
  std::string source;
  std::string dataset_id;
  std::string model_id;
  std::vector<EvalRecord> records;
  std::vector<PredictiveDistribution> dists;
  std::optional<std::string> error;
};

struct Task {
  const Group* group;
  std::uint64_t seed;
};

ReportRow ErrorRow(std::string model_id, std::string dataset_id,
                   ScoreFunction fn, double alpha, std::uint64_t seed,
                   std::string message) {
  ReportRow row;
  row.model_id = std::move(model_id);
  row.dataset_id = std::move(dataset_id);
  row.fn = fn;
  row.alpha = alpha;
  row.seed = seed;
  row.error = std::move(message);
  return row;
}

std::vector<ReportRow> EvaluateTask(const Task& task,
                                    const BenchmarkConfig& config) {
  const Group& g = *task.group;
  std::vector<ReportRow> rows;
  auto fail_all = [&](const std::string& message) {
    for (double alpha : config.alphas) {
      for (ScoreFunction fn : config.score_functions) {
        rows.push_back(ErrorRow(g.model_id, g.dataset_id, fn, alpha,
                                task.seed, message));
      }
    }
  };
  if (g.error) {
    fail_all(*g.error);
    return rows;
  }

  SplitPartition partition;
  try {
    partition = PartitionRecords(
        g.records, SplitConfig{config.alphas.front(),
                               config.calibration_fraction, task.seed});
  } catch (const Error& e) {
    fail_all(std::string(e.what()) + " [" + g.source + "]");
    return rows;
  }

  auto entropy_over = [&](bool normalized) {
    if (config.entropy_scope == EntropyScope::kAllRecords) {
      return MeanEntropy(g.dists, normalized);
    }
    std::vector<PredictiveDistribution> test;
    test.reserve(partition.test.size());
    for (std::size_t idx : partition.test) test.push_back(g.dists[idx]);
    return MeanEntropy(test, normalized);
  };
  const double entropy_bits = entropy_over(false);
  const double entropy =
      config.entropy_normalized ? entropy_over(true) : entropy_bits;

  for (double alpha : config.alphas) {
    for (ScoreFunction fn : config.score_functions) {
      try {
        const SplitResult split =
            ApplySplit(g.records, g.dists, partition, alpha, fn);
        ReportRow row;
        row.model_id = g.model_id;
        row.dataset_id = g.dataset_id;
        row.fn = fn;
        row.alpha = alpha;
        row.seed = task.seed;
        row.n_cal = partition.calibration.size();
        row.n_test = partition.test.size();
        row.qhat = split.threshold.qhat();
        row.metrics = ComputeMetrics(split, entropy, config.prediction_source);
        row.mean_entropy_bits = entropy_bits;
        rows.push_back(std::move(row));
      } catch (const Error& e) {
        rows.push_back(ErrorRow(g.model_id, g.dataset_id, fn, alpha, task.seed,
                                std::string(e.what()) + " [" + g.source + "]"));
      }
    }
  }
  return rows;
}

std::vector<Group> BuildGroups(const BenchmarkConfig& config,
                               std::span<const Corpus> corpora,
                               std::size_t& excluded) {
  std::vector<Group> groups;
  for (const Corpus& corpus : corpora) {
    if (corpus.load_error) {
      Group g;
      g.source = corpus.source;
      g.dataset_id = corpus.source;
      g.error = *corpus.load_error;
      groups.push_back(std::move(g));
      continue;
    }
    std::map<std::pair<std::string, std::string>, Group> by_pair;
    for (const EvalRecord& r : corpus.records) {
      if (r.multi_image) {
        ++excluded;
        continue;
      }
      Group& g = by_pair[{r.dataset_id, r.model_id}];
      if (g.records.empty()) {
        g.source = corpus.source;
        g.dataset_id = r.dataset_id;
        g.model_id = r.model_id;
      }
      g.records.push_back(r);
    }
    if (by_pair.empty()) {
      Group g;
      g.source = corpus.source;
      g.dataset_id = corpus.source;
      g.error = "no usable records in " + corpus.source;
      groups.push_back(std::move(g));
      continue;
    }
    for (auto& [key, g] : by_pair) {
      try {
        std::optional<DatasetProfile> profile;
        if (config.pad_to_profile) profile = FindProfile(g.dataset_id);
        for (EvalRecord& r : g.records) {
          ValidateRecord(r);
          if (profile) r = PadOptions(r, *profile);
          g.dists.push_back(Normalize(r.logprobs));
        }
      } catch (const Error& e) {
        g.error = std::string(e.what()) + " [" + g.source + "]";
        g.dists.clear();
      }
      groups.push_back(std::move(g));
    }
  }
  return groups;
}

std::vector<std::string> StringArray(const json& value, const char* key) {
  if (!value.is_array()) BadConfig(std::string(key) + " must be an array");
  std::vector<std::string> out;
  for (const json& v : value) {
    if (!v.is_string()) {
      BadConfig(std::string(key) + " must hold strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

std::string_view ReportFormatName(ReportFormat format) {
  switch (format) {
    case ReportFormat::kCsv:
      return "csv";
    case ReportFormat::kJson:
      return "json";
    case ReportFormat::kMarkdown:
      return "markdown";
    case ReportFormat::kPlotData:
      return "plot";
  }
  return "unknown";
}

std::optional<ReportFormat> ParseReportFormat(std::string_view name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  if (name == "markdown" || name == "md") return ReportFormat::kMarkdown;
  if (name == "plot") return ReportFormat::kPlotData;
  return std::nullopt;
}

void ValidateBenchmarkConfig(const BenchmarkConfig& config) {
  if (config.inputs.empty()) BadConfig("inputs must not be empty");
  if (config.alphas.empty()) BadConfig("alphas must not be empty");
  for (double alpha : config.alphas) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
      BadConfig("alpha must be in the open interval (0, 1), got " +
                FormatNumber(alpha));
    }
  }
  if (config.score_functions.empty()) {
    BadConfig("score_functions must not be empty");
  }
  if (config.seeds.empty()) BadConfig("seeds must not be empty");
  if (!(config.calibration_fraction > 0.0 &&
        config.calibration_fraction < 1.0)) {
    BadConfig("calibration_fraction must be in the open interval (0, 1), got " +
              FormatNumber(config.calibration_fraction));
  }
  if (config.workers < 1) BadConfig("workers must be at least 1");
  if (config.formats.empty()) BadConfig("formats must not be empty");
}

BenchmarkConfig ParseBenchmarkConfig(std::string_view json_text,
                                     const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::exception& e) {
    BadConfig(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) BadConfig("config must be a JSON object");

  BenchmarkConfig config;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "inputs") {
        config.inputs.clear();
        for (const std::string& s : StringArray(value, "inputs")) {
          std::filesystem::path p(s);
          config.inputs.push_back(p.is_relative() ? base_dir / p : p);
        }
      } else if (key == "alphas") {
        config.alphas = value.get<std::vector<double>>();
      } else if (key == "score_functions") {
        config.score_functions.clear();
        for (const std::string& s : StringArray(value, "score_functions")) {
          auto fn = ParseScoreFunction(s);
          if (!fn) BadConfig("unknown score function: " + s);
          config.score_functions.push_back(*fn);
        }
      } else if (key == "seeds") {
        config.seeds = value.get<std::vector<std::uint64_t>>();
      } else if (key == "calibration_fraction") {
        config.calibration_fraction = value.get<double>();
      } else if (key == "output_dir") {
        config.output_dir = value.get<std::string>();
      } else if (key == "formats") {
        config.formats.clear();
        for (const std::string& s : StringArray(value, "formats")) {
          auto f = ParseReportFormat(s);
          if (!f) BadConfig("unknown report format: " + s);
          config.formats.push_back(*f);
        }
      } else if (key == "workers") {
        config.workers = value.get<int>();
      } else if (key == "entropy_normalized") {
        config.entropy_normalized = value.get<bool>();
      } else if (key == "entropy_scope") {
        auto scope = ParseEntropyScope(value.get<std::string>());
        if (!scope) BadConfig("entropy_scope must be \"all\" or \"test\"");
        config.entropy_scope = *scope;
      } else if (key == "prediction_source") {
        auto source = ParsePredictionSource(value.get<std::string>());
        if (!source) {
          BadConfig("prediction_source must be \"record\" or \"argmax\"");
        }
        config.prediction_source = *source;
      } else if (key == "pad_to_profile") {
        config.pad_to_profile = value.get<bool>();
      } else {
        BadConfig("unknown config key: " + key);
      }
    }
  } catch (const json::exception& e) {
    BadConfig(std::string("config has a field of the wrong type: ") +
              e.what());
  }
  ValidateBenchmarkConfig(config);
  return config;
}

BenchmarkConfig LoadBenchmarkConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) BadConfig("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseBenchmarkConfig(buffer.str(), path.parent_path());
}

bool RowOrder(const ReportRow& a, const ReportRow& b) {
  return std::forward_as_tuple(a.model_id, a.dataset_id, ScoreFunctionName(a.fn),
                               a.alpha, a.seed) <
         std::forward_as_tuple(b.model_id, b.dataset_id, ScoreFunctionName(b.fn),
                               b.alpha, b.seed);
}

BenchmarkReport RunBenchmark(const BenchmarkConfig& config) {
  ValidateBenchmarkConfig(config);
  std::vector<Corpus> corpora;
  for (const std::filesystem::path& input : config.inputs) {
    Corpus c;
    c.source = input.string();
    try {
      c.records = ParseRecordFile(input);
    } catch (const Error& e) {
      c.load_error = std::string(e.what()) + " [" + c.source + "]";
    }
    corpora.push_back(std::move(c));
  }
  return RunBenchmark(config, corpora);
}

BenchmarkReport RunBenchmark(const BenchmarkConfig& config,
                             std::span<const Corpus> corpora) {
  ValidateBenchmarkConfig(config);
  BenchmarkReport report;
  const std::vector<Group> groups =
      BuildGroups(config, corpora, report.excluded_multi_image);

  std::vector<Task> tasks;
  for (const Group& g : groups) {
    for (std::uint64_t seed : config.seeds) tasks.push_back({&g, seed});
  }
  std::vector<std::vector<ReportRow>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      results[i] = EvaluateTask(tasks[i], config);
    }
  };
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(config.workers),
                            std::max<std::size_t>(tasks.size(), 1));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  for (auto& rows : results) {
    for (ReportRow& row : rows) report.rows.push_back(std::move(row));
  }
  std::stable_sort(report.rows.begin(), report.rows.end(), RowOrder);
  return report;
}

std::string_view DimensionName(Dimension dim) {
  switch (dim) {
    case Dimension::kModel:
      return "model_id";
    case Dimension::kDataset:
      return "dataset_id";
    case Dimension::kScoreFn:
      return "score_fn";
    case Dimension::kAlpha:
      return "alpha";
    case Dimension::kSeed:
      return "seed";
  }
  return "unknown";
}

Dimension ParseDimension(std::string_view name) {
  if (name == "model" || name == "model_id") return Dimension::kModel;
  if (name == "dataset" || name == "dataset_id") return Dimension::kDataset;
  if (name == "score_fn" || name == "fn") return Dimension::kScoreFn;
  if (name == "alpha") return Dimension::kAlpha;
  if (name == "seed") return Dimension::kSeed;
  BadConfig("unknown group-by dimension: " + std::string(name));
}

std::vector<SummaryRow> Aggregate(const BenchmarkReport& report,
                                  std::span<const Dimension> group_by) {
  if (report.rows.empty()) BadConfig("cannot aggregate an empty report");
  std::map<std::vector<std::string>, SummaryRow> groups;
  for (const ReportRow& row : report.rows) {
    std::vector<std::string> key;
    for (Dimension dim : group_by) {
      switch (dim) {
        case Dimension::kModel:
          key.push_back(row.model_id);
          break;
        case Dimension::kDataset:
          key.push_back(row.dataset_id);
          break;
        case Dimension::kScoreFn:
          key.emplace_back(ScoreFunctionName(row.fn));
          break;
        case Dimension::kAlpha:
          key.push_back(FormatNumber(row.alpha));
          break;
        case Dimension::kSeed:
          key.push_back(std::to_string(row.seed));
          break;
      }
    }
    SummaryRow& s = groups[key];
    s.key = key;
    if (!row.ok()) {
      ++s.error_rows;
      continue;
    }
    ++s.group_size;
    s.accuracy += row.metrics.accuracy;
    s.set_size += row.metrics.set_size;
    s.coverage += row.metrics.coverage;
    s.mean_entropy += row.metrics.mean_entropy;
  }
  std::vector<SummaryRow> out;
  out.reserve(groups.size());
  for (auto& [key, s] : groups) {
    if (s.group_size > 0) {
      const auto n = static_cast<double>(s.group_size);
      s.accuracy /= n;
      s.set_size /= n;
      s.coverage /= n;
      s.mean_entropy /= n;
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace confset
