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

// confset command-line tool.
//
//   confset validate --input FILE --dataset NAME
//   confset run      --config FILE | --input FILE... [options]
//   confset collect  --questions FILE --output FILE --base-url URL --model ID
//   confset synth    --n N --k K --seed S --miscalibration T [--output FILE]
//
// Exit codes: 0 success, 1 data problems (violations, error rows, failed
// questions), 2 usage, config, parse, or I/O errors.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "confset/bench.h"
#include "confset/errors.h"
#include "confset/ingest.h"
#include "confset/modelclient.h"
#include "confset/profiles.h"
#include "confset/report.h"
#include "confset/synth.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDataProblem = 1;
constexpr int kExitUsage = 2;

struct ValidateArgs {
  std::string input;
  std::string dataset;
};

struct RunArgs {
  std::string config;
  std::vector<std::string> inputs;
  std::vector<double> alphas;
  std::vector<std::string> score_fns;
  std::vector<std::uint64_t> seeds;
  double calibration_fraction = -1.0;
  std::string output_dir;
  std::vector<std::string> formats;
  int workers = 0;
  std::string entropy_scope;
  bool raw_entropy = false;
  std::string prediction_source;
  bool pad_to_profile = false;
  std::vector<std::string> group_by;
};

struct CollectArgs {
  std::string questions;
  std::string output;
  std::string failures;
  std::string base_url;
  std::string model;
  std::string api_key_env = std::string(confset::kDefaultApiKeyVariable);
  int concurrency = 4;
  double timeout = 60.0;
  int max_attempts = 3;
  double backoff = 1.0;
  int top_logprobs = 20;
};

struct SynthArgs {
  std::size_t n = 1000;
  int k = 4;
  std::uint64_t seed = 0;
  double miscalibration = 1.0;
  double concentration = 1.0;
  std::string dataset = "synthetic";
  std::string model = "synth";
  std::string output;
};

int Validate(const ValidateArgs& args) {
  const auto profile = confset::FindProfile(args.dataset);
  if (!profile) {
    std::cerr << "error: unknown dataset profile '" << args.dataset
              << "'; known:";
    for (const auto& p : confset::BuiltinProfiles()) {
      std::cerr << ' ' << p.dataset_id;
    }
    std::cerr << '\n';
    return kExitUsage;
  }
  std::vector<confset::EvalRecord> records;
  try {
    records = confset::ParseRecordFile(args.input);
  } catch (const confset::Error& e) {
    std::cerr << "error: " << args.input << ": " << e.what() << '\n';
    return kExitUsage;
  }
  const auto report = confset::ValidateCorpus(records, *profile);
  std::cout << report.ToText();
  return report.ok() ? kExitOk : kExitDataProblem;
}

int Run(const RunArgs& args) {
  confset::BenchmarkConfig config;
  std::vector<confset::Dimension> group_by;
  try {
    if (!args.config.empty()) {
      config = confset::LoadBenchmarkConfig(args.config);
    }
    if (!args.inputs.empty()) {
      config.inputs.assign(args.inputs.begin(), args.inputs.end());
    }
    if (!args.alphas.empty()) config.alphas = args.alphas;
    if (!args.score_fns.empty()) {
      config.score_functions.clear();
      for (const std::string& s : args.score_fns) {
        const auto fn = confset::ParseScoreFunction(s);
        if (!fn) {
          throw confset::Error(confset::ErrorCode::kInvalidConfig,
                               "unknown score function: " + s);
        }
        config.score_functions.push_back(*fn);
      }
    }
    if (!args.seeds.empty()) config.seeds = args.seeds;
    if (args.calibration_fraction >= 0.0) {
      config.calibration_fraction = args.calibration_fraction;
    }
    if (!args.output_dir.empty()) config.output_dir = args.output_dir;
    if (!args.formats.empty()) {
      config.formats.clear();
      for (const std::string& s : args.formats) {
        const auto f = confset::ParseReportFormat(s);
        if (!f) {
          throw confset::Error(confset::ErrorCode::kInvalidConfig,
                               "unknown format: " + s);
        }
        config.formats.push_back(*f);
      }
    }
    if (args.workers > 0) config.workers = args.workers;
    if (!args.entropy_scope.empty()) {
      const auto scope = confset::ParseEntropyScope(args.entropy_scope);
      if (!scope) {
        throw confset::Error(confset::ErrorCode::kInvalidConfig,
                             "entropy scope must be all or test");
      }
      config.entropy_scope = *scope;
    }
    if (args.raw_entropy) config.entropy_normalized = false;
    if (!args.prediction_source.empty()) {
      const auto source =
          confset::ParsePredictionSource(args.prediction_source);
      if (!source) {
        throw confset::Error(confset::ErrorCode::kInvalidConfig,
                             "prediction source must be record or argmax");
      }
      config.prediction_source = *source;
    }
    if (args.pad_to_profile) config.pad_to_profile = true;
    for (const std::string& d : args.group_by) {
      group_by.push_back(confset::ParseDimension(d));
    }
    confset::ValidateBenchmarkConfig(config);
    for (const auto& input : config.inputs) {
      if (!std::filesystem::is_regular_file(input)) {
        throw confset::Error(confset::ErrorCode::kInvalidConfig,
                             "input not found: " + input.string());
      }
    }
  } catch (const confset::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    const confset::BenchmarkReport report = confset::RunBenchmark(config);
    const auto files = confset::EmitReport(report, config);
    std::size_t errors = 0;
    for (const auto& row : report.rows) {
      if (!row.ok()) {
        ++errors;
        std::cerr << "error row: " << row.model_id << " / " << row.dataset_id
                  << " / " << confset::ScoreFunctionName(row.fn) << ": "
                  << *row.error << '\n';
      }
    }
    std::cout << report.rows.size() << " rows (" << errors << " errors)\n";
    for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
    if (!args.group_by.empty()) {
      const auto summary = confset::Aggregate(report, group_by);
      const std::string csv = confset::SummaryCsv(summary, group_by);
      const auto path = config.output_dir / "summary.csv";
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      if (!out) {
        throw confset::Error(confset::ErrorCode::kIoError,
                             "cannot write " + path.string());
      }
      out << csv;
      std::cout << "wrote " << path.string() << '\n' << csv;
    }
    return errors == 0 ? kExitOk : kExitDataProblem;
  } catch (const confset::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int Collect(const CollectArgs& args) {
  try {
    confset::EndpointConfig config;
    config.base_url = args.base_url;
    config.model_id = args.model;
    config.api_key = confset::ApiKeyFromEnvironment(args.api_key_env);
    config.max_concurrency = args.concurrency;
    config.timeout_seconds = args.timeout;
    config.retry.max_attempts = args.max_attempts;
    config.retry.backoff_base_seconds = args.backoff;
    config.top_logprobs = args.top_logprobs;
    confset::ValidateEndpointConfig(config);

    const auto questions = confset::ParseQuestionFile(args.questions);
    const std::string failures =
        args.failures.empty() ? args.output + ".failures.jsonl" : args.failures;
    const auto summary = confset::CollectCorpus(
        config, confset::BuiltinTemplates(), questions, args.output, failures);
    std::cout << summary.written << " of " << questions.size()
              << " records written to " << args.output << '\n';
    for (const auto& f : summary.failures) {
      std::cerr << "failed " << f.record_id << ": " << f.error << '\n';
    }
    if (!summary.failures.empty()) {
      std::cout << summary.failures.size() << " failures logged to "
                << failures << '\n';
      return kExitDataProblem;
    }
    return kExitOk;
  } catch (const confset::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int Synth(const SynthArgs& args) {
  try {
    confset::SynthConfig config;
    config.n = args.n;
    config.k = args.k;
    config.seed = args.seed;
    config.temperature = args.miscalibration;
    config.concentration = args.concentration;
    config.dataset_id = args.dataset;
    config.model_id = args.model;
    const auto records = confset::GenerateSynthetic(config);
    if (args.output.empty() || args.output == "-") {
      confset::WriteRecords(std::cout, records);
      std::cout.flush();
    } else {
      confset::WriteRecordFile(args.output, records);
    }
    return kExitOk;
  } catch (const confset::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Split conformal prediction for multiple-choice model outputs"};
  app.require_subcommand(1, 1);

  ValidateArgs validate_args;
  auto* validate = app.add_subcommand(
      "validate", "Check a record file against a built-in dataset profile");
  validate->add_option("--input", validate_args.input, "Record file (JSONL)")
      ->required();
  validate
      ->add_option("--dataset", validate_args.dataset,
                   "Profile: AI2D, ScienceQA, MathVision, WorldMedQAV, MMMU, "
                   "MMMU-Pro")
      ->required();

  RunArgs run_args;
  auto* run = app.add_subcommand(
      "run", "Calibrate, build prediction sets, and write reports");
  run->add_option("--config", run_args.config, "Benchmark config (JSON)");
  run->add_option("--input", run_args.inputs, "Record file(s)");
  run->add_option("--alpha", run_args.alphas, "Miscoverage rate(s)");
  run->add_option("--score-fn", run_args.score_fns,
                  "LAC, APS, MARGIN_LABEL (MS), MARGIN_PAPER");
  run->add_option("--seed", run_args.seeds, "Split seed(s)");
  run->add_option("--calibration-fraction", run_args.calibration_fraction,
                  "Share of each corpus used for calibration");
  run->add_option("--output-dir", run_args.output_dir, "Report directory");
  run->add_option("--format", run_args.formats, "csv, json, markdown, plot");
  run->add_option("--workers", run_args.workers, "Parallel tasks");
  run->add_option("--entropy-scope", run_args.entropy_scope, "all or test");
  run->add_flag("--raw-entropy", run_args.raw_entropy,
                "Report entropy in bits instead of normalized");
  run->add_option("--prediction-source", run_args.prediction_source,
                  "record or argmax");
  run->add_flag("--pad-to-profile", run_args.pad_to_profile,
                "Pad records of built-in datasets to the full option range");
  run->add_option("--group-by", run_args.group_by,
                  "Also write summary.csv grouped by model, dataset, "
                  "score_fn, alpha, seed");

  CollectArgs collect_args;
  auto* collect = app.add_subcommand(
      "collect", "Query a chat-completions endpoint and write record lines");
  collect->add_option("--questions", collect_args.questions,
                      "Question file (JSONL)")
      ->required();
  collect->add_option("--output", collect_args.output, "Record file to write")
      ->required();
  collect->add_option("--failures", collect_args.failures,
                      "Failure log (default: OUTPUT.failures.jsonl)");
  collect->add_option("--base-url", collect_args.base_url,
                      "Endpoint base URL, e.g. https://openrouter.ai/api/v1")
      ->required();
  collect->add_option("--model", collect_args.model, "Model identifier")
      ->required();
  collect->add_option("--api-key-env", collect_args.api_key_env,
                      "Environment variable holding the API key");
  collect->add_option("--concurrency", collect_args.concurrency,
                      "Maximum requests in flight");
  collect->add_option("--timeout", collect_args.timeout, "Seconds per request");
  collect->add_option("--max-attempts", collect_args.max_attempts,
                      "Attempts per question");
  collect->add_option("--backoff", collect_args.backoff,
                      "Base backoff in seconds");
  collect->add_option("--top-logprobs", collect_args.top_logprobs,
                      "Alternatives requested per token");

  SynthArgs synth_args;
  auto* synth = app.add_subcommand(
      "synth", "Generate a synthetic record file with known calibration");
  synth->add_option("--n", synth_args.n, "Number of records");
  synth->add_option("--k", synth_args.k, "Options per record (2-10)");
  synth->add_option("--seed", synth_args.seed, "Generator seed");
  synth->add_option("--miscalibration", synth_args.miscalibration,
                    "Temperature applied to the emitted log-probs (1 = "
                    "calibrated)");
  synth->add_option("--concentration", synth_args.concentration,
                    "Dirichlet concentration");
  synth->add_option("--dataset", synth_args.dataset, "dataset_id to stamp");
  synth->add_option("--model", synth_args.model, "model_id to stamp");
  synth->add_option("--output", synth_args.output,
                    "Output file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*validate) return Validate(validate_args);
  if (*run) {
    if (run_args.config.empty() && run_args.inputs.empty()) {
      std::cerr << "error: run needs --config or --input\n";
      return kExitUsage;
    }
    return Run(run_args);
  }
  if (*collect) return Collect(collect_args);
  return Synth(synth_args);
}
