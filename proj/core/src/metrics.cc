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

#include "confset/metrics.h"

#include <cmath>
#include <string>

#include "confset/errors.h"

namespace confset {
namespace {

template <typename T>
void RequireNonEmpty(std::span<const T> items, const char* what) {
  if (items.empty()) {
    throw Error(ErrorCode::kInvalidConfig,
                std::string(what) + " over an empty test set");
  }
}

double Fraction(std::size_t count, std::size_t total) {
  return static_cast<double>(count) / static_cast<double>(total);
}

}  // namespace

std::string_view PredictionSourceName(PredictionSource source) {
  return source == PredictionSource::kRecord ? "record" : "argmax";
}

std::optional<PredictionSource> ParsePredictionSource(std::string_view name) {
  if (name == "record") return PredictionSource::kRecord;
  if (name == "argmax") return PredictionSource::kArgmax;
  return std::nullopt;
}

std::string_view EntropyScopeName(EntropyScope scope) {
  return scope == EntropyScope::kAllRecords ? "all" : "test";
}

std::optional<EntropyScope> ParseEntropyScope(std::string_view name) {
  if (name == "all") return EntropyScope::kAllRecords;
  if (name == "test") return EntropyScope::kTestSplit;
  return std::nullopt;
}

double SetSize(std::span<const TestOutcome> test) {
  RequireNonEmpty(test, "set size");
  std::size_t total = 0;
  for (const TestOutcome& t : test) total += t.set.size();
  return Fraction(total, test.size());
}

double Coverage(std::span<const TestOutcome> test) {
  RequireNonEmpty(test, "coverage");
  std::size_t hits = 0;
  for (const TestOutcome& t : test) {
    if (t.set.Contains(t.record.true_label)) ++hits;
  }
  return Fraction(hits, test.size());
}

std::size_t EmptySetCount(std::span<const TestOutcome> test) {
  std::size_t empty = 0;
  for (const TestOutcome& t : test) {
    if (t.set.empty()) ++empty;
  }
  return empty;
}

double Accuracy(std::span<const EvalRecord> records) {
  RequireNonEmpty(records, "accuracy");
  std::size_t hits = 0;
  for (const EvalRecord& r : records) {
    if (r.predicted_label == r.true_label) ++hits;
  }
  return Fraction(hits, records.size());
}

double Accuracy(std::span<const TestOutcome> test, PredictionSource source) {
  RequireNonEmpty(test, "accuracy");
  std::size_t hits = 0;
  for (const TestOutcome& t : test) {
    const OptionLabel predicted = source == PredictionSource::kRecord
                                      ? t.record.predicted_label
                                      : Argmax(t.distribution);
    if (predicted == t.record.true_label) ++hits;
  }
  return Fraction(hits, test.size());
}

double Entropy(const PredictiveDistribution& dist, bool normalized) {
  double h = 0.0;
  for (double p : dist.probs()) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  if (normalized) h /= std::log2(static_cast<double>(dist.size()));
  return h;
}

double MeanEntropy(std::span<const PredictiveDistribution> dists,
                   bool normalized) {
  RequireNonEmpty(dists, "mean entropy");
  double total = 0.0;
  for (const PredictiveDistribution& d : dists) total += Entropy(d, normalized);
  return total / static_cast<double>(dists.size());
}

EvalMetrics ComputeMetrics(const SplitResult& split, double mean_entropy,
                           PredictionSource source) {
  const std::span<const TestOutcome> test(split.test);
  EvalMetrics m;
  m.set_size = SetSize(test);
  m.accuracy = Accuracy(test, source);
  m.coverage = Coverage(test);
  m.mean_entropy = mean_entropy;
  m.n_test = test.size();
  m.empty_set_count = EmptySetCount(test);
  return m;
}

}  // namespace confset
