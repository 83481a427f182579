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

#ifndef CONFSET_METRICS_H_
#define CONFSET_METRICS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "confset/conformal.h"
#include "confset/types.h"

namespace confset {

struct EvalMetrics {
  double set_size = 0.0;
  double accuracy = 0.0;
  double coverage = 0.0;
  double mean_entropy = 0.0;
  std::size_t n_test = 0;
  std::size_t empty_set_count = 0;

  friend bool operator==(const EvalMetrics&, const EvalMetrics&) = default;
};

// Where the predicted label used for accuracy comes from: the label the model
// decoded (stored in the record) or the argmax of the normalized scores.
enum class PredictionSource { kRecord, kArgmax };

std::string_view PredictionSourceName(PredictionSource source);
std::optional<PredictionSource> ParsePredictionSource(std::string_view name);

// Which records feed mean entropy.
enum class EntropyScope { kAllRecords, kTestSplit };

std::string_view EntropyScopeName(EntropyScope scope);
std::optional<EntropyScope> ParseEntropyScope(std::string_view name);

// Mean prediction-set cardinality. Throws InvalidConfig on an empty test set;
// so do the other aggregates below.
double SetSize(std::span<const TestOutcome> test);
double Coverage(std::span<const TestOutcome> test);
std::size_t EmptySetCount(std::span<const TestOutcome> test);

// Fraction of records whose predicted label equals the true label.
double Accuracy(std::span<const EvalRecord> records);
double Accuracy(std::span<const TestOutcome> test, PredictionSource source);

// Shannon entropy in bits with 0 log 0 = 0. `normalized` divides by log2 K.
double Entropy(const PredictiveDistribution& dist, bool normalized);

// Average of per-distribution entropies (not the entropy of the average).
double MeanEntropy(std::span<const PredictiveDistribution> dists,
                   bool normalized);

// SS, Acc, CR, and empty-set count from a split. mean_entropy is copied
// through as given.
EvalMetrics ComputeMetrics(const SplitResult& split, double mean_entropy,
                           PredictionSource source = PredictionSource::kRecord);

}  // namespace confset

#endif  // CONFSET_METRICS_H_
