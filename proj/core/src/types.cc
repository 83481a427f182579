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

#include "confset/types.h"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "confset/errors.h"

namespace confset {

OptionLabel OptionLabel::FromLetter(char letter) {
  if (letter < 'A' || letter >= 'A' + kMaxOptions) {
    throw Error(ErrorCode::kMalformedRecord,
                std::string("option letter must be in A..J, got '") + letter +
                    "'");
  }
  return OptionLabel(static_cast<std::uint8_t>(letter - 'A'));
}

OptionLabel OptionLabel::FromIndex(int index) {
  if (index < 0 || index >= kMaxOptions) {
    throw Error(ErrorCode::kMalformedRecord,
                "option index out of range: " + std::to_string(index));
  }
  return OptionLabel(static_cast<std::uint8_t>(index));
}

std::optional<OptionLabel> OptionLabel::Parse(std::string_view token) {
  while (!token.empty() &&
         std::isspace(static_cast<unsigned char>(token.front()))) {
    token.remove_prefix(1);
  }
  while (!token.empty() &&
         std::isspace(static_cast<unsigned char>(token.back()))) {
    token.remove_suffix(1);
  }
  if (token.size() != 1) return std::nullopt;
  const char upper =
      static_cast<char>(std::toupper(static_cast<unsigned char>(token[0])));
  if (upper < 'A' || upper >= 'A' + kMaxOptions) return std::nullopt;
  return OptionLabel(static_cast<std::uint8_t>(upper - 'A'));
}

PredictiveDistribution::PredictiveDistribution(std::vector<OptionLabel> labels,
                                               std::vector<double> probs)
    : labels_(std::move(labels)), probs_(std::move(probs)) {
  if (labels_.size() != probs_.size()) {
    throw Error(ErrorCode::kMalformedRecord,
                "labels and probabilities differ in length");
  }
  if (labels_.size() < static_cast<std::size_t>(kMinOptions) ||
      labels_.size() > static_cast<std::size_t>(kMaxOptions)) {
    throw Error(ErrorCode::kMalformedRecord,
                "distribution must have 2..10 options, got " +
                    std::to_string(labels_.size()));
  }
  for (std::size_t i = 1; i < labels_.size(); ++i) {
    if (!(labels_[i - 1] < labels_[i])) {
      throw Error(ErrorCode::kMalformedRecord,
                  "labels must be unique and sorted");
    }
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw Error(ErrorCode::kMalformedRecord,
                  "probability outside [0, 1]: " + std::to_string(p));
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kDistributionSumTolerance) {
    throw Error(ErrorCode::kMalformedRecord,
                "probabilities sum to " + std::to_string(sum));
  }
}

std::optional<std::size_t> PredictiveDistribution::IndexOf(
    OptionLabel label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

double PredictiveDistribution::ProbOf(OptionLabel label) const {
  auto idx = IndexOf(label);
  if (!idx) {
    throw Error(ErrorCode::kUnknownLabel,
                "label " + label.str() + " is not an option");
  }
  return probs_[*idx];
}

void ValidateRecord(const EvalRecord& record) {
  if (record.logprobs.size() < static_cast<std::size_t>(kMinOptions)) {
    throw Error(ErrorCode::kMalformedRecord,
                "record '" + record.record_id + "' has fewer than 2 options");
  }
  for (const auto& [label, value] : record.logprobs) {
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::kMalformedRecord,
                  "record '" + record.record_id +
                      "' has a non-finite score for " + label.str());
    }
  }
  if (!record.logprobs.contains(record.true_label)) {
    throw Error(ErrorCode::kMalformedRecord,
                "record '" + record.record_id + "': true_label " +
                    record.true_label.str() + " is not an option");
  }
  if (!record.logprobs.contains(record.predicted_label)) {
    throw Error(ErrorCode::kMalformedRecord,
                "record '" + record.record_id + "': predicted_label " +
                    record.predicted_label.str() + " is not an option");
  }
}

void ValidateSplitConfig(const SplitConfig& config) {
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "alpha must be in the open interval (0, 1), got " +
                    std::to_string(config.alpha));
  }
  if (!(config.calibration_fraction > 0.0 &&
        config.calibration_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "calibration_fraction must be in the open interval (0, 1), "
                "got " +
                    std::to_string(config.calibration_fraction));
  }
}

PredictiveDistribution Normalize(const LogProbMap& logprobs) {
  if (logprobs.size() < static_cast<std::size_t>(kMinOptions)) {
    throw Error(ErrorCode::kMalformedRecord,
                "need at least 2 options to normalize");
  }
  std::vector<OptionLabel> labels;
  std::vector<double> values;
  labels.reserve(logprobs.size());
  values.reserve(logprobs.size());
  double max_value = -INFINITY;
  for (const auto& [label, value] : logprobs) {
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::kMalformedRecord,
                  "non-finite score for option " + label.str());
    }
    labels.push_back(label);
    values.push_back(value);
    max_value = std::max(max_value, value);
  }
  double total = 0.0;
  for (double& v : values) {
    v = std::exp(v - max_value);
    total += v;
  }
  for (double& v : values) v /= total;
  return PredictiveDistribution(std::move(labels), std::move(values));
}

OptionLabel Argmax(const PredictiveDistribution& dist) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < dist.size(); ++i) {
    if (dist.prob(i) > dist.prob(best)) best = i;
  }
  return dist.label(best);
}

}  // namespace confset
